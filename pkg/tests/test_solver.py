import json
from fractions import Fraction

import pytest

from sperner_eq.economy import builtin, cobb_douglas, price_map, walras_residual
from sperner_eq.errors import ConfigError
from sperner_eq.simplex import BarycentricPoint, max_norm, mesh_diameter, subdivide
from sperner_eq.solver import (
    EquilibriumReport,
    SLNCReport,
    SolverConfig,
    cauchy_extract,
    cover_resolution,
    slnc_diagnostic,
    solve,
)

from conftest import two_good_cd_equilibrium

F = Fraction
DEEP = SolverConfig(m_max=2**22)


@pytest.fixture(scope="module")
def symmetric_report():
    return solve(builtin("symmetric"), DEEP)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [dict(m_start=0), dict(m_start=8, m_max=4), dict(growth=1), dict(tol=0), dict(slnc_eta=-1), dict(mode="decimal")],
    )
    def test_rejects(self, kw):
        with pytest.raises(ConfigError):
            SolverConfig(**kw)

    def test_schedule(self):
        assert SolverConfig(m_start=3, m_max=50, growth=2).schedule() == [3, 6, 12, 24, 48]
        assert SolverConfig().tol == 1e-6 and SolverConfig().m_max == 4096


class TestSolve:
    def test_symmetric(self, symmetric_report):
        r = symmetric_report
        assert r.converged and r.residual <= 1e-6
        assert max_norm(r.prices, (0.5, 0.5)) <= 1e-6

    @pytest.mark.parametrize(
        "consumers",
        [
            [(("3/4", "1/4"), (1, 0)), (("1/4", "3/4"), (0, 1))],
            [(("1/2", "1/2"), (1, 0)), (("1/4", "3/4"), (0, 1))],
            [(("2/3", "1/3"), (1, 1)), (("1/2", "1/2"), (1, 1))],
        ],
    )
    def test_against_closed_form(self, consumers):
        p0 = two_good_cd_equilibrium(consumers)
        r = solve(cobb_douglas(consumers), DEEP)
        assert r.converged
        assert abs(r.prices[0] - float(p0)) <= 1e-6

    def test_three_goods(self):
        # unit endowments: p is the stationary vector of the preference matrix
        r = solve(builtin("three_goods"), DEEP)
        assert r.converged
        assert max_norm(r.prices, (12 / 35, 5 / 14, 3 / 10)) <= 1e-6

    def test_not_converged_keeps_trace(self):
        r = solve(builtin("skewed"), SolverConfig(m_start=2, m_max=2))
        assert not r.converged and len(r.trace) == 1 and r.trace[0].m == 2
        assert r.residual > 1e-6

    def test_default_budget_falls_short(self):
        # barycenter candidates sit about 1/(2m) away; m = 4096 cannot reach 1e-6
        r = solve(builtin("symmetric"), SolverConfig())
        assert not r.converged and len(r.trace) == 12

    @pytest.mark.parametrize("name", ["symmetric", "skewed", "three_goods", "two_equilibria"])
    def test_report_invariants(self, name):
        econ = builtin(name)
        cfg = DEEP
        r = solve(econ, cfg)
        assert r.converged and r.residual <= cfg.tol
        assert r.residual <= r.trace[0].residual
        assert walras_residual(econ, r.prices) <= 1e-12
        assert max_norm(price_map(econ, r.prices), r.prices) <= cfg.tol * (econ.n + 1)

    def test_rational_mode(self):
        r = solve(builtin("skewed"), SolverConfig(mode="rational", tol=1e-3))
        assert r.converged
        assert all(isinstance(c, Fraction) for c in r.prices)
        assert r.walras == 0
        assert r.prices == BarycentricPoint((F(511, 1024), F(513, 1024)))

    def test_reproducible(self, symmetric_report):
        again = solve(builtin("symmetric"), DEEP)
        assert json.dumps(again.to_json()) == json.dumps(symmetric_report.to_json())

    def test_json_roundtrip(self, symmetric_report):
        back = EquilibriumReport.from_json(json.loads(json.dumps(symmetric_report.to_json())))
        assert back == symmetric_report

    def test_csv_rows(self, symmetric_report):
        rows = symmetric_report.csv_rows()
        assert len(rows) == len(symmetric_report.trace)
        assert rows[0][0] == 2


class TestCauchy:
    def test_constant(self):
        p = BarycentricPoint((F(1, 2), F(1, 2)))
        assert cauchy_extract([p, p, p]) == (p, 0)

    def test_single(self):
        p = BarycentricPoint((F(1, 3), F(2, 3)))
        assert cauchy_extract([p]) == (p, 0)

    def test_empty(self):
        with pytest.raises(ValueError):
            cauchy_extract([])

    def test_symmetric_tail(self, symmetric_report):
        # the last three levels span m/4 .. m, so the tail is within a few final meshes
        final = subdivide(1, symmetric_report.trace[-1].m)
        assert symmetric_report.tail_diameter <= 2 * mesh_diameter(final)


class TestSLNC:
    def test_cover_resolution(self):
        assert cover_resolution(0.35) == 3
        assert cover_resolution(0.25) == 4

    def test_symmetric_single_shrinking_cluster(self):
        rep = slnc_diagnostic(builtin("symmetric"), SolverConfig(slnc_epsilon=0.35))
        assert len(rep.clusters) == 1 and rep.flagged == 0
        (c,) = rep.clusters
        assert all(0.25 <= r <= 1.0 for r in c.ratios())
        assert rep.verdict == "no evidence against SLNC"

    def test_no_trade_all_flagged(self):
        rep = slnc_diagnostic(builtin("no_trade"), SolverConfig(slnc_resolution=12))
        assert len(rep.clusters) == rep.cover_m**2 == rep.flagged
        assert rep.verdict == "evidence against SLNC"

    def test_two_equilibria(self):
        rep = slnc_diagnostic(builtin("two_equilibria"), SolverConfig())
        assert rep.flagged == 0 and len(rep.clusters) == 2
        for c in rep.clusters:
            assert c.diameters[-1] < c.diameters[0] / 4

    def test_roundtrip(self):
        rep = slnc_diagnostic(builtin("symmetric"), SolverConfig())
        assert SLNCReport.from_json(json.loads(json.dumps(rep.to_json()))) == rep

    def test_tampered_summary(self):
        obj = slnc_diagnostic(builtin("symmetric"), SolverConfig()).to_json()
        obj["flagged"] = 3
        with pytest.raises(ConfigError):
            SLNCReport.from_json(obj)
