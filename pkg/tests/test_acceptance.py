"""One test per acceptance criterion, each run at its stated tolerance.

The terminal summary prints a ``criterion N. title: PASS|FAIL`` line for each.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from sperner_eq.economy import (
    BUILTINS,
    builtin,
    cobb_douglas,
    equilibrium_residual,
    normalize_prices,
    price_map,
    walras_residual,
)
from sperner_eq.equivalence import build_map, certify, induced_excess_demand, sperner_via_equilibrium
from sperner_eq.labeling import is_fully_labeled
from sperner_eq.search import enumerate_fully_labeled, path_follow
from sperner_eq.simplex import barycenter, cell_grid_vertices, max_norm
from sperner_eq.solver import SolverConfig, slnc_diagnostic, solve

from conftest import random_labelings, two_good_cd_equilibrium

F = Fraction
CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SOLVE_CFG = SolverConfig(m_max=2**22, tol=1e-6)

ASYMMETRIC = [
    [(("3/4", "1/4"), (1, 0)), (("1/4", "3/4"), (0, 1))],
    [(("1/2", "1/2"), (1, 0)), (("1/4", "3/4"), (0, 1))],
    [(("2/3", "1/3"), (1, 1)), (("1/2", "1/2"), (1, 1))],
]


@pytest.fixture(scope="module")
def sperner_corpus():
    return random_labelings(500, [1, 2, 3], [1, 2, 3, 4, 5, 6], seed=2024)


@pytest.fixture(scope="module")
def solver_runs():
    runs = []
    econs = [("symmetric", builtin("symmetric"), (F(1, 2), F(1, 2)))]
    for i, consumers in enumerate(ASYMMETRIC):
        p0 = two_good_cd_equilibrium(consumers)
        econs.append((f"asymmetric-{i}", cobb_douglas(consumers), (p0, 1 - p0)))
    for name, econ, exact in econs:
        t0 = time.perf_counter()
        report = solve(econ, SOLVE_CFG)
        runs.append((name, econ, exact, report, time.perf_counter() - t0))
    return runs


def test_criterion_01_existence_and_parity(record_property, sperner_corpus):
    record_property("criterion", "1. Sperner existence + parity")
    t0 = time.perf_counter()
    for lab in sperner_corpus:
        cells = enumerate_fully_labeled(lab).cells
        assert len(cells) >= 1 and len(cells) % 2 == 1, (lab.n, lab.m, len(cells))
    elapsed = time.perf_counter() - t0
    assert elapsed < 60, elapsed


def test_criterion_02_path_in_enumeration(record_property, sperner_corpus):
    record_property("criterion", "2. path/enumeration agreement")
    for lab in sperner_corpus:
        assert path_follow(lab).cells[0] in enumerate_fully_labeled(lab).cells


def test_criterion_03_walras(record_property):
    record_property("criterion", "3. Walras law")
    rng = random.Random(3)
    for name in BUILTINS:
        econ = builtin(name)
        for _ in range(1000):
            p = normalize_prices([rng.random() + 1e-12 for _ in range(econ.goods)])
            assert walras_residual(econ, p) <= 1e-12, (name, p)
    for lab in random_labelings(20, [1, 2, 3], [1, 2, 3, 4], seed=33):
        g = induced_excess_demand(build_map(lab))
        for _ in range(50):
            raw = [F(rng.randint(0, 97)) for _ in range(lab.n + 1)]
            raw[rng.randrange(lab.n + 1)] += 1
            p = normalize_prices(raw)
            assert sum(a * b for a, b in zip(p, g(p))) == 0


def test_criterion_04_equilibrium_accuracy(record_property, solver_runs):
    record_property("criterion", "4. equilibrium accuracy")
    for name, _, exact, report, seconds in solver_runs:
        assert report.converged, name
        assert max_norm(report.prices, [float(x) for x in exact]) <= 1e-6, (name, report.prices, exact)
        assert seconds < 10, (name, seconds)


def test_criterion_05_fixed_point_equivalence(record_property, solver_runs):
    record_property("criterion", "5. fixed-point/equilibrium equivalence")
    extra = [(n, builtin(n)) for n in ("three_goods", "two_equilibria")]
    reports = [(econ, r) for _, econ, _, r, _ in solver_runs] + [(e, solve(e, SOLVE_CFG)) for _, e in extra]
    for econ, r in reports:
        assert r.converged
        assert equilibrium_residual(econ, r.prices) <= SOLVE_CFG.tol
        assert max_norm(price_map(econ, r.prices), r.prices) <= SOLVE_CFG.tol * (econ.n + 1)


def test_criterion_06_missing_label_identity(record_property):
    """As stated: phi_i(r) - r_i == (1 + 1/n) * tau at the barycenter of every cell missing label i.

    The vertex images raise a missing coordinate by tau/n, so the observed
    value is tau/n and this criterion fails for every instance that has a
    cell missing a label.  ``test_equivalence.py`` checks the tau/n identity.
    """
    record_property("criterion", "6. exact missing-label identity")
    mismatches, checked = [], 0
    for lab in random_labelings(100, [1, 2, 3], [1, 2, 3, 4, 5], seed=6):
        phi = build_map(lab)
        expected = (1 + F(1, lab.n)) * phi.tau
        for cell in lab.sub.cells():
            labels = {lab[v] for v in cell_grid_vertices(cell, lab.sub)}
            r = barycenter(cell, lab.sub)
            img = phi.on_cell(cell, r)
            for i in set(range(lab.n + 1)) - labels:
                checked += 1
                if img[i] - r[i] != expected:
                    mismatches.append((lab.n, lab.m, cell, i, img[i] - r[i], expected))
    assert checked > 0
    assert not mismatches, (
        f"{len(mismatches)}/{checked} checks differ; first: n={mismatches[0][0]} m={mismatches[0][1]} "
        f"cell={mismatches[0][2]} i={mismatches[0][3]} observed={mismatches[0][4]} expected={mismatches[0][5]}"
    )


def test_criterion_07_barycenter_fixed_point(record_property):
    record_property("criterion", "7. barycenter fixed point")
    seen = 0
    for lab in random_labelings(100, [1, 2, 3], [1, 2, 3, 4, 5], seed=7):
        phi = build_map(lab)
        for cell in enumerate_fully_labeled(lab).cells:
            r = barycenter(cell, lab.sub)
            assert phi.on_cell(cell, r) == r
            seen += 1
    assert seen >= 100


def test_criterion_08_equivalence_pipeline(record_property):
    record_property("criterion", "8. equivalence pipeline")
    t0 = time.perf_counter()
    for lab in random_labelings(50, [1, 2], [1, 2, 3, 4, 5], seed=8):
        cert = certify(lab)
        assert sperner_via_equilibrium(lab) == cert.cell
        assert is_fully_labeled(cert.cell, lab)
        assert cert.cell in enumerate_fully_labeled(lab).cells
        assert cert.residual < (1 + F(1, lab.n)) * cert.tau / 2
    elapsed = time.perf_counter() - t0
    assert elapsed < 120, elapsed


def test_criterion_09_slnc_diagnostic(record_property):
    record_property("criterion", "9. SLNC diagnostic soundness")
    flat = slnc_diagnostic(builtin("no_trade"), SolverConfig(slnc_resolution=12))
    assert flat.clusters and flat.flagged == len(flat.clusters)

    rep = slnc_diagnostic(builtin("symmetric"), SolverConfig(slnc_epsilon=0.35, slnc_halvings=4))
    assert len(rep.clusters) == 1 and rep.flagged == 0
    (c,) = rep.clusters
    assert len(c.diameters) == 5
    for ratio in c.ratios():
        assert ratio is not None and 0.25 <= ratio <= 1.0, c.diameters


def test_criterion_10_determinism(record_property, tmp_path):
    record_property("criterion", "10. determinism")
    manifests = [
        ["solve", str(CONFIGS / "skewed.json"), "--m-max", str(2**20)],
        ["solve", str(CONFIGS / "skewed.json"), "--mode", "rational", "--tol", "1e-3"],
        ["sperner", "--random", "3", "5", "--seed", "1"],
        ["sperner", "--random", "2", "9", "--seed", "1", "--strategy", "path"],
        ["equivalence", "--random", "2", "5", "--seed", "8"],
        ["diagnose", str(CONFIGS / "two_equilibria.json")],
    ]
    for argv in manifests:
        outs = []
        for k in range(2):
            out = tmp_path / f"r{k}.json"
            subprocess.run([sys.executable, "-m", "sperner_eq.cli", *argv, "--out", str(out)], check=False)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1], argv
