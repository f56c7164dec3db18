import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sperner_eq.equivalence import (
    build_map,
    certify,
    choose_tau,
    induced_excess_demand,
    parse_certificate,
    sperner_via_equilibrium,
)
from sperner_eq.errors import ImproperLabeling
from sperner_eq.labeling import is_fully_labeled, random_proper_labeling
from sperner_eq.search import enumerate_fully_labeled
from sperner_eq.simplex import (
    GridCell,
    barycenter,
    cell_grid_vertices,
    cell_vertices,
    locate_cell,
    subdivide,
)

from conftest import labeling_of, random_labelings, simplex_points

F = Fraction
HALF = F(1, 2)


def segment(labels):
    pts = [(1, 0), (HALF, HALF), (0, 1)]
    return labeling_of(1, 2, dict(zip(pts, labels)))


def rule_one(n):
    return random_proper_labeling(subdivide(n, 1), random.Random(0))


class TestTau:
    def test_segment(self):
        assert choose_tau(segment([0, 0, 1])) == F(1, 4)

    def test_vertex_labeling(self):
        assert choose_tau(rule_one(2)) == HALF

    @pytest.mark.parametrize("seed", range(20))
    def test_lower_bound(self, seed):
        rng = random.Random(seed)
        m = rng.randint(1, 6)
        lab = random_proper_labeling(subdivide(rng.randint(1, 3), m), rng)
        tau = choose_tau(lab)
        assert tau >= F(1, 2 * m)
        assert all(tau < F(v[lab[v]], m) for v in lab.sub.vertices())

    def test_improper(self):
        with pytest.raises(ImproperLabeling):
            choose_tau(segment([1, 0, 1]))


class TestMap:
    @pytest.mark.parametrize("seed", range(10))
    def test_vertex_images(self, seed):
        rng = random.Random(seed)
        lab = random_proper_labeling(subdivide(rng.randint(1, 3), rng.randint(1, 5)), rng)
        phi = build_map(lab)
        n, m, tau = lab.n, lab.m, phi.tau
        for v in lab.sub.vertices():
            img = phi.vertex_images[v]
            assert sum(img) == 1 and min(img) >= 0
            for j in range(n + 1):
                shift = -tau if j == lab[v] else tau / n
                assert img[j] == F(v[j], m) + shift
            assert phi(lab.sub.point(v)) == img

    @pytest.mark.parametrize("lab", random_labelings(40, [1, 2, 3], [1, 2, 3, 4], seed=7))
    def test_barycenter_fixed_in_fully_labeled(self, lab):
        phi = build_map(lab)
        for cell in enumerate_fully_labeled(lab).cells:
            r = barycenter(cell, lab.sub)
            assert phi(r) == r

    @pytest.mark.parametrize("lab", random_labelings(40, [1, 2, 3], [2, 3, 4], seed=8))
    def test_missing_label_gap(self, lab):
        # every vertex image raises a missing coordinate by tau/n, so the
        # linear extension does the same everywhere on the cell
        phi = build_map(lab)
        gap = phi.tau / lab.n
        assert phi.repulsion() == gap
        for cell in lab.sub.cells():
            labels = {lab[v] for v in cell_grid_vertices(cell, lab.sub)}
            samples = [barycenter(cell, lab.sub)] + cell_vertices(cell, lab.sub)
            for i in set(range(lab.n + 1)) - labels:
                for r in samples:
                    assert phi.on_cell(cell, r)[i] - r[i] == gap

    @pytest.mark.parametrize("lab", random_labelings(20, [1, 2, 3], [2, 3, 4], seed=9))
    def test_boundary_repulsion(self, lab):
        phi = build_map(lab)
        for v in lab.sub.vertices():
            r = lab.sub.point(v)
            img = phi(r)
            for i in range(lab.n + 1):
                if r[i] == 0:
                    assert img[i] > r[i]

    @pytest.mark.parametrize("lab", random_labelings(30, [1, 2], [1, 2, 3, 4], seed=10))
    def test_residual_certifies(self, lab):
        # below tau/n the containing cell cannot miss a label
        phi = build_map(lab)
        sub = subdivide(lab.n, 4 * lab.m)
        for v in sub.vertices():
            r = sub.point(v)
            if phi.residual(r) < phi.repulsion():
                assert is_fully_labeled(locate_cell(lab.sub, r), lab)


class TestExcessDemand:
    def test_hand_value(self):
        # cell [(1,0),(1/2,1/2)] has labels {0}; images (3/4,1/4) and (1/4,3/4);
        # phi(3/4,1/4) = (1/2,1/2), mu = (1/2)/(5/8) = 4/5, g = (-1/10, 3/10)
        g = induced_excess_demand(build_map(segment([0, 0, 1])))
        r = (F(3, 4), F(1, 4))
        assert g.mu(r) == F(4, 5)
        assert g(r) == (F(-1, 10), F(3, 10))

    @settings(max_examples=100, deadline=None)
    @given(st.data(), st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6))
    def test_walras_exact(self, data, n, m, seed):
        lab = random_proper_labeling(subdivide(n, m), random.Random(seed))
        g = induced_excess_demand(build_map(lab))
        p = data.draw(simplex_points(n, denom=60))
        assert sum(a * b for a, b in zip(p, g(p))) == 0

    @pytest.mark.parametrize("lab", random_labelings(10, [1, 2], [1, 2, 3], seed=11))
    def test_fixed_point_zero_demand(self, lab):
        g = induced_excess_demand(build_map(lab))
        for cell in enumerate_fully_labeled(lab).cells:
            r = barycenter(cell, lab.sub)
            assert g.mu(r) == 1
            assert g(r) == (0,) * (lab.n + 1)


class TestCertify:
    def test_segment(self):
        lab = segment([0, 0, 1])
        cell = sperner_via_equilibrium(lab)
        assert cell == GridCell((0, 2), (1,))
        assert enumerate_fully_labeled(lab).cells == (cell,)

    def test_whole_simplex(self):
        lab = rule_one(2)
        assert sperner_via_equilibrium(lab) == next(iter(lab.sub.cells()))

    def test_random_instances(self):
        for lab in random_labelings(50, [2], [1, 2, 3, 4, 5], seed=12):
            cert = certify(lab)
            assert cert.cell in enumerate_fully_labeled(lab).cells
            assert cert.residual < cert.bound == cert.tau / (2 * lab.n)
            assert cert.residual < (1 + F(1, lab.n)) * cert.tau / 2
            # refinement never leaves the labeling's own grid family
            assert all(t.m % lab.m == 0 for t in cert.report.trace)

    def test_json(self):
        cert = certify(segment([0, 0, 1]))
        obj = json.loads(cert.dumps())
        assert set(obj) == {"fully_labeled_cell", "equilibrium", "tau", "certificate"}
        back = parse_certificate(obj)
        assert back["fully_labeled_cell"] == cert.cell and back["tau"] == F(1, 4)
        assert back["residual"] == cert.residual and back["bound"] == cert.bound

    def test_improper(self):
        with pytest.raises(ImproperLabeling):
            certify(segment([1, 0, 1]))
