import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sperner_eq.labeling import Labeling, random_proper_labeling
from sperner_eq.simplex import subdivide


def labeling_of(n, m, pairs):
    """Labeling from ``{exact point tuple: label}`` given in fractions of the simplex."""
    sub = subdivide(n, m)
    labels = {tuple(int(Fraction(x) * m) for x in p): lab for p, lab in pairs.items()}
    return Labeling(sub, labels)


def random_labelings(count, dims, resolutions, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        sub = subdivide(rng.choice(dims), rng.choice(resolutions))
        out.append(random_proper_labeling(sub, rng))
    return out


def two_good_cd_equilibrium(consumers):
    """Closed form p0 of a two-good Cobb-Douglas economy.

    Market clearing for good 0 reads p0*W0 = sum_k a_k0 (p0 w_k0 + p1 w_k1),
    so p0 * sum_k (1 - a_k0) w_k0 = p1 * sum_k a_k0 w_k1.
    """
    A = sum((1 - Fraction(a[0])) * Fraction(w[0]) for a, w in consumers)
    B = sum(Fraction(a[0]) * Fraction(w[1]) for a, w in consumers)
    return B / (A + B)


@st.composite
def simplex_points(draw, n, denom=64, interior=False):
    lo = 1 if interior else 0
    cuts = sorted(draw(st.lists(st.integers(lo, denom - lo), min_size=n, max_size=n)))
    edges = [0] + cuts + [denom]
    parts = [b - a for a, b in zip(edges, edges[1:])]
    if interior and any(p == 0 for p in parts):
        parts = [p + 1 for p in parts]
    total = sum(parts)
    return tuple(Fraction(p, total) for p in parts)


@pytest.fixture
def rng():
    return random.Random(20240601)


# acceptance criteria report one line each in the terminal summary
ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not report.failed:
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    prev = ACCEPTANCE.get(crit, "PASS")
    ACCEPTANCE[crit] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: int(c.split(".")[0])):
        terminalreporter.write_line(f"criterion {crit}: {ACCEPTANCE[crit]}")
