"""From a proper labeling to an exchange economy whose equilibrium finds a fully labeled cell.

Every vertex ``p`` with label ``l`` is mapped to ``p - tau*e_l + (tau/n)*(1 - e_l)``
and the map is extended linearly over each cell.  The excess demand

    g(p) = phi(p) - mu(p) * p,    mu(p) = (p . phi(p)) / (p . p)

obeys Walras' law identically; its equilibria are exactly the barycenters of
fully labeled cells.  In a cell that misses label ``i`` every vertex image
raises coordinate ``i`` by ``tau/n``, so ``phi_i(r) - r_i == tau/n`` throughout
the cell and a point whose fixed-point residual is below ``tau/n`` cannot sit
in such a cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

from .economy import EconomySpec, induced_economy, parse_number
from .errors import ConfigError, ImproperLabeling, NotConverged, NotFullyLabeled
from .labeling import Labeling, is_fully_labeled, validate_proper
from .serial import dumps, fmt
from .simplex import (
    BarycentricPoint,
    GridCell,
    barycentric_weights,
    chain,
    locate_cell,
)
from .solver import EquilibriumReport, SolverConfig, solve

__all__ = [
    "LabelInducedMap",
    "InducedExcessDemand",
    "Certificate",
    "choose_tau",
    "build_map",
    "induced_excess_demand",
    "locate_cell",
    "certify",
    "sperner_via_equilibrium",
]


def _require_proper(lab: Labeling) -> None:
    bad = validate_proper(lab)
    if bad:
        raise ImproperLabeling(bad)


def choose_tau(lab: Labeling) -> Fraction:
    """Half the smallest labeled coordinate over all grid vertices."""
    _require_proper(lab)
    smallest = min(Fraction(v[lab.labels[v]], lab.m) for v in lab.sub.vertices())
    return smallest / 2


def vertex_image(v: tuple[int, ...], label: int, tau: Fraction, m: int) -> BarycentricPoint:
    n = len(v) - 1
    up = tau / n
    return BarycentricPoint(
        tuple(Fraction(k, m) - tau if j == label else Fraction(k, m) + up for j, k in enumerate(v))
    )


@dataclass(frozen=True)
class LabelInducedMap:
    lab: Labeling
    tau: Fraction
    vertex_images: Mapping[tuple[int, ...], BarycentricPoint] = field(hash=False, repr=False)

    @property
    def n(self) -> int:
        return self.lab.n

    def on_cell(self, cell: GridCell, p) -> BarycentricPoint:
        """Linear extension over ``cell`` (valid when ``cell`` contains ``p``)."""
        pt = p.coords if isinstance(p, BarycentricPoint) else tuple(p)
        lam = barycentric_weights(cell, pt, self.lab.sub)
        out = [Fraction(0)] * (self.n + 1)
        for w, v in zip(lam, chain(cell.base, cell.perm)):
            img = self.vertex_images[v]
            for j in range(self.n + 1):
                out[j] += w * img[j]
        return BarycentricPoint(tuple(out))

    def __call__(self, p) -> BarycentricPoint:
        pt = p.coords if isinstance(p, BarycentricPoint) else tuple(p)
        return self.on_cell(locate_cell(self.lab.sub, pt), pt)

    def residual(self, p) -> Fraction:
        """``max_i |phi_i(p) - p_i|``."""
        img = self(p)
        return max(abs(a - b) for a, b in zip(img, p))

    def repulsion(self) -> Fraction:
        """``tau/n``: the value of ``phi_i(r) - r_i`` in every cell that misses label ``i``."""
        return self.tau / self.n


def build_map(lab: Labeling) -> LabelInducedMap:
    tau = choose_tau(lab)
    images = {v: vertex_image(v, lab.labels[v], tau, lab.m) for v in lab.sub.vertices()}
    return LabelInducedMap(lab, tau, images)


@dataclass(frozen=True)
class InducedExcessDemand:
    map: LabelInducedMap

    def mu(self, p) -> Fraction:
        phi = self.map(p)
        return sum(a * b for a, b in zip(p, phi)) / sum(a * a for a in p)

    def __call__(self, p) -> tuple[Fraction, ...]:
        pt = p.coords if isinstance(p, BarycentricPoint) else tuple(p)
        phi = self.map(pt)
        mu = sum(a * b for a, b in zip(pt, phi)) / sum(a * a for a in pt)
        return tuple(f - a * mu for f, a in zip(phi, pt))

    def economy(self) -> EconomySpec:
        return induced_economy(self, self.map.n + 1)


def induced_excess_demand(phi: LabelInducedMap) -> InducedExcessDemand:
    return InducedExcessDemand(phi)


@dataclass(frozen=True)
class Certificate:
    cell: GridCell
    equilibrium: BarycentricPoint
    tau: Fraction
    residual: Fraction
    bound: Fraction
    report: EquilibriumReport = field(repr=False)

    def to_json(self) -> dict:
        return {
            "fully_labeled_cell": self.cell.to_json(),
            "equilibrium": [fmt(c, "rational") for c in self.equilibrium],
            "tau": fmt(self.tau, "rational"),
            "certificate": {"residual": fmt(self.residual, "rational"), "bound": fmt(self.bound, "rational")},
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def parse_certificate(obj: dict) -> dict:
    """Parse a certificate file into exact values (the inverse of :meth:`Certificate.to_json`)."""
    if set(obj) != {"fully_labeled_cell", "equilibrium", "tau", "certificate"}:
        raise ConfigError(f"unexpected certificate fields: {sorted(obj)}")
    if set(obj["certificate"]) != {"residual", "bound"}:
        raise ConfigError("certificate needs 'residual' and 'bound'")
    return {
        "fully_labeled_cell": GridCell.from_json(obj["fully_labeled_cell"]),
        "equilibrium": BarycentricPoint(tuple(parse_number(c) for c in obj["equilibrium"])),
        "tau": parse_number(obj["tau"]),
        "residual": parse_number(obj["certificate"]["residual"]),
        "bound": parse_number(obj["certificate"]["bound"]),
    }


def certify(lab: Labeling, cfg: SolverConfig | None = None) -> Certificate:
    """Solve the label-induced economy exactly and certify the cell holding its equilibrium.

    Refinement runs on resolutions ``m, m*growth, ...`` so every fine cell
    nests inside a cell of the labeling's own grid.  The run stops once the
    fixed-point residual of the candidate drops below half the repulsion gap.
    """
    cfg = cfg or SolverConfig()
    phi = build_map(lab)
    g = induced_excess_demand(phi)
    bound = phi.repulsion() / 2
    run_cfg = replace(cfg, mode="rational", m_start=lab.m, m_max=max(cfg.m_max, lab.m))

    def accept(cand, _residual):
        return phi.residual(cand) < bound

    report = solve(g.economy(), run_cfg, accept=accept)
    if not report.converged:
        raise NotConverged("label-induced economy did not reach the certificate bound", report)
    p_star = report.prices
    residual = phi.residual(p_star)
    cell = locate_cell(lab.sub, p_star)
    if not is_fully_labeled(cell, lab):
        raise NotFullyLabeled(f"equilibrium {p_star.coords} lies in {cell}, which is not fully labeled")
    return Certificate(cell, p_star, phi.tau, residual, bound, report)


def sperner_via_equilibrium(lab: Labeling, cfg: SolverConfig | None = None) -> GridCell:
    return certify(lab, cfg).cell
