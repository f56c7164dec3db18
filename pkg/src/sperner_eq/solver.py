"""Approximate Walrasian equilibria by Sperner labeling and mesh refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import kernels
from ._walk import door_walk
from .economy import (
    EconomySpec,
    adjust,
    equilibrium_residual,
    evaluate,
    shifted_point,
    walras_residual,
)
from .errors import ConfigError, LabelingFailed, SpernerEqError, ZeroPriceSingular
from .labeling import select_label
from .serial import Mode, check_mode, fmt, parse
from .simplex import (
    BarycentricPoint,
    GridCell,
    Subdivision,
    barycenter,
    locate_cell,
    max_norm,
    subdivide,
)


@dataclass(frozen=True)
class SolverConfig:
    m_start: int = 2
    m_max: int = 4096
    growth: int = 2
    tol: float = 1e-6
    slnc_eta: float = 1e-2
    slnc_epsilon: float = 0.35
    slnc_halvings: int = 4
    # sample-grid resolution for the diagnostic; None picks one from the dimension
    slnc_resolution: Optional[int] = None
    mode: Mode = "float"

    def __post_init__(self):
        if self.m_start < 1:
            raise ConfigError("m_start must be >= 1")
        if self.m_max < self.m_start:
            raise ConfigError("m_max must be >= m_start")
        if self.growth < 2:
            raise ConfigError("growth must be >= 2")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if not (self.slnc_eta > 0 and self.slnc_epsilon > 0):
            raise ConfigError("slnc_eta and slnc_epsilon must be > 0")
        if self.slnc_halvings < 1:
            raise ConfigError("slnc_halvings must be >= 1")
        if self.slnc_resolution is not None and self.slnc_resolution < 1:
            raise ConfigError("slnc_resolution must be >= 1")
        check_mode(self.mode)

    def schedule(self) -> list[int]:
        out, m = [], self.m_start
        while m <= self.m_max:
            out.append(m)
            m *= self.growth
        return out


@dataclass(frozen=True)
class TraceEntry:
    m: int
    cell: GridCell
    candidate: BarycentricPoint
    residual: object
    walras: object
    visited: int


@dataclass(frozen=True)
class EquilibriumReport:
    prices: BarycentricPoint
    residual: object
    walras: object
    trace: tuple[TraceEntry, ...]
    converged: bool
    tail_diameter: object
    mode: Mode = "float"

    def to_json(self) -> dict:
        mode = self.mode
        return {
            "mode": mode,
            "converged": self.converged,
            "prices": [fmt(c, mode) for c in self.prices],
            "residual": fmt(self.residual, mode),
            "walras": fmt(self.walras, mode),
            "tail_diameter": fmt(self.tail_diameter, mode),
            "trace": [
                {
                    "m": t.m,
                    "cell": t.cell.to_json(),
                    "candidate": [fmt(c, mode) for c in t.candidate],
                    "residual": fmt(t.residual, mode),
                    "walras": fmt(t.walras, mode),
                    "visited": t.visited,
                }
                for t in self.trace
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EquilibriumReport":
        keys = {"mode", "converged", "prices", "residual", "walras", "tail_diameter", "trace"}
        if set(obj) != keys:
            raise ConfigError(f"unexpected report fields: {sorted(set(obj) ^ keys)}")
        mode = check_mode(obj["mode"])
        trace = tuple(
            TraceEntry(
                int(t["m"]),
                GridCell.from_json(t["cell"]),
                BarycentricPoint(tuple(parse(c, mode) for c in t["candidate"])),
                parse(t["residual"], mode),
                parse(t["walras"], mode),
                int(t["visited"]),
            )
            for t in obj["trace"]
        )
        return cls(
            BarycentricPoint(tuple(parse(c, mode) for c in obj["prices"])),
            parse(obj["residual"], mode),
            parse(obj["walras"], mode),
            trace,
            bool(obj["converged"]),
            parse(obj["tail_diameter"], mode),
            mode,
        )

    def csv_rows(self) -> list[tuple]:
        """``(m, residual, walras, tail_diameter)`` per refinement level."""
        rows = []
        for i, t in enumerate(self.trace):
            _, tail = cauchy_extract([e.candidate for e in self.trace[: i + 1]])
            rows.append((t.m, fmt(t.residual, self.mode), fmt(t.walras, self.mode), fmt(tail, self.mode)))
        return rows


def cauchy_extract(trace) -> tuple[BarycentricPoint, object]:
    """Last candidate and the max-norm diameter of the last three candidates."""
    pts = [t.candidate if isinstance(t, TraceEntry) else t for t in trace]
    if not pts:
        raise ValueError("empty trace")
    tail = pts[-3:]
    diam = 0
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            diam = max(diam, max_norm(tail[i], tail[j]))
    return pts[-1], diam


def _label_function(econ: EconomySpec, m: int, exact: bool) -> Callable[[tuple], int]:
    cache: dict = {}

    def label_of(v):
        lab = cache.get(v)
        if lab is None:
            if econ.singular_at_boundary:
                q = shifted_point(v, m, exact)
            elif exact:
                q = tuple(Fraction(k, m) for k in v)
            else:
                q = tuple(k / m for k in v)
            try:
                image = adjust(q, evaluate(econ, q))
            except SpernerEqError as exc:
                raise LabelingFailed(f"cannot label vertex {list(v)}: {exc}") from exc
            lab = cache[v] = select_label(v, q, image)
        return lab

    return label_of


def find_fully_labeled(econ: EconomySpec, sub: Subdivision, mode: Mode) -> tuple[GridCell, int]:
    """Walk to a fully labeled cell of the labeling induced by the price map."""
    if econ.kind == "cobb_douglas" and mode == "float":
        a, w, s = econ.params.float_params
        try:
            base, perm, visited = kernels.cd_path_follow(sub.n, sub.m, a, w, s)
        except RuntimeError as exc:
            raise LabelingFailed(str(exc)) from exc
    else:
        try:
            base, perm, visited = door_walk(sub.n, sub.m, _label_function(econ, sub.m, mode == "rational"))
        except RuntimeError as exc:
            raise LabelingFailed(str(exc)) from exc
    return GridCell(tuple(base), tuple(perm)), visited


def _eval_point(p: BarycentricPoint, mode: Mode) -> tuple:
    return p.coords if mode == "rational" else p.to_float()


def solve(
    econ: EconomySpec,
    cfg: SolverConfig,
    accept: Optional[Callable[[BarycentricPoint, object], bool]] = None,
) -> EquilibriumReport:
    """Refine until the candidate's equilibrium residual is at most ``cfg.tol``.

    ``accept(candidate, residual)``, when given, replaces the tolerance test as
    the stopping rule (used by the label-induced economies, whose stopping
    rule is an exact certificate).
    """
    mode = cfg.mode
    trace: list[TraceEntry] = []
    converged = False
    for m in cfg.schedule():
        sub = subdivide(econ.n, m)
        cell, visited = find_fully_labeled(econ, sub, mode)
        cand = barycenter(cell, sub)
        pt = _eval_point(cand, mode)
        residual = equilibrium_residual(econ, pt)
        walras = walras_residual(econ, pt)
        trace.append(TraceEntry(m, cell, cand, residual, walras, visited))
        done = accept(cand, residual) if accept is not None else residual <= cfg.tol
        if done:
            converged = True
            break
    if not trace:
        raise ConfigError("empty refinement schedule")
    prices, tail = cauchy_extract(trace)
    if mode == "float":
        tail = float(tail)
        prices = BarycentricPoint(prices.to_float())
    last = trace[-1]
    return EquilibriumReport(prices, last.residual, last.walras, tuple(trace), converged, tail, mode)


# ---------------------------------------------------------------- diagnostic


@dataclass(frozen=True)
class Cluster:
    cell: GridCell
    counts: tuple[int, ...]
    diameters: tuple
    flagged: bool

    def ratios(self) -> list[Optional[float]]:
        out = []
        for a, b in zip(self.diameters, self.diameters[1:]):
            out.append(float(b) / float(a) if a else None)
        return out


@dataclass(frozen=True)
class SLNCReport:
    cover_m: int
    sample_m: int
    etas: tuple[float, ...]
    clusters: tuple[Cluster, ...]
    mode: Mode = "float"

    @property
    def flagged(self) -> int:
        return sum(1 for c in self.clusters if c.flagged)

    @property
    def verdict(self) -> str:
        # a finite sweep can refute the property, never establish it
        return "evidence against SLNC" if self.flagged else "no evidence against SLNC"

    def to_json(self) -> dict:
        mode = self.mode
        return {
            "mode": mode,
            "cover_m": self.cover_m,
            "sample_m": self.sample_m,
            "etas": [fmt(e, "float") for e in self.etas],
            "clusters": [
                {
                    "cell": c.cell.to_json(),
                    "counts": list(c.counts),
                    "diameters": [fmt(d, mode) for d in c.diameters],
                    "flagged": c.flagged,
                }
                for c in self.clusters
            ],
            "flagged": self.flagged,
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SLNCReport":
        keys = {"mode", "cover_m", "sample_m", "etas", "clusters", "flagged", "verdict"}
        if set(obj) != keys:
            raise ConfigError(f"unexpected diagnostic fields: {sorted(set(obj) ^ keys)}")
        mode = check_mode(obj["mode"])
        clusters = tuple(
            Cluster(
                GridCell.from_json(c["cell"]),
                tuple(int(x) for x in c["counts"]),
                tuple(parse(d, mode) for d in c["diameters"]),
                bool(c["flagged"]),
            )
            for c in obj["clusters"]
        )
        rep = cls(int(obj["cover_m"]), int(obj["sample_m"]), tuple(parse(e, "float") for e in obj["etas"]), clusters, mode)
        if rep.flagged != obj["flagged"] or rep.verdict != obj["verdict"]:
            raise ConfigError("diagnostic summary does not match its clusters")
        return rep


_DEFAULT_SAMPLES = {1: 1 << 14, 2: 384, 3: 64}


def cover_resolution(epsilon: float) -> int:
    """Smallest ``m`` whose cells have max-norm diameter ``1/m <= epsilon``."""
    return math.ceil(1 / Fraction(epsilon))


def _near_points(econ: EconomySpec, m: int, eta: float, mode: Mode) -> list[tuple[tuple, object]]:
    if econ.kind == "cobb_douglas" and mode == "float":
        a, w, s = econ.params.float_params
        return kernels.cd_near_equilibria(econ.n, m, a, w, s, eta)
    sub = subdivide(econ.n, m)
    out = []
    for v in sub.vertices():
        p = sub.point(v)
        try:
            r = equilibrium_residual(econ, _eval_point(p, mode))
        except ZeroPriceSingular:
            continue
        if r < eta:
            out.append((v, r))
    return out


def slnc_diagnostic(econ: EconomySpec, cfg: SolverConfig) -> SLNCReport:
    """Empirical check of sequential local non-constancy.

    Cells of a cover subdivision play the role of the small sets; inside each
    one the sample points with residual below ``eta`` form a cluster.  A cell
    is flagged when its cluster diameter does not shrink as ``eta`` halves.
    """
    mode = cfg.mode
    cover = subdivide(econ.n, cover_resolution(cfg.slnc_epsilon))
    if cfg.slnc_resolution is not None:
        ms = cfg.slnc_resolution
    else:
        target = _DEFAULT_SAMPLES.get(econ.n, 24)
        ms = cover.m * max(1, -(-target // cover.m))
    etas = tuple(cfg.slnc_eta / 2**k for k in range(cfg.slnc_halvings + 1))

    by_cell: dict[GridCell, list] = {}
    for v, r in _near_points(econ, ms, etas[0], mode):
        p = tuple(Fraction(k, ms) for k in v)
        by_cell.setdefault(locate_cell(cover, p), []).append((p, r))

    clusters = []
    for cell in sorted(by_cell):
        pts = by_cell[cell]
        counts, diams = [], []
        for eta in etas:
            sel = [p for p, r in pts if r < eta]
            counts.append(len(sel))
            if sel:
                d = max(max(p[i] for p in sel) - min(p[i] for p in sel) for i in range(econ.n + 1))
            else:
                d = Fraction(0)
            diams.append(d if mode == "rational" else float(d))
        flagged = any(a > 0 and b >= a for a, b in zip(diams, diams[1:]))
        clusters.append(Cluster(cell, tuple(counts), tuple(diams), flagged))
    return SLNCReport(cover.m, ms, etas, tuple(clusters), mode)
