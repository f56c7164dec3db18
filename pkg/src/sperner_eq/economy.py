"""Excess-demand systems and the price-adjustment map.

Two numeric modes share one code path: if the price point holds Fractions
(and the economy's parameters are exact) every result is an exact Fraction;
with float prices the arithmetic runs in doubles, summed left to right so the
compiled kernel reproduces it bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Literal, Sequence

from .errors import AllZeroPrices, ConfigError, NegativeCoordinate, WalrasViolation, ZeroPriceSingular
from .simplex import BarycentricPoint, Subdivision, barycentric_weights, chain, locate_cell, subdivide

WALRAS_TOL = 1e-12

Kind = Literal["cobb_douglas", "table", "induced"]


def parse_number(x) -> Fraction:
    """Exact value of a JSON number, decimal string or ``"a/b"`` string."""
    if isinstance(x, bool):
        raise ConfigError(f"expected a number, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ConfigError(f"non-finite number {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse number {x!r}") from None
    raise ConfigError(f"expected a number, got {x!r}")


def _coords(p) -> tuple:
    return p.coords if isinstance(p, BarycentricPoint) else tuple(p)


def _exact(p: Sequence) -> bool:
    return all(isinstance(c, Fraction) for c in p)


@dataclass(frozen=True)
class CobbDouglas:
    alpha: tuple[tuple[Fraction, ...], ...]
    endowment: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def float_params(self) -> tuple[list[list[float]], list[list[float]], list[float]]:
        a = [[float(x) for x in row] for row in self.alpha]
        w = [[float(x) for x in row] for row in self.endowment]
        supply = []
        for i in range(len(a[0])):
            s = 0.0
            for row in w:
                s += row[i]
            supply.append(s)
        return a, w, supply


@dataclass(frozen=True)
class Table:
    m: int
    values: dict = field(hash=False)

    @cached_property
    def sub(self) -> Subdivision:
        return subdivide(len(next(iter(self.values))) - 1, self.m)


@dataclass(frozen=True)
class EconomySpec:
    goods: int
    kind: Kind
    params: Any = field(hash=False)

    @property
    def n(self) -> int:
        return self.goods - 1

    @property
    def singular_at_boundary(self) -> bool:
        return self.kind == "cobb_douglas"

    def to_json(self) -> dict:
        if self.kind == "cobb_douglas":
            return {
                "goods": self.goods,
                "type": "cobb_douglas",
                "consumers": [
                    {"alpha": [str(x) for x in a], "endowment": [str(x) for x in w]}
                    for a, w in zip(self.params.alpha, self.params.endowment)
                ],
            }
        if self.kind == "table":
            return {
                "goods": self.goods,
                "type": "table",
                "m": self.params.m,
                "values": [
                    {"vertex": list(v), "excess": [str(x) for x in self.params.values[v]]}
                    for v in sorted(self.params.values)
                ],
            }
        raise ConfigError("induced economies have no file form; store their labeling instead")


def cobb_douglas(consumers: Sequence[tuple[Sequence, Sequence]]) -> EconomySpec:
    """Build from ``[(alpha, endowment), ...]``; entries may be numbers or strings."""
    if not consumers:
        raise ConfigError("a Cobb-Douglas economy needs at least one consumer")
    alphas, omegas = [], []
    goods = len(consumers[0][0])
    if goods < 2:
        raise ConfigError("need at least two goods")
    for k, (alpha, omega) in enumerate(consumers):
        a = tuple(parse_number(x) for x in alpha)
        w = tuple(parse_number(x) for x in omega)
        if len(a) != goods or len(w) != goods:
            raise ConfigError(f"consumer {k}: alpha and endowment need {goods} entries")
        if any(x < 0 for x in a) or sum(a) != 1:
            raise ConfigError(f"consumer {k}: alpha must be nonnegative and sum to 1")
        if any(x < 0 for x in w):
            raise ConfigError(f"consumer {k}: endowments must be nonnegative")
        alphas.append(a)
        omegas.append(w)
    for i in range(goods):
        if all(w[i] == 0 for w in omegas):
            raise ConfigError(f"good {i} has zero total endowment")
    return EconomySpec(goods, "cobb_douglas", CobbDouglas(tuple(alphas), tuple(omegas)))


def table_economy(m: int, values: dict) -> EconomySpec:
    """Excess demand sampled at the grid vertices of resolution ``m``.

    Vertex values must obey Walras' law (to 1e-12); between vertices the table
    is interpolated and then projected back onto ``p . f = 0``.
    """
    vals = {tuple(int(k) for k in v): tuple(parse_number(x) for x in f) for v, f in values.items()}
    if not vals:
        raise ConfigError("empty table")
    goods = len(next(iter(vals)))
    try:
        sub = subdivide(goods - 1, m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    expected = set(sub.vertices())
    if set(vals) != expected:
        missing = sorted(expected - set(vals))[:3]
        raise ConfigError(f"table must list every grid vertex exactly once (missing e.g. {missing})")
    for v, f in vals.items():
        if len(f) != goods:
            raise ConfigError(f"vertex {list(v)}: expected {goods} excess-demand entries")
        w = sum(Fraction(k, m) * x for k, x in zip(v, f))
        if abs(w) > WALRAS_TOL:
            raise WalrasViolation(f"vertex {list(v)}: p.f = {float(w):.3e} breaks Walras' law")
    return EconomySpec(goods, "table", Table(m, vals))


def induced_economy(excess: Callable, goods: int) -> EconomySpec:
    """Wrap an exact evaluator ``p -> g(p)`` (see :mod:`sperner_eq.equivalence`)."""
    return EconomySpec(goods, "induced", excess)


def load_economy(obj: dict) -> EconomySpec:
    if not isinstance(obj, dict):
        raise ConfigError("economy config must be a JSON object")
    kind = obj.get("type")
    if kind == "cobb_douglas":
        extra = set(obj) - {"goods", "type", "consumers"}
        if extra:
            raise ConfigError(f"unknown economy fields: {sorted(extra)}")
        consumers = obj.get("consumers")
        if not isinstance(consumers, list):
            raise ConfigError("'consumers' must be a list")
        pairs = []
        for c in consumers:
            if not isinstance(c, dict) or set(c) != {"alpha", "endowment"}:
                raise ConfigError(f"consumer must have exactly 'alpha' and 'endowment': {c!r}")
            pairs.append((c["alpha"], c["endowment"]))
        econ = cobb_douglas(pairs)
    elif kind == "table":
        extra = set(obj) - {"goods", "type", "m", "values"}
        if extra:
            raise ConfigError(f"unknown economy fields: {sorted(extra)}")
        values = {}
        for entry in obj.get("values", []):
            if not isinstance(entry, dict) or set(entry) != {"vertex", "excess"}:
                raise ConfigError(f"table entry must have exactly 'vertex' and 'excess': {entry!r}")
            v = tuple(entry["vertex"])
            if v in values:
                raise ConfigError(f"vertex {list(v)} listed twice")
            values[v] = entry["excess"]
        if "m" not in obj:
            raise ConfigError("table economy needs 'm'")
        econ = table_economy(int(obj["m"]), values)
    else:
        raise ConfigError(f"unknown economy type {kind!r}")
    if "goods" in obj and int(obj["goods"]) != econ.goods:
        raise ConfigError(f"'goods' is {obj['goods']} but the data describe {econ.goods} goods")
    return econ


def loads_economy(text: str) -> EconomySpec:
    return load_economy(json.loads(text))


def normalize_prices(raw: Sequence) -> BarycentricPoint:
    vals = [x if isinstance(x, float) else Fraction(x) for x in raw]
    if any(x < 0 for x in vals):
        raise NegativeCoordinate("prices must be nonnegative")
    total = sum(vals)
    if total <= 0:
        raise AllZeroPrices("at least one price must be positive")
    if all(isinstance(x, Fraction) for x in vals):
        return BarycentricPoint(tuple(x / total for x in vals))
    return BarycentricPoint(tuple(float(x) / float(total) for x in vals))


def cd_excess_float(q: Sequence[float], alpha, omega, supply) -> list[float]:
    """Cobb-Douglas excess demand in doubles; operation order mirrors ``_core.pyx``."""
    wealth = []
    for row in omega:
        w = 0.0
        for qi, x in zip(q, row):
            w += qi * x
        wealth.append(w)
    out = []
    for i, qi in enumerate(q):
        d = 0.0
        for k, w in enumerate(wealth):
            d += alpha[k][i] * w
        out.append(d / qi - supply[i])
    return out


def _cd_excess_exact(q: Sequence[Fraction], cd: CobbDouglas) -> list[Fraction]:
    wealth = [sum(qi * x for qi, x in zip(q, row)) for row in cd.endowment]
    return [
        sum(a[i] * w for a, w in zip(cd.alpha, wealth)) / qi - sum(row[i] for row in cd.endowment)
        for i, qi in enumerate(q)
    ]


def _table_excess(p: Sequence, table: Table) -> list:
    exact = _exact(p)
    cell = locate_cell(table.sub, p)
    lam = barycentric_weights(cell, p, table.sub)
    verts = chain(cell.base, cell.perm)
    f = [0 if exact else 0.0] * len(p)
    for w, v in zip(lam, verts):
        vals = table.values[v] if exact else [float(x) for x in table.values[v]]
        wf = w if exact else float(w)
        for i, x in enumerate(vals):
            f[i] += wf * x
    pf = sum(pi * fi for pi, fi in zip(p, f))
    pp = sum(pi * pi for pi in p)
    mu = pf / pp
    return [fi - mu * pi for fi, pi in zip(f, p)]


def evaluate(econ: EconomySpec, p) -> tuple:
    """Excess demand vector ``f(p)``."""
    q = _coords(p)
    if len(q) != econ.goods:
        raise ValueError(f"price vector has {len(q)} entries, economy has {econ.goods} goods")
    if econ.kind == "cobb_douglas":
        if any(x == 0 for x in q):
            raise ZeroPriceSingular("Cobb-Douglas demand is unbounded at a zero price")
        if _exact(q):
            return tuple(_cd_excess_exact(q, econ.params))
        a, w, s = econ.params.float_params
        return tuple(cd_excess_float([float(x) for x in q], a, w, s))
    if econ.kind == "table":
        return tuple(_table_excess(q, econ.params))
    out = econ.params(BarycentricPoint(tuple(q)))
    return tuple(out if _exact(q) else (float(x) for x in out))


def _dot(a: Sequence, b: Sequence):
    s = 0 if _exact(a) and _exact(b) else 0.0
    for x, y in zip(a, b):
        s += x * y
    return s


def walras_residual(econ: EconomySpec, p):
    q = _coords(p)
    return abs(_dot(q, evaluate(econ, q)))


def adjust(q: Sequence, f: Sequence) -> tuple:
    """The price-adjustment map applied to prices ``q`` with excess demand ``f``."""
    zero = 0 if _exact(q) and _exact(f) else 0.0
    v = [qi + (fi if fi > 0 else zero) for qi, fi in zip(q, f)]
    total = zero
    for x in v:
        total += x
    return tuple(x / total for x in v)


def price_map(econ: EconomySpec, p) -> BarycentricPoint:
    q = _coords(p)
    return BarycentricPoint(adjust(q, evaluate(econ, q)))


def equilibrium_residual(econ: EconomySpec, p):
    f = evaluate(econ, p)
    return max((x if x > 0 else 0 * x) for x in f)


def shifted_point(vertex: Sequence[int], m: int, exact: bool = False) -> tuple:
    """Grid vertex nudged off the boundary of the simplex.

    With ``d = max(m, n)`` zero coordinates become ``1/(2d)`` and the others
    shrink proportionally, so every coordinate is at least ``1/(2d)`` and the
    support keeps at least half the mass.  Interior vertices are unchanged.
    """
    z = sum(1 for k in vertex if k == 0)
    d = max(m, len(vertex) - 1)
    if exact:
        half = Fraction(1, 2 * d)
        scale = 1 - z * half
        return tuple(half if k == 0 else Fraction(k, m) * scale for k in vertex)
    fm, fd = float(m), float(d)
    scale = 1.0 - (0.5 * z) / fd
    return tuple(0.5 / fd if k == 0 else (k / fm) * scale for k in vertex)


# ------------------------------------------------------------ example economies


def _two_equilibria_table() -> EconomySpec:
    # equilibria at p0 = 1/4 (f0 changes sign) and p0 = 3/4 (f0 touches zero)
    f0 = [2, 1, 0, -1, -1, -1, 0, -1, 0]
    values = {}
    for k, a in enumerate(f0):
        p0, p1 = Fraction(k, 8), Fraction(8 - k, 8)
        values[(k, 8 - k)] = (a, -p0 * a / p1) if p1 else (0, 1)
    return table_economy(8, values)


BUILTINS: dict[str, Callable[[], EconomySpec]] = {
    "symmetric": lambda: cobb_douglas([((Fraction(1, 2), Fraction(1, 2)), (1, 0)), ((Fraction(1, 2), Fraction(1, 2)), (0, 1))]),
    "skewed": lambda: cobb_douglas([((Fraction(3, 4), Fraction(1, 4)), (1, 0)), ((Fraction(1, 4), Fraction(3, 4)), (0, 1))]),
    "three_goods": lambda: cobb_douglas(
        [
            ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)), (1, 0, 0)),
            ((Fraction(1, 5), Fraction(2, 5), Fraction(2, 5)), (0, 1, 0)),
            ((Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), (0, 0, 1)),
        ]
    ),
    "no_trade": lambda: table_economy(1, {(1, 0, 0): (0, 0, 0), (0, 1, 0): (0, 0, 0), (0, 0, 1): (0, 0, 0)}),
    "two_equilibria": _two_equilibria_table,
}


def builtin(name: str) -> EconomySpec:
    """One of the example economies in :data:`BUILTINS`."""
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ConfigError(f"unknown built-in economy {name!r}; choose from {sorted(BUILTINS)}") from None
