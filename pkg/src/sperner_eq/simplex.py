"""Exact geometry of the standard n-simplex and its uniform subdivision.

Grid vertices are integer tuples ``(k_0, ..., k_n)`` with ``sum(k) == m``; the
point they stand for is ``k / m``.  Cells follow the Freudenthal (Kuhn)
triangulation: a cell is a base vertex plus a permutation ``perm`` of
``1..n``, and its vertex chain is

    v_0 = base,   v_j = v_{j-1} + e_{perm[j]-1} - e_{perm[j]}

so each step moves one grid unit from coordinate ``s`` to ``s - 1``.  In the
cumulative coordinates ``y_j = k_0 + ... + k_{j-1}`` this is the usual Kuhn
cube triangulation restricted to ``0 <= y_1 <= ... <= y_n <= m``.

All arithmetic here is integer or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import CellOutOfRange, NegativeCoordinate, NotNormalized, ResolutionZero

FLOAT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class BarycentricPoint:
    """A point of the simplex.  Coordinates are Fractions (or floats in float mode)."""

    coords: tuple

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def to_float(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)


def _as_number(x):
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def make_point(coords: Sequence) -> BarycentricPoint:
    """Validate ``coords`` as a simplex point.

    Integers, strings and Fractions are kept exact and must sum to exactly 1.
    If any coordinate is a float the sum is checked to within 1e-12.
    """
    vals = tuple(_as_number(c) for c in coords)
    if len(vals) < 2:
        raise ValueError("a simplex point needs at least two coordinates")
    for i, c in enumerate(vals):
        if c < 0:
            raise NegativeCoordinate(f"coordinate {i} is negative: {c}")
    if all(isinstance(c, Fraction) for c in vals):
        if sum(vals) != 1:
            raise NotNormalized(f"coordinates sum to {sum(vals)}, not 1")
    else:
        vals = tuple(float(c) for c in vals)
        s = 0.0
        for c in vals:
            s += c
        if abs(s - 1.0) > FLOAT_SUM_TOL:
            raise NotNormalized(f"coordinates sum to {s!r}, not 1")
    return BarycentricPoint(vals)


@dataclass(frozen=True, order=True)
class GridCell:
    base: tuple[int, ...]
    perm: tuple[int, ...]

    def to_json(self) -> dict:
        return {"base": list(self.base), "perm": list(self.perm)}

    @classmethod
    def from_json(cls, obj: dict) -> "GridCell":
        if set(obj) != {"base", "perm"}:
            raise ValueError(f"cell object must have exactly 'base' and 'perm', got {sorted(obj)}")
        return cls(tuple(int(k) for k in obj["base"]), tuple(int(s) for s in obj["perm"]))


class _Boundary:
    """Marker returned by :func:`neighbor` when the facet lies in a face of the simplex."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Boundary"

    def __bool__(self) -> bool:
        return False


Boundary = _Boundary()


@dataclass(frozen=True)
class Subdivision:
    n: int
    m: int

    @property
    def num_cells(self) -> int:
        return self.m**self.n

    @property
    def num_vertices(self) -> int:
        from math import comb

        return comb(self.m + self.n, self.n)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        """Grid vertices in lexicographic order."""
        return compositions(self.m, self.n + 1)

    def cells(self) -> Iterator[GridCell]:
        """All cells in lexicographic ``(base, perm)`` order."""
        perms = list(itertools.permutations(range(1, self.n + 1)))
        for base in compositions(self.m, self.n + 1):
            if base[self.n] < 1:
                continue
            for perm in perms:
                if is_valid_cell(base, perm, self.m):
                    yield GridCell(base, perm)

    def point(self, vertex: Sequence[int]) -> BarycentricPoint:
        return BarycentricPoint(tuple(Fraction(k, self.m) for k in vertex))

    def check_vertex(self, vertex: Sequence[int]) -> tuple[int, ...]:
        v = tuple(int(k) for k in vertex)
        if len(v) != self.n + 1 or any(k < 0 for k in v) or sum(v) != self.m:
            raise CellOutOfRange(f"{list(vertex)} is not a grid vertex of (n={self.n}, m={self.m})")
        return v


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def subdivide(n: int, m: int) -> Subdivision:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if m < 1:
        raise ResolutionZero(f"resolution must be >= 1, got {m}")
    return Subdivision(int(n), int(m))


def step(v: tuple[int, ...], s: int) -> tuple[int, ...]:
    w = list(v)
    w[s - 1] += 1
    w[s] -= 1
    return tuple(w)


def unstep(v: tuple[int, ...], s: int) -> tuple[int, ...]:
    w = list(v)
    w[s - 1] -= 1
    w[s] += 1
    return tuple(w)


def is_valid_cell(base: Sequence[int], perm: Sequence[int], m: int) -> bool:
    n = len(base) - 1
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        return False
    if any(k < 0 for k in base) or sum(base) != m:
        return False
    if n == 0:
        return True
    if base[n] < 1:
        return False
    pos = [0] * (n + 2)
    for idx, s in enumerate(perm):
        pos[s] = idx
    # a zero gap between y_j and y_{j+1} forces step j+1 to come first
    for j in range(1, n):
        if base[j] == 0 and pos[j + 1] > pos[j]:
            return False
    return True


def chain(base: Sequence[int], perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Integer vertices ``v_0..v_n`` of the cell."""
    v = tuple(base)
    out = [v]
    for s in perm:
        v = step(v, s)
        out.append(v)
    return out


def _check_cell(cell: GridCell, sub: Subdivision) -> None:
    if len(cell.base) != sub.n + 1 or not is_valid_cell(cell.base, cell.perm, sub.m):
        raise CellOutOfRange(f"{cell} is not a cell of (n={sub.n}, m={sub.m})")


def cell_grid_vertices(cell: GridCell, sub: Subdivision) -> list[tuple[int, ...]]:
    _check_cell(cell, sub)
    return chain(cell.base, cell.perm)


def cell_vertices(cell: GridCell, sub: Subdivision) -> list[BarycentricPoint]:
    return [sub.point(v) for v in cell_grid_vertices(cell, sub)]


def barycenter(cell: GridCell, sub: Subdivision) -> BarycentricPoint:
    verts = cell_grid_vertices(cell, sub)
    d = sub.m * (sub.n + 1)
    return BarycentricPoint(tuple(Fraction(sum(v[i] for v in verts), d) for i in range(sub.n + 1)))


def pivot(base: tuple[int, ...], perm: tuple[int, ...], i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Replace vertex ``i`` of the Freudenthal cell; returns the raw (possibly invalid) cell.

    The replacement vertex sits at index ``n`` when ``i == 0``, at index 0 when
    ``i == n`` and at index ``i`` otherwise.
    """
    n = len(perm)
    if i == 0:
        return step(base, perm[0]), perm[1:] + perm[:1]
    if i == n:
        return unstep(base, perm[-1]), perm[-1:] + perm[:-1]
    p = list(perm)
    p[i - 1], p[i] = p[i], p[i - 1]
    return base, tuple(p)


def entry_index(i: int, n: int) -> int:
    """Index, in the neighbor cell, of the vertex that replaced vertex ``i``."""
    if i == 0:
        return n
    if i == n:
        return 0
    return i


def neighbor(cell: GridCell, opposite_vertex_index: int, sub: Subdivision):
    """Cell across the facet opposite the given vertex, or :data:`Boundary`."""
    _check_cell(cell, sub)
    if not 0 <= opposite_vertex_index <= sub.n:
        raise CellOutOfRange(f"vertex index {opposite_vertex_index} outside 0..{sub.n}")
    base, perm = pivot(cell.base, cell.perm, opposite_vertex_index)
    if not is_valid_cell(base, perm, sub.m):
        return Boundary
    return GridCell(base, perm)


def mesh_diameter(sub: Subdivision) -> Fraction:
    """Max-norm diameter bound for every cell.

    Vertices of one cell differ by sums of distinct steps ``e_{s-1} - e_s``,
    whose coordinates lie in ``{-1, 0, 1}``; the bound ``1/m`` is attained.
    """
    return Fraction(1, sub.m)


def max_norm(a: Sequence, b: Sequence):
    return max(abs(x - y) for x, y in zip(a, b))


def _cumulative(p: Sequence, m: int) -> list:
    y = []
    acc = 0
    for c in p[:-1]:
        acc += c
        y.append(acc * m)
    return y


def barycentric_weights(cell: GridCell, p: Sequence, sub: Subdivision) -> tuple:
    """Weights ``lam`` with ``p == sum(lam[i] * v_i)``; negative entries mean ``p`` is outside."""
    n = sub.n
    y = _cumulative(p, sub.m)
    by = _cumulative(cell.base, 1)
    t = [y[j] - by[j] for j in range(n)]
    ts = [t[s - 1] for s in cell.perm]
    lam = [1 - ts[0]]
    for j in range(n - 1):
        lam.append(ts[j] - ts[j + 1])
    lam.append(ts[-1])
    return tuple(lam)


def contains(cell: GridCell, p: Sequence, sub: Subdivision) -> bool:
    return all(w >= 0 for w in barycentric_weights(cell, p, sub))


def _floor(x) -> int:
    return int(x // 1)


def containing_cells(sub: Subdivision, p: Sequence) -> list[GridCell]:
    """Every cell containing ``p``, in lexicographic order."""
    n, m = sub.n, sub.m
    y = _cumulative(p, m)
    choices = []
    for yj in y:
        f = _floor(yj)
        choices.append((f - 1, f) if f == yj else (f,))
    found = set()
    for by in itertools.product(*choices):
        t = [y[j] - by[j] for j in range(n)]
        if any(tj < 0 or tj > 1 for tj in t):
            continue
        # steps sorted by decreasing fractional part; ties may go either way
        groups: dict = {}
        for j, tj in enumerate(t):
            groups.setdefault(tj, []).append(j + 1)
        ordered = [groups[k] for k in sorted(groups, reverse=True)]
        base = [by[0]] + [by[j + 1] - by[j] for j in range(n - 1)] + [m - by[-1]]
        base = tuple(base)
        for parts in itertools.product(*(itertools.permutations(g) for g in ordered)):
            perm = tuple(itertools.chain.from_iterable(parts))
            if is_valid_cell(base, perm, m):
                cell = GridCell(base, perm)
                if contains(cell, p, sub):
                    found.add(cell)
    return sorted(found)


def locate_cell(sub: Subdivision, p: Sequence) -> GridCell:
    """A cell containing ``p``; the lexicographically first one on shared facets."""
    pt = p.coords if isinstance(p, BarycentricPoint) else tuple(p)
    if len(pt) != sub.n + 1:
        raise ValueError(f"point has {len(pt)} coordinates, expected {sub.n + 1}")
    cells = containing_cells(sub, pt)
    if not cells:
        raise CellOutOfRange(f"no cell of (n={sub.n}, m={sub.m}) contains {pt}")
    return cells[0]
