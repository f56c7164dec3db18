"""Door-to-door walk through the Freudenthal grid (pure Python).

The walk climbs through the faces ``F_0 ⊂ F_1 ⊂ ... ⊂ F_n`` where ``F_d`` is
spanned by the unit vertices ``e_0..e_d``.  A ``d``-cell of ``F_d`` is kept as a
full-length base (coordinates above ``d`` are zero) plus a permutation of
``1..d``.  Doors are facets labeled exactly ``{0..d-1}``.  The walk starts at
``e_0`` and the only other degree-one nodes of the door graph are the fully
labeled ``n``-cells, so it must end at one.

This module is the reference version of the compiled walk in ``_core.pyx``;
both must visit cells in the same order and report the same count.
"""

from __future__ import annotations

from typing import Callable

from .simplex import is_valid_cell, step, unstep


def _valid_in_face(base: tuple, perm: tuple, d: int, m: int) -> bool:
    return is_valid_cell(base[: d + 1], perm, m)


def door_walk(n: int, m: int, label_of: Callable[[tuple], int]) -> tuple[tuple, tuple, int]:
    """Return ``(base, perm, visited)`` of the fully labeled cell reached from ``e_0``.

    ``label_of`` maps a full-length integer vertex to its label; it is called
    once per newly entered vertex.
    """
    e0 = (m,) + (0,) * n
    d = 1
    base = unstep(e0, 1)
    perm: tuple = (1,)
    verts = [base, e0]
    labs = [label_of(base), label_of(e0)]
    entry = 0
    visited = 1
    limit = 4 * sum(m**k for k in range(1, n + 1)) + 16
    while True:
        if visited > limit:
            raise RuntimeError("door walk exceeded the number of cells; labeling is not proper")
        new_label = labs[entry]
        if new_label == d:
            if d == n:
                return base, perm, visited
            d += 1
            base = unstep(base, d)
            perm = (d,) + perm
            verts = [base] + verts
            labs = [label_of(base)] + labs
            entry = 0
            visited += 1
            continue
        j = 0
        while j == entry or labs[j] != new_label:
            j += 1
        while True:
            if j == 0:
                nb_base, nb_perm = step(base, perm[0]), perm[1:] + perm[:1]
            elif j == d:
                nb_base, nb_perm = unstep(base, perm[-1]), perm[-1:] + perm[:-1]
            else:
                p = list(perm)
                p[j - 1], p[j] = p[j], p[j - 1]
                nb_base, nb_perm = base, tuple(p)
            if _valid_in_face(nb_base, nb_perm, d, m):
                if j == 0:
                    v = step(verts[d], perm[0])
                    verts = verts[1:] + [v]
                    labs = labs[1:] + [label_of(v)]
                    entry = d
                elif j == d:
                    v = nb_base
                    verts = [v] + verts[:-1]
                    labs = [label_of(v)] + labs[:-1]
                    entry = 0
                else:
                    v = step(verts[j - 1], nb_perm[j - 1])
                    verts[j] = v
                    labs[j] = label_of(v)
                    entry = j
                base, perm = nb_base, nb_perm
                visited += 1
                break
            # a door on the boundary of F_d lies in F_{d-1}: drop a dimension
            if j != 0 or perm[0] != d or base[d] != 1:
                raise RuntimeError("door walk left the simplex; labeling is not proper")
            base = verts[1]
            perm = perm[1:]
            verts = verts[1:]
            labs = labs[1:]
            d -= 1
            visited += 1
            if d == 0:
                raise RuntimeError("door walk returned to e_0; labeling is not proper")
            j = labs.index(d)
