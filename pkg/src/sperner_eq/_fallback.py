"""Pure-Python versions of the kernels in ``_core.pyx`` (same signatures, same results)."""

from __future__ import annotations

from ._walk import door_walk
from .economy import adjust, cd_excess_float, shifted_point
from .labeling import select_label
from .simplex import compositions


def cd_label_vertex(vertex, m, alpha, omega, supply) -> int:
    q = shifted_point(vertex, m)
    return select_label(vertex, q, adjust(q, cd_excess_float(q, alpha, omega, supply)))


def cd_path_follow(n, m, alpha, omega, supply):
    def label_of(v):
        return cd_label_vertex(v, m, alpha, omega, supply)

    return door_walk(n, m, label_of)


def cd_near_equilibria(n, m, alpha, omega, supply, eta):
    out = []
    if m < n + 1:
        return out
    fm = float(m)
    for c in compositions(m - n - 1, n + 1):
        k = tuple(x + 1 for x in c)
        q = [x / fm for x in k]
        f = cd_excess_float(q, alpha, omega, supply)
        r = 0.0
        for x in f:
            if x > r:
                r = x
        if r < eta:
            out.append((k, r))
    return out
