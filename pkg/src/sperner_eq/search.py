"""Locating fully labeled cells: exhaustive enumeration and door-to-door path following."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

from ._walk import door_walk
from .errors import ConfigError, ImproperLabeling
from .labeling import Labeling, is_fully_labeled, validate_proper
from .simplex import GridCell

Strategy = Literal["enumerate", "path_follow"]

# below this many cells a pool costs more than it saves
_PARALLEL_MIN_CELLS = 50_000


def worker_count() -> int:
    """Worker cap from ``SPERNER_EQ_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("SPERNER_EQ_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        raise ConfigError(f"SPERNER_EQ_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise ConfigError("SPERNER_EQ_THREADS must be >= 0")
    return k or (os.cpu_count() or 1)


@dataclass(frozen=True)
class SearchResult:
    cells: tuple[GridCell, ...]
    visited: int
    strategy: Strategy

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "visited": self.visited,
            "cells": [c.to_json() for c in self.cells],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "SearchResult":
        if set(obj) != {"strategy", "visited", "cells"}:
            raise ConfigError(f"unexpected search result fields: {sorted(obj)}")
        if obj["strategy"] not in ("enumerate", "path_follow"):
            raise ConfigError(f"unknown strategy {obj['strategy']!r}")
        return cls(tuple(GridCell.from_json(c) for c in obj["cells"]), int(obj["visited"]), obj["strategy"])


def _require_proper(lab: Labeling) -> None:
    bad = validate_proper(lab)
    if bad:
        raise ImproperLabeling(bad)


def _scan(lab: Labeling, cells: list[GridCell]) -> list[GridCell]:
    return [c for c in cells if is_fully_labeled(c, lab)]


def enumerate_fully_labeled(lab: Labeling) -> SearchResult:
    _require_proper(lab)
    cells = list(lab.sub.cells())
    workers = worker_count()
    if workers > 1 and len(cells) >= _PARALLEL_MIN_CELLS:
        size = -(-len(cells) // workers)
        chunks = [cells[i : i + size] for i in range(0, len(cells), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = [c for part in pool.map(lambda ch: _scan(lab, ch), chunks) for c in part]
    else:
        found = _scan(lab, cells)
    return SearchResult(tuple(sorted(found)), len(cells), "enumerate")


def path_follow(lab: Labeling) -> SearchResult:
    _require_proper(lab)
    labels = lab.labels
    base, perm, visited = door_walk(lab.n, lab.m, lambda v: labels[v])
    return SearchResult((GridCell(base, perm),), visited, "path_follow")
