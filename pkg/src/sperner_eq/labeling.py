"""Sperner labelings of a subdivided simplex."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import ConfigError, MapLeavesSimplex, MissingLabel
from .simplex import (
    BarycentricPoint,
    GridCell,
    Subdivision,
    cell_grid_vertices,
    make_point,
    subdivide,
)


@dataclass(frozen=True)
class Violation:
    vertex: tuple[int, ...]
    label: int
    rule: str

    def __str__(self) -> str:
        return f"vertex {list(self.vertex)} labeled {self.label} violates {self.rule}"

    def to_json(self) -> dict:
        return {"vertex": list(self.vertex), "label": self.label, "rule": self.rule}


@dataclass(frozen=True)
class Labeling:
    sub: Subdivision
    labels: Mapping[tuple[int, ...], int] = field(hash=False)

    @property
    def n(self) -> int:
        return self.sub.n

    @property
    def m(self) -> int:
        return self.sub.m

    def __getitem__(self, vertex) -> int:
        try:
            return self.labels[tuple(vertex)]
        except KeyError:
            raise MissingLabel(f"vertex {list(vertex)} has no label") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Labeling):
            return NotImplemented
        return self.sub == other.sub and dict(self.labels) == dict(other.labels)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "labels": [{"vertex": list(v), "label": self.labels[v]} for v in sorted(self.labels)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, obj) -> "Labeling":
        """Parse the labeling file layout; geometry is rebuilt from ``n`` and ``m``."""
        if not isinstance(obj, dict):
            raise ConfigError("labeling must be a JSON object")
        extra = set(obj) - {"n", "m", "labels"}
        if extra:
            raise ConfigError(f"unknown labeling fields: {sorted(extra)}")
        for key in ("n", "m", "labels"):
            if key not in obj:
                raise ConfigError(f"labeling is missing '{key}'")
        try:
            sub = subdivide(int(obj["n"]), int(obj["m"]))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        labels: dict[tuple[int, ...], int] = {}
        for entry in obj["labels"]:
            if not isinstance(entry, dict) or set(entry) != {"vertex", "label"}:
                raise ConfigError(f"label entry must have exactly 'vertex' and 'label': {entry!r}")
            try:
                v = sub.check_vertex(entry["vertex"])
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            lab = entry["label"]
            if not isinstance(lab, int) or isinstance(lab, bool):
                raise ConfigError(f"label of {list(v)} must be an integer")
            if v in labels:
                raise ConfigError(f"vertex {list(v)} labeled twice")
            labels[v] = lab
        return cls(sub, labels)

    @classmethod
    def loads(cls, text: str) -> "Labeling":
        return cls.from_json(json.loads(text))


def from_sequence(n: int, m: int, labels: Sequence[int]) -> Labeling:
    """Labeling from a list aligned with the lexicographic vertex order."""
    sub = subdivide(n, m)
    verts = list(sub.vertices())
    if len(verts) != len(labels):
        raise ValueError(f"expected {len(verts)} labels, got {len(labels)}")
    return Labeling(sub, dict(zip(verts, (int(x) for x in labels))))


def _rule_for(vertex: tuple[int, ...]) -> str:
    support = sum(1 for k in vertex if k > 0)
    if support == 1:
        return "rule 1"
    if support == len(vertex) - 1:
        return "rule 2"
    return "rule 3"


def validate_proper(lab: Labeling) -> list[Violation]:
    out = []
    for v in lab.sub.vertices():
        if v not in lab.labels:
            raise MissingLabel(f"vertex {list(v)} has no label")
        label = lab.labels[v]
        if not 0 <= label <= lab.n:
            out.append(Violation(v, label, "label range"))
        elif v[label] == 0:
            out.append(Violation(v, label, _rule_for(v)))
    if len(lab.labels) != lab.sub.num_vertices:
        raise MissingLabel("labeling contains vertices outside the grid")
    return out


def is_fully_labeled(cell: GridCell, lab: Labeling) -> bool:
    seen = {lab[v] for v in cell_grid_vertices(cell, lab.sub)}
    return seen == set(range(lab.n + 1))


def select_label(support: Sequence, point: Sequence, image: Sequence) -> int:
    """Smallest ``i`` with ``support[i] > 0`` and ``image[i] <= point[i]``.

    ``support`` is the true grid point and ``point`` the location where the map
    was evaluated; they differ only when boundary vertices are nudged inward.
    In that case the rule may find nothing, and the support index with the
    smallest ``image[i] - point[i]`` is used.
    """
    for i, (s, pi, fi) in enumerate(zip(support, point, image)):
        if s > 0 and fi <= pi:
            return i
    best, gap = -1, None
    for i, (s, pi, fi) in enumerate(zip(support, point, image)):
        if s > 0 and (gap is None or fi - pi < gap):
            best, gap = i, fi - pi
    return best


def induced_label(p, phi: Callable) -> int:
    """Label of ``p`` under the self-map ``phi``."""
    pt = p.coords if isinstance(p, BarycentricPoint) else tuple(p)
    raw = phi(p)
    try:
        img = make_point(raw.coords if isinstance(raw, BarycentricPoint) else raw)
    except ValueError as exc:
        raise MapLeavesSimplex(f"map image {raw} is not in the simplex: {exc}") from exc
    if len(img) != len(pt):
        raise MapLeavesSimplex(f"map image has {len(img)} coordinates, expected {len(pt)}")
    return select_label(pt, pt, img.coords)


def induce_labeling(sub: Subdivision, phi: Callable) -> Labeling:
    return Labeling(sub, {v: induced_label(sub.point(v), phi) for v in sub.vertices()})


def random_proper_labeling(sub: Subdivision, rng: random.Random) -> Labeling:
    """Each vertex gets a uniformly random index from its support."""
    labels = {}
    for v in sub.vertices():
        labels[v] = rng.choice([i for i, k in enumerate(v) if k > 0])
    return Labeling(sub, labels)
