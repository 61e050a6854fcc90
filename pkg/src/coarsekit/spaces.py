"""Exact finite windows of uniformly locally finite metric spaces.

A window is a finite sample of an infinite (or complete finite) ambient
space, carved out around a basepoint.  Every distance reported inside a
window is the exact ambient distance, and every ball enumerated by a
presentation is the exact ambient ball.  That exactness is the trust
contract all downstream criteria rest on: a window never approximates,
it only truncates, and the margin discipline tells each criterion which
points are far enough from the truncation edge to be trusted.

All distances are nonnegative integers; there is no floating point in
this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

# A point is its integer coordinate tuple.  Windows assign ids (the
# position in the canonical enumeration) and human-readable labels.
Point = tuple


class UsageError(ValueError):
    """Bad arguments at the toolkit surface: wrong space, radius out of
    range, malformed parameters."""


class SpacePresentation:
    """Distance oracle plus exact ball enumerator for one ambient space.

    Subclasses guarantee:
      * ``distance(a, b)`` is the exact ambient distance (a metric),
      * ``ball(center, r)`` enumerates every ambient point within r of
        ``center`` (points outside any window included),
      * ``is_point(p)`` recognizes ambient membership.
    """

    kind: str = "abstract"

    def distance(self, a: Point, b: Point) -> int:
        raise NotImplementedError

    def ball(self, center: Point, r: int) -> list[Point]:
        raise NotImplementedError

    def is_point(self, p: Point) -> bool:
        raise NotImplementedError

    def label(self, p: Point) -> str:
        return repr(p)

    def params(self) -> dict:
        """JSON-ready parameter dict (the space part of a fingerprint)."""
        raise NotImplementedError


class Window:
    """A finite, exact metric ball ``N_H(basepoint)`` of an ambient space.

    ``complete`` marks windows that are the whole ambient space (finite
    coarse unions); for those there is no truncation edge and every
    point is interior at every margin.

    ``margin`` is the declared soft buffer used by precondition checks;
    criteria that need a radius-specific buffer use ``interior(m)``
    directly.

    Immutable after construction; all methods are pure.
    """

    def __init__(self, space: SpacePresentation, basepoint: Point, horizon: int,
                 points: Iterable[Point], margin: int = 0, complete: bool = False):
        self.space = space
        self.basepoint = basepoint
        self.horizon = horizon
        self.margin = margin
        self.complete = complete
        base_dist = {p: space.distance(basepoint, p) for p in points}
        # Canonical enumeration order: by distance from the basepoint,
        # ties broken by coordinates.  Nested windows enumerate shared
        # points in the same order (prefix property).
        self.points: tuple[Point, ...] = tuple(sorted(base_dist, key=lambda p: (base_dist[p], p)))
        self._base_dist = base_dist
        self._index = {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self._index

    def index(self, p: Point) -> int:
        """The point's id: its position in the canonical enumeration."""
        try:
            return self._index[p]
        except KeyError:
            raise UsageError(f"point {p!r} is not in this window") from None

    def label(self, p: Point) -> str:
        return self.space.label(p)

    def distance(self, x: Point, y: Point) -> int:
        """Exact ambient distance between two window points."""
        if x not in self._index or y not in self._index:
            raise UsageError(f"distance asked for points outside the window: {x!r}, {y!r}")
        return self.space.distance(x, y)

    def base_distance(self, p: Point) -> int:
        return self._base_dist[p]

    def margin_of(self, p: Point) -> int:
        """Distance from p to the truncation edge (unbounded if complete)."""
        if self.complete:
            return self.horizon + 1
        return self.horizon - self._base_dist[p]

    def interior(self, m: int) -> tuple[Point, ...]:
        """Points at least m inside the horizon; all points if complete."""
        if self.complete or m <= 0:
            return self.points
        cut = self.horizon - m
        return tuple(p for p in self.points if self._base_dist[p] <= cut)

    def neighbors(self, p: Point, r: int) -> list[Point]:
        """Window points within ambient distance r of p (p included)."""
        return [q for q in self.space.ball(p, r) if q in self._index]

    def fingerprint(self) -> dict:
        fp = dict(self.space.params())
        fp["horizon"] = self.horizon
        fp["margin"] = self.margin
        fp["points"] = len(self.points)
        return fp


def neighborhood(w: Window, points: Iterable[Point], r: int) -> set[Point]:
    """The window part of the r-neighborhood of a point set.

    Returns ``{x in window : d(x, A) <= r}``; contains A, monotone in
    both A and r.  Empty A gives the empty set.
    """
    if r < 0:
        raise UsageError("neighborhood radius must be nonnegative")
    out: set[Point] = set()
    for p in points:
        if p not in w:
            raise UsageError(f"neighborhood of a point outside the window: {p!r}")
        out.update(w.neighbors(p, r))
    return out


@dataclass(frozen=True)
class Partition:
    """Disjoint classes covering a window, pairwise r-separated within
    each class (every distinct pair in a class is at distance > r)."""

    separation: int
    classes: tuple[tuple[Point, ...], ...]

    def class_count(self) -> int:
        return len(self.classes)


def separated_partition(w: Window, r: int) -> Partition:
    """Greedy coloring of the r-proximity graph in canonical point order.

    Deterministic.  The class count never exceeds max_x |N_r(x)| over
    the window, since a point sees at most |N_r(x)| - 1 earlier
    neighbors when it is colored.
    """
    if r < 1:
        raise UsageError("separation radius must be >= 1")
    color: dict[Point, int] = {}
    classes: list[list[Point]] = []
    for p in w.points:
        used = set()
        for q in w.neighbors(p, r):
            if q is not p and q != p and q in color:
                used.add(color[q])
        c = 0
        while c in used:
            c += 1
        color[p] = c
        if c == len(classes):
            classes.append([])
        classes[c].append(p)
    return Partition(separation=r, classes=tuple(tuple(cl) for cl in classes))


def ulf_profile(w: Window, rmax: int) -> dict[int, int]:
    """r -> max |N_r(x)| over interior(r), for r = 0..rmax.

    Ball sizes are ambient (exact), so interior values are stable under
    horizon growth.  Monotone nondecreasing in r.
    """
    if rmax > w.horizon:
        raise UsageError("ulf_profile radius exceeds the window horizon")
    profile: dict[int, int] = {}
    for r in range(rmax + 1):
        pts = w.interior(r)
        profile[r] = max(len(w.space.ball(p, r)) for p in pts) if pts else 0
    return profile


@dataclass(frozen=True)
class MetricViolation:
    kind: str          # "negative" | "identity" | "symmetry" | "triangle"
    points: tuple[Point, ...]
    values: tuple[int, ...]


@dataclass(frozen=True)
class MetricReport:
    samples: int
    violations: tuple[MetricViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_metric(w: Window, sample_count: int, seed: int = 0,
                 oracle=None) -> MetricReport:
    """Sample triples and assert the metric axioms on the window's oracle.

    ``oracle`` overrides the distance function (used to exercise the
    checker against a deliberately corrupted presentation).
    """
    if sample_count < 1:
        raise UsageError("sample_count must be >= 1")
    dist = oracle if oracle is not None else w.space.distance
    rng = random.Random(seed)
    pts = w.points
    violations: list[MetricViolation] = []
    for _ in range(sample_count):
        x, y, z = (rng.choice(pts) for _ in range(3))
        dxy, dyx = dist(x, y), dist(y, x)
        dxz, dyz = dist(x, z), dist(y, z)
        if dxy < 0 or dxz < 0 or dyz < 0:
            violations.append(MetricViolation("negative", (x, y, z), (dxy, dxz, dyz)))
            continue
        if dxy != dyx:
            violations.append(MetricViolation("symmetry", (x, y), (dxy, dyx)))
        if (dxy == 0) != (x == y):
            violations.append(MetricViolation("identity", (x, y), (dxy,)))
        if dxz > dxy + dyz:
            violations.append(MetricViolation("triangle", (x, y, z), (dxz, dxy, dyz)))
    return MetricReport(samples=sample_count, violations=tuple(violations))
