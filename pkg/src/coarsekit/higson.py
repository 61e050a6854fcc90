"""Construction and variation accounting for slowly varying functions.

A bounded function is slowly varying (Higson) when, for every tolerance
eps and radius r, all pairs within distance r that differ by more than
eps sit inside some finite ball.  ``variation_report`` makes that
quantitative: it lists every violating pair inside the trusted part of
a window together with the smallest basepoint ball enclosing them.

``build_separating_function`` constructs such a function from two sets
A and B with d(x, B) growing along A: it partitions A into groups A_n
with d(A_n, B) >= n and d(A_n, A_m) > 2n for m <= n - 2, then sums the
tent functions h_n(x) = max(1 - d(x, A_2n) / n, 0) over the
even-indexed groups.  The group constraints make the tents disjoint,
pin h = 1 on the union A' of the selected groups and h = 0 on B, and
push all variation at any fixed (eps, r) into a ball whose radius does
not move when the window horizon grows.

Group indices here are assigned greedily to the largest feasible even
index: consecutive indexing would let tent slopes decay only like the
group count, parking fresh violations next to every newly admitted far
point; maximal-even indexing lets the slope decay with the distance to
B, which is what pins the enclosing radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .spaces import Point, UsageError, Window


@dataclass(frozen=True)
class HigsonFunction:
    """Exact rational values in [0, 1] on window points, plus the
    construction record: the groups A_n and the set B."""

    values: dict[Point, Fraction]
    groups: dict[int, tuple[Point, ...]]      # even index -> group points
    selected: tuple[Point, ...]               # A' = union of the groups
    zero_set: tuple[Point, ...]               # B
    kind: str = "separating"


def _set_distance(w: Window, x: Point, pts: Sequence[Point]) -> int:
    return min(w.distance(x, p) for p in pts)


def build_separating_function(w: Window, a_set: Iterable[Point],
                              b_set: Iterable[Point]) -> HigsonFunction:
    """Build h with h = 1 on the grouped part of A and h = 0 on B.

    Precondition (checked): along A enumerated by distance from the
    basepoint, d(., B) is nondecreasing and eventually >= 2; otherwise a
    diagnostic error lists the offending points.
    """
    a_pts = sorted(set(a_set), key=lambda p: (w.base_distance(p), p))
    b_pts = sorted(set(b_set), key=w.index)
    if not a_pts or not b_pts:
        raise UsageError("both A and B must be nonempty")
    if set(a_pts) & set(b_pts):
        raise UsageError("A and B must be disjoint")
    for p in a_pts + b_pts:
        if p not in w:
            raise UsageError(f"set point {p!r} is not in the window")

    dist_b = {p: _set_distance(w, p, b_pts) for p in a_pts}
    bad = [(x, y) for x, y in zip(a_pts, a_pts[1:]) if dist_b[y] < dist_b[x]]
    if bad:
        labels = ", ".join(f"{w.label(x)}->{w.label(y)}" for x, y in bad[:5])
        raise UsageError(
            f"A is not separated from B along the window: d(., B) decreases at {labels}")

    groups: dict[int, list[Point]] = {}

    def feasible(p: Point, n: int) -> bool:
        if n < 2 or dist_b[p] < n:
            return False
        for m, pts in groups.items():
            if m == n:
                continue
            if abs(m - n) < 2:
                return False   # even indexing never creates adjacent groups
            need = 2 * max(m, n)
            if _set_distance(w, p, pts) <= need:
                return False
        return True

    for p in a_pts:
        n = dist_b[p] - (dist_b[p] % 2)
        while n >= 2 and not feasible(p, n):
            n -= 2
        if n < 2:
            raise UsageError(
                f"no feasible group for {w.label(p)}: d(., B) = {dist_b[p]} is too "
                "small or the point crowds an existing group")
        groups.setdefault(n, []).append(p)

    # h is the sum of the tents h_n(x) = max(1 - d(x, A_2n)/n, 0); the
    # group separation makes at most one tent positive at any point.
    values: dict[Point, Fraction] = {}
    for x in w.points:
        tents = []
        for n, pts in groups.items():
            half = n // 2
            d = _set_distance(w, x, pts)
            if d < half:
                tents.append(1 - Fraction(d, half))
        if len(tents) > 1:
            raise AssertionError(
                f"tent supports overlap at {w.label(x)}; grouping invariant broken")
        values[x] = tents[0] if tents else Fraction(0)

    selected = tuple(sorted((p for pts in groups.values() for p in pts), key=w.index))
    return HigsonFunction(values=values,
                          groups={n: tuple(pts) for n, pts in sorted(groups.items())},
                          selected=selected, zero_set=tuple(b_pts))


def pointwise_max(w: Window, f: HigsonFunction, g: HigsonFunction) -> HigsonFunction:
    """The lattice max of two functions; its variation over any pair is
    at most the larger of the two operand variations."""
    values = {p: max(f.values[p], g.values[p]) for p in w.points}
    return HigsonFunction(values=values, groups={}, selected=(), zero_set=(), kind="max")


@dataclass(frozen=True)
class VariationReport:
    """Exhaustive list of pairs within distance r (both endpoints
    trusted) whose values differ by more than eps, and the smallest
    basepoint ball enclosing every such pair."""

    eps: Fraction
    r: int
    violations: tuple[tuple[Point, Point, Fraction], ...]
    enclosing_radius: int


def variation_report(w: Window, h: HigsonFunction | dict[Point, Fraction],
                     eps: Fraction, r: int) -> VariationReport:
    if eps <= 0:
        raise UsageError("eps must be positive")
    if not w.complete and r > w.horizon - w.margin:
        raise UsageError("variation radius exceeds the window's trust margin")
    values = h.values if isinstance(h, HigsonFunction) else h
    inside = set(w.interior(r))
    violations: list[tuple[Point, Point, Fraction]] = []
    for x in w.interior(r):
        ix = w.index(x)
        for y in w.neighbors(x, r):
            if y not in inside or w.index(y) <= ix:
                continue
            diff = abs(values[x] - values[y])
            if diff > eps:
                violations.append((x, y, diff))
    violations.sort(key=lambda t: (w.index(t[0]), w.index(t[1])))
    radius = 0
    for x, y, _ in violations:
        radius = max(radius, w.base_distance(x), w.base_distance(y))
    return VariationReport(eps=eps, r=r, violations=tuple(violations),
                           enclosing_radius=radius)
