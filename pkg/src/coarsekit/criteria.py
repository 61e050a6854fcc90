"""Finite-window evaluators for boundary-dynamics criteria.

Epistemics, stated once and attached to every report: a positive result
is a finite certificate consistent with the corresponding criterion for
the ambient space; a negative result means no witness was found at the
given parameters inside this window.  Neither decides the ambient
statement, which quantifies over cofinite behavior a window cannot see.
Checkers for the certificates live in ``coarsekit.verify`` and share no
code with the searches here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .spaces import Point, UsageError, Window

EPISTEMIC_CERTIFICATE = (
    "finite certificate: consistent with the ambient criterion, verified "
    "inside this window; not a proof about the ambient space")
EPISTEMIC_NO_WITNESS = (
    "no witness at these parameters inside this window; not a proof of "
    "ambient non-existence")
EPISTEMIC_PROFILE = (
    "window profile: exact values on trusted points; ambient statements "
    "about limits remain out of reach of any finite window")

# Sentinel for separation values whose search exceeded the cap (complete
# window exhausted or runaway expansion).
EXCEEDS_WINDOW = None


# ---------------------------------------------------------------------------
# separation profiles

@dataclass(frozen=True)
class SeparationProfile:
    """s_r(x) = d(N_r(x), complement of N_r(x)) on trusted points.

    Values are exact ambient integers; EXCEEDS_WINDOW (None) marks
    points whose complement search ran past the cap.
    """

    r: int
    values: dict[Point, int | None]
    cap: int


def separation_value(w: Window, x: Point, r: int, cap: int) -> int | None:
    """Exact ambient s_r(x) by expanding neighborhoods of the r-ball.

    The ball enumerator is ambient, so the first expansion radius t that
    reaches a point outside N_r(x) is exactly d(N_r(x), X \\ N_r(x)).
    """
    ball = w.space.ball(x, r)
    inside = set(ball)
    for t in range(1, cap + 1):
        for y in ball:
            for z in w.space.ball(y, t):
                if z not in inside:
                    return t
    return EXCEEDS_WINDOW


def separation_profile(w: Window, r: int, cap: int | None = None) -> SeparationProfile:
    """s_r on interior(2r) points (all points of a complete window)."""
    if r < 1:
        raise UsageError("separation radius must be >= 1")
    if not w.complete and 2 * r > w.horizon - w.margin:
        raise UsageError("2r exceeds the window's trust margin")
    if cap is None:
        cap = 2 * w.horizon + 1
    values = {x: separation_value(w, x, r, cap) for x in w.interior(2 * r)}
    return SeparationProfile(r=r, values=values, cap=cap)


DIVERGING = "DIVERGING"
BOUNDED = "BOUNDED"
MIXED = "MIXED"


@dataclass(frozen=True)
class TrendReport:
    r: int
    annuli: tuple[tuple[int, int], ...]      # [lo, hi) distance ranges used
    minima: tuple[int, ...]                  # per nonempty annulus
    flag: str
    cap: int | None                          # max of the minima

    note: str = EPISTEMIC_PROFILE


def equal_annuli(w: Window, count: int) -> list[tuple[int, int]]:
    top = max(w.base_distance(p) for p in w.points) + 1
    step = max(1, -(-top // count))
    return [(i * step, min((i + 1) * step, top)) for i in range(count) if i * step < top]


def divergence_report(w: Window, r: int, annuli: Sequence[tuple[int, int]],
                      cap: int | None = None) -> TrendReport:
    """Trend of min s_r over growing annuli.

    DIVERGING: minima nondecreasing and the last strictly dominates all
    earlier ones.  BOUNDED: the last minimum does not exceed an earlier
    one (a cap is witnessed cofinally at window scale).  MIXED:
    everything else.  Finite proxy for divergence along the boundary;
    heuristic by design and reported as such.
    """
    if len(annuli) < 2:
        raise UsageError("divergence trend needs at least 2 annuli")
    profile = separation_profile(w, r, cap=cap)
    minima = []
    used = []
    for lo, hi in annuli:
        vals = [v for x, v in profile.values.items()
                if v is not None and lo <= w.base_distance(x) < hi]
        if vals:
            minima.append(min(vals))
            used.append((lo, hi))
    if len(minima) < 2:
        raise UsageError("fewer than 2 annuli contain trusted profile points")
    nondecreasing = all(a <= b for a, b in zip(minima, minima[1:]))
    last_dominates = minima[-1] > max(minima[:-1])
    if nondecreasing and last_dominates:
        flag = DIVERGING
    elif not last_dominates:
        flag = BOUNDED
    else:
        flag = MIXED
    return TrendReport(r=r, annuli=tuple(used), minima=tuple(minima),
                       flag=flag, cap=max(minima))


# ---------------------------------------------------------------------------
# scale components / asymptotic dimension zero

UNBOUNDED_AT_WINDOW = "UNBOUNDED-AT-WINDOW"


@dataclass(frozen=True)
class ComponentDecomposition:
    """The r-chain-connected classes of a window, with exact diameters
    and a horizon-touching flag per component."""

    r: int
    components: tuple[tuple[Point, ...], ...]
    diameters: tuple[int, ...]
    touching: tuple[bool, ...]
    touch_margin: int

    def interior_max_diameter(self) -> int | None:
        inner = [d for d, t in zip(self.diameters, self.touching) if not t]
        return max(inner) if inner else None

    @property
    def flag(self) -> str | None:
        return UNBOUNDED_AT_WINDOW if all(self.touching) and self.touching else None


class _UnionFind:
    def __init__(self, items: Iterable[Point]):
        self.parent = {p: p for p in items}

    def find(self, p: Point) -> Point:
        root = p
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[p] != root:
            self.parent[p], p = root, self.parent[p]
        return root

    def union(self, a: Point, b: Point) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _components(w: Window, points: Sequence[Point], r: int) -> list[list[Point]]:
    inside = set(points)
    uf = _UnionFind(points)
    for x in points:
        for y in w.neighbors(x, r):
            if y in inside:
                uf.union(x, y)
    groups: dict[Point, list[Point]] = {}
    for p in points:
        groups.setdefault(uf.find(p), []).append(p)
    comps = [sorted(g, key=w.index) for g in groups.values()]
    comps.sort(key=lambda g: w.index(g[0]))
    return comps


def _diameter(w: Window, comp: Sequence[Point]) -> int:
    best = 0
    for i, x in enumerate(comp):
        for y in comp[i + 1:]:
            d = w.distance(x, y)
            if d > best:
                best = d
    return best


def scale_components(w: Window, r: int, touch_margin: int | None = None) -> ComponentDecomposition:
    if r < 0:
        raise UsageError("component scale must be nonnegative")
    if touch_margin is None:
        touch_margin = r + 1
    comps = _components(w, w.points, r)
    diameters = tuple(_diameter(w, c) for c in comps)
    if w.complete:
        touching = tuple(False for _ in comps)
    else:
        touching = tuple(any(w.margin_of(p) < touch_margin for p in c) for c in comps)
    return ComponentDecomposition(r=r, components=tuple(tuple(c) for c in comps),
                                  diameters=diameters, touching=touching,
                                  touch_margin=touch_margin)


def asdim0_profile(w: Window, scales: Sequence[int],
                   touch_margin: int | None = None) -> dict[int, ComponentDecomposition]:
    """Per scale r: the r-component decomposition.  The profile value at
    r is the max diameter over components that do not touch the horizon
    (None plus the UNBOUNDED-AT-WINDOW flag when every component does).
    """
    if touch_margin is None:
        touch_margin = max(scales) + 1
    if not w.complete and max(scales) > w.horizon - w.margin:
        raise UsageError("component scale exceeds the window's trust margin")
    return {r: scale_components(w, r, touch_margin) for r in scales}


# ---------------------------------------------------------------------------
# ends and split witnesses

@dataclass(frozen=True)
class EndsReport:
    r: int
    rho: int
    touch_margin: int
    count: int                                  # horizon-touching components
    components: tuple[tuple[Point, ...], ...]   # all components of the punctured window
    touching: tuple[bool, ...]
    note: str = EPISTEMIC_PROFILE


def ends_report(w: Window, r: int, rho: int, touch_margin: int | None = None) -> EndsReport:
    """Count of horizon-touching r-components of window \\ N_rho(base)."""
    if touch_margin is None:
        touch_margin = r + 1
    if not w.complete and rho + r >= w.horizon - w.margin:
        raise UsageError("puncture plus scale reaches the window's trust margin")
    outside = [p for p in w.points if w.base_distance(p) > rho]
    if not outside:
        return EndsReport(r=r, rho=rho, touch_margin=touch_margin, count=0,
                          components=(), touching=())
    comps = _components(w, outside, r)
    touching = tuple(any(w.margin_of(p) < touch_margin for p in c) for c in comps)
    return EndsReport(r=r, rho=rho, touch_margin=touch_margin,
                      count=sum(touching),
                      components=tuple(tuple(c) for c in comps), touching=touching)


@dataclass(frozen=True)
class SplitWitness:
    """Two far-apart horizon-touching halves of a punctured window: a
    window-scale certificate against chain transitivity.  A and B are
    disjoint, cover the window beyond N_rho(base), both touch the
    horizon, and N_r(A) does not meet B."""

    r: int
    rho: int
    touch_margin: int
    side_a: tuple[Point, ...]
    side_b: tuple[Point, ...]


def split_witness(w: Window, r: int, rho: int,
                  touch_margin: int | None = None) -> SplitWitness | None:
    """A SplitWitness if the punctured window has two or more
    horizon-touching r-components, else None.  Components not touching
    the horizon are bounded islands; they join side A (any assignment
    keeps the sides more than r apart, distinct r-components being
    pairwise more than r separated)."""
    rep = ends_report(w, r, rho, touch_margin)
    touch_ids = [i for i, t in enumerate(rep.touching) if t]
    if len(touch_ids) < 2:
        return None
    first = touch_ids[0]
    side_a: list[Point] = []
    side_b: list[Point] = []
    for i, comp in enumerate(rep.components):
        if i in touch_ids and i != first:
            side_b.extend(comp)
        else:
            side_a.extend(comp)
    side_a.sort(key=w.index)
    side_b.sort(key=w.index)
    return SplitWitness(r=r, rho=rho, touch_margin=rep.touch_margin,
                        side_a=tuple(side_a), side_b=tuple(side_b))


# ---------------------------------------------------------------------------
# tower witnesses (stacked bounded-displacement levels)

@dataclass(frozen=True)
class TowerWitness:
    """N disjoint towers (y_1, ..., y_J): for each level j >= 2 the
    distance d(y_1, y_j) lies in [S_j, B_j], with the S_j strictly
    increasing across levels and the B_j finite.  A finite certificate
    of per-level-bounded, across-level-diverging stacking."""

    levels: int
    bounds: tuple[tuple[int, int], ...]        # (S_j, B_j) for j = 2..levels
    towers: tuple[tuple[Point, ...], ...]


@dataclass(frozen=True)
class NoWitnessAtScale:
    kind: str
    params: dict
    exhausted: bool          # True: the bounded search space was fully explored
    nodes: int
    detail: str = ""
    note: str = EPISTEMIC_NO_WITNESS


def tower_bounds(levels: int, base_scale: int, cap_ratio: int) -> tuple[tuple[int, int], ...]:
    return tuple((base_scale * 2 ** (j - 1), cap_ratio * base_scale * 2 ** (j - 1))
                 for j in range(2, levels + 1))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.tripped = False

    def spend(self) -> bool:
        self.used += 1
        if self.used > self.limit:
            self.tripped = True
        return not self.tripped


def find_tower_witness(w: Window, levels: int, towers: int, base_scale: int = 2,
                       cap_ratio: int = 4, budget: int = 200_000
                       ) -> TowerWitness | NoWitnessAtScale:
    """Search for ``towers`` disjoint towers of ``levels`` levels with
    the dyadic bound schedule S_j = base_scale * 2^(j-1), B_j =
    cap_ratio * S_j (levels j = 2..levels; level 1 is the tower base).

    Strategy: per-base candidate shells from ambient balls, depth-first
    stacking inside a tower, depth-first selection of disjoint towers
    across bases in canonical order.  The search is exhaustive unless
    the node budget trips; the failure record says which.
    """
    if levels < 1 or towers < 1:
        raise UsageError("levels and towers must be >= 1")
    if base_scale < 1 or cap_ratio < 1:
        raise UsageError("base_scale and cap_ratio must be >= 1")
    bounds = tower_bounds(levels, base_scale, cap_ratio)
    if bounds and bounds[-1][1] > w.horizon:
        raise UsageError(
            f"top level bound {bounds[-1][1]} exceeds the window horizon {w.horizon}")
    params = {"levels": levels, "towers": towers,
              "base_scale": base_scale, "cap_ratio": cap_ratio}

    shells: dict[Point, list[list[Point]]] = {}

    def candidate_shells(base: Point) -> list[list[Point]]:
        if base not in shells:
            per_level = []
            if bounds:
                top = bounds[-1][1]
                near = sorted((q for q in w.neighbors(base, top) if q != base),
                              key=w.index)
                for lo, hi in bounds:
                    per_level.append(
                        [q for q in near if lo <= w.distance(base, q) <= hi])
            shells[base] = per_level
        return shells[base]

    budget_box = _Budget(budget)

    def towers_from(base: Point, used: set[Point]):
        """Yield towers rooted at base avoiding used points (DFS)."""
        per_level = candidate_shells(base)
        stack: list[Point] = []

        def rec(j: int):
            if not budget_box.spend():
                return
            if j == len(per_level):
                yield (base, *stack)
                return
            for q in per_level[j]:
                if q in used or q in stack or q == base:
                    continue
                stack.append(q)
                yield from rec(j + 1)
                stack.pop()
                if budget_box.tripped:
                    return

        yield from rec(0)

    bases = [p for p in w.points]
    chosen: list[tuple[Point, ...]] = []
    used: set[Point] = set()

    def select(base_idx: int) -> bool:
        if len(chosen) == towers:
            return True
        if base_idx >= len(bases) or budget_box.tripped:
            return False
        base = bases[base_idx]
        if base not in used:
            for tower in towers_from(base, used):
                chosen.append(tower)
                used.update(tower)
                if select(base_idx + 1):
                    return True
                used.difference_update(tower)
                chosen.pop()
                if budget_box.tripped:
                    return False
        # also try skipping this base entirely
        return select(base_idx + 1)

    if select(0):
        return TowerWitness(levels=levels, bounds=bounds, towers=tuple(chosen))
    return NoWitnessAtScale(kind="tower", params=params,
                            exhausted=not budget_box.tripped, nodes=budget_box.used,
                            detail="no disjoint tower family at these scales")


# ---------------------------------------------------------------------------
# scaled pair families

@dataclass(frozen=True)
class PairFamilyWitness:
    """Per scale r: N point pairs, all 2N points distinct within the
    scale, with r < d(x, y) <= bound.  A finite certificate of pairs at
    a fixed bounded distance exceeding every tested scale."""

    scales: tuple[int, ...]
    bound: int
    families: dict[int, tuple[tuple[Point, Point], ...]]


def find_pair_family_witness(w: Window, scales: Sequence[int], bound: int,
                             pairs_per_scale: int) -> PairFamilyWitness | NoWitnessAtScale:
    """Greedy disjoint pairing per scale, points in canonical order.

    Failure is reported per scale; when no qualifying pair exists at all
    at a scale (the pair-distance histogram is empty in (r, bound]),
    that is recorded and the failure is exhaustive.
    """
    if any(r >= bound for r in scales):
        raise UsageError("every scale must be smaller than the bound")
    if pairs_per_scale < 1:
        raise UsageError("pairs_per_scale must be >= 1")
    families: dict[int, tuple[tuple[Point, Point], ...]] = {}
    for r in sorted(scales):
        used: set[Point] = set()
        pairs: list[tuple[Point, Point]] = []
        for x in w.points:
            if x in used:
                continue
            partner = None
            for y in sorted(w.neighbors(x, bound), key=w.index):
                if y in used or y == x:
                    continue
                if r < w.distance(x, y) <= bound:
                    partner = y
                    break
            if partner is not None:
                pairs.append((x, partner))
                used.update((x, partner))
                if len(pairs) == pairs_per_scale:
                    break
        if len(pairs) < pairs_per_scale:
            any_pair = any(
                r < w.distance(x, y) <= bound
                for x in w.points for y in w.neighbors(x, bound) if y != x)
            detail = (f"scale {r}: no pair at distance in ({r}, {bound}] exists"
                      if not any_pair else
                      f"scale {r}: greedy pairing found only {len(pairs)} disjoint pairs")
            return NoWitnessAtScale(
                kind="pair_family",
                params={"scales": list(scales), "bound": bound,
                        "pairs_per_scale": pairs_per_scale},
                exhausted=not any_pair, nodes=len(w.points), detail=detail)
        families[r] = tuple(pairs)
    return PairFamilyWitness(scales=tuple(sorted(scales)), bound=bound, families=families)
