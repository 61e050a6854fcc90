"""Constructors for the concrete spaces the toolkit analyzes.

Each constructor returns a Window whose distance oracle is exact:

  * integer grids N^k / Z^k under the l1 metric,
  * free groups F_n with the word metric (distance by free reduction,
    which agrees with shortest paths in the Cayley graph),
  * the ternary-support space: finite 0/1 supports a with value
    sum(3^i for i in a) and d(a, b) = |value(a) - value(b)|,
  * increasing square tuples {(n_1^2, ..., n_k^2) : n_1 < ... < n_k}
    inside N^k under l1,
  * the paired-columns space {(1, k^2)} u {(v2(k)+1, k^2)} inside N^2
    under l1, where v2 is the dyadic valuation (the column of k^2
    carries a second point at horizontal offset v2(k)),
  * cluster spaces: copies of a finite pattern strung on a line,
  * coarse unions of finite components through a star metric with
    integer spoke lengths (d(x, y) = d(x, p_n) + f(n) + f(m) + d(y, p_m)
    across components, so components n and m sit at exact mutual
    distance f(n) + f(m)).

Cluster spaces and coarse unions are complete finite spaces: the window
is the whole space and has no truncation edge.  All other windows are
exact ambient balls around the basepoint.

The JSON space-spec schema (kinds "grid", "free_group", "M", "Mk",
"M32", "clusters", "coarse_union") is documented in the README;
``window_from_spec`` builds a window from a parsed spec dict.
"""

from __future__ import annotations

import json
import math
from typing import Callable, Sequence

from .spaces import Point, SpacePresentation, UsageError, Window


# ---------------------------------------------------------------------------
# grids

class GridSpace(SpacePresentation):
    """N^k (signed=False) or Z^k (signed=True) with the l1 metric."""

    kind = "grid"

    def __init__(self, signed: bool, dims: int):
        if dims < 1:
            raise UsageError("grid dimension must be >= 1")
        self.signed = signed
        self.dims = dims

    def distance(self, a: Point, b: Point) -> int:
        return sum(abs(x - y) for x, y in zip(a, b))

    def is_point(self, p: Point) -> bool:
        if len(p) != self.dims:
            return False
        return self.signed or all(x >= 0 for x in p)

    def ball(self, center: Point, r: int) -> list[Point]:
        out: list[Point] = []

        def rec(i: int, budget: int, prefix: tuple):
            if i == self.dims:
                out.append(prefix)
                return
            lo = center[i] - budget if self.signed else max(0, center[i] - budget)
            for v in range(lo, center[i] + budget + 1):
                rec(i + 1, budget - abs(v - center[i]), prefix + (v,))

        rec(0, r, ())
        return out

    def label(self, p: Point) -> str:
        return str(p[0]) if self.dims == 1 else "(" + ",".join(map(str, p)) + ")"

    def params(self) -> dict:
        return {"kind": self.kind, "signed": self.signed, "dims": self.dims}


def make_grid(signed: bool, dims: int, horizon: int, margin: int = 0) -> Window:
    space = GridSpace(signed, dims)
    origin = (0,) * dims
    return Window(space, origin, horizon, space.ball(origin, horizon), margin=margin)


# ---------------------------------------------------------------------------
# free groups

class FreeGroupSpace(SpacePresentation):
    """The free group on ``rank`` generators with the word metric.

    Points are reduced words: tuples of nonzero ints in
    {-rank..-1, 1..rank}, a negative letter being the inverse of the
    positive one.  d(u, v) = |u| + |v| - 2 * (longest common prefix),
    the length of the free reduction of u^-1 v; in a tree the geodesic
    between two ball points stays inside the larger ball, so window
    distances are ambient.
    """

    kind = "free_group"

    def __init__(self, rank: int):
        if rank < 1:
            raise UsageError("free group rank must be >= 1")
        self.rank = rank
        self._letters = [g for i in range(1, rank + 1) for g in (i, -i)]

    def distance(self, a: Point, b: Point) -> int:
        c = 0
        for x, y in zip(a, b):
            if x != y:
                break
            c += 1
        return (len(a) - c) + (len(b) - c)

    def is_point(self, p: Point) -> bool:
        for i, g in enumerate(p):
            if g == 0 or abs(g) > self.rank:
                return False
            if i and p[i - 1] == -g:
                return False
        return True

    def ball(self, center: Point, r: int) -> list[Point]:
        # BFS over the Cayley graph; appending a letter either extends
        # the reduced word or cancels its last letter.
        seen = {center}
        frontier = [center]
        for _ in range(r):
            nxt = []
            for w in frontier:
                for g in self._letters:
                    u = w[:-1] if (w and w[-1] == -g) else w + (g,)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return list(seen)

    def label(self, p: Point) -> str:
        if not p:
            return "e"
        def letter(g: int) -> str:
            ch = chr(ord("a") + abs(g) - 1)
            return ch if g > 0 else ch.upper()
        return "".join(letter(g) for g in p)

    def params(self) -> dict:
        return {"kind": self.kind, "rank": self.rank}


def make_free_group(rank: int, horizon: int, margin: int = 0) -> Window:
    space = FreeGroupSpace(rank)
    return Window(space, (), horizon, space.ball((), horizon), margin=margin)


# ---------------------------------------------------------------------------
# ternary supports

class TernarySupportSpace(SpacePresentation):
    """Finite 0/1 ternary supports with the integer-difference metric.

    A point is the sorted tuple of its support indices (each >= 1); its
    value is sum(3^i over the support) and d(a, b) = |value(a) -
    value(b)|.  Equivalently: the nonnegative integers divisible by 3
    whose base-3 digits are all 0 or 1.
    """

    kind = "M"

    def distance(self, a: Point, b: Point) -> int:
        return abs(self.value(a) - self.value(b))

    @staticmethod
    def value(p: Point) -> int:
        return sum(3 ** i for i in p)

    @staticmethod
    def from_value(v: int) -> Point | None:
        """The support of v, or None if v is not a 0/1-ternary value."""
        if v < 0 or v % 3:
            return None
        support = []
        i = 0
        while v:
            v, d = divmod(v, 3)
            if d > 1:
                return None
            if d:
                support.append(i)
            i += 1
        return tuple(support)

    def is_point(self, p: Point) -> bool:
        return all(isinstance(i, int) and i >= 1 for i in p) and tuple(sorted(set(p))) == tuple(p)

    def ball(self, center: Point, r: int) -> list[Point]:
        v = self.value(center)
        out = []
        for u in range(max(0, v - r), v + r + 1):
            p = self.from_value(u)
            if p is not None:
                out.append(p)
        return out

    def label(self, p: Point) -> str:
        return str(self.value(p))

    def params(self) -> dict:
        return {"kind": self.kind}


def make_ternary(max_index: int, margin: int = 0) -> Window:
    """All supports inside {1..max_index}.

    This set equals the exact metric ball of radius sum(3^i, i <=
    max_index) around the empty support: any value with a support index
    beyond max_index is at least 3^(max_index+1) > that radius away.
    """
    if max_index < 1:
        raise UsageError("max_index must be >= 1")
    space = TernarySupportSpace()
    horizon = sum(3 ** i for i in range(1, max_index + 1))
    points = []
    for mask in range(1 << max_index):
        points.append(tuple(i + 1 for i in range(max_index) if mask >> i & 1))
    return Window(space, (), horizon, points, margin=margin)


# ---------------------------------------------------------------------------
# increasing square tuples

class SquareTupleSpace(SpacePresentation):
    """{(n_1^2, ..., n_k^2) : 1 <= n_1 < ... < n_k} inside N^k with l1."""

    kind = "Mk"

    def __init__(self, k: int):
        if k < 1:
            raise UsageError("tuple length must be >= 1")
        self.k = k

    def distance(self, a: Point, b: Point) -> int:
        return sum(abs(x - y) for x, y in zip(a, b))

    @staticmethod
    def _isqrt_exact(v: int) -> int | None:
        if v < 0:
            return None
        n = math.isqrt(v)
        return n if n * n == v else None

    def is_point(self, p: Point) -> bool:
        if len(p) != self.k:
            return False
        roots = [self._isqrt_exact(v) for v in p]
        if any(n is None or n < 1 for n in roots):
            return False
        return all(roots[i] < roots[i + 1] for i in range(self.k - 1))

    def ball(self, center: Point, r: int) -> list[Point]:
        out: list[Point] = []

        def rec(i: int, budget: int, prev_root: int, prefix: tuple):
            if i == self.k:
                out.append(prefix)
                return
            lo = max(prev_root + 1, math.isqrt(max(0, center[i] - budget)))
            n = lo
            while True:
                gap = abs(n * n - center[i])
                if n * n - center[i] > budget:
                    break
                if gap <= budget:
                    rec(i + 1, budget - gap, n, prefix + (n * n,))
                n += 1

        rec(0, r, 0, ())
        return out

    def label(self, p: Point) -> str:
        return "(" + ",".join(map(str, p)) + ")"

    def params(self) -> dict:
        return {"kind": self.kind, "k": self.k}


def make_square_tuples(k: int, horizon: int, margin: int = 0) -> Window:
    space = SquareTupleSpace(k)
    base = tuple(n * n for n in range(1, k + 1))
    return Window(space, base, horizon, space.ball(base, horizon), margin=margin)


# ---------------------------------------------------------------------------
# paired columns

def dyadic_valuation(k: int) -> int:
    return (k & -k).bit_length() - 1


class PairedColumnSpace(SpacePresentation):
    """Columns k^2 in N^2 carrying the point (1, k^2) and a partner
    (v2(k)+1, k^2); the horizontal pair offset v2(k) is constant on each
    dyadic class of k and unbounded over k.  Metric is l1 on N^2."""

    kind = "M32"

    def distance(self, a: Point, b: Point) -> int:
        return abs(a[0] - b[0]) + abs(a[1] - b[1])

    def is_point(self, p: Point) -> bool:
        if len(p) != 2:
            return False
        col, sq = p
        k = SquareTupleSpace._isqrt_exact(sq)
        if k is None or k < 1 or col < 1:
            return False
        return col == 1 or col == dyadic_valuation(k) + 1

    def ball(self, center: Point, r: int) -> list[Point]:
        a, b = center
        out = []
        k = max(1, math.isqrt(max(0, b - r)))
        while k * k <= b + r:
            row = r - abs(k * k - b)
            if row >= 0:
                for col in {1, dyadic_valuation(k) + 1}:
                    if abs(col - a) <= row:
                        out.append((col, k * k))
            k += 1
        return out

    def label(self, p: Point) -> str:
        return f"({p[0]},{p[1]})"

    def params(self) -> dict:
        return {"kind": self.kind}


def make_paired_columns(horizon: int, margin: int = 0) -> Window:
    space = PairedColumnSpace()
    return Window(space, (1, 1), horizon, space.ball((1, 1), horizon), margin=margin)


# ---------------------------------------------------------------------------
# finite patterns, cluster spaces, coarse unions

class FinitePatternSpace(SpacePresentation):
    """A finite metric space given by an explicit distance matrix.

    Points are (i,) for i = 0..size-1; point 0 is the basepoint used
    when the pattern is strung into a cluster space.
    """

    kind = "pattern"

    def __init__(self, matrix: Sequence[Sequence[int]]):
        n = len(matrix)
        if n < 1 or any(len(row) != n for row in matrix):
            raise UsageError("pattern distance matrix must be square and nonempty")
        for i in range(n):
            if matrix[i][i] != 0:
                raise UsageError("pattern matrix has a nonzero diagonal entry")
            for j in range(n):
                if matrix[i][j] != matrix[j][i] or matrix[i][j] < 0:
                    raise UsageError("pattern matrix is not symmetric nonnegative")
                if i != j and matrix[i][j] == 0:
                    raise UsageError("distinct pattern points at distance zero")
                for l in range(n):
                    if matrix[i][j] > matrix[i][l] + matrix[l][j]:
                        raise UsageError("pattern matrix violates the triangle inequality")
        self.matrix = tuple(tuple(row) for row in matrix)
        self.size = n

    def distance(self, a: Point, b: Point) -> int:
        return self.matrix[a[0]][b[0]]

    def is_point(self, p: Point) -> bool:
        return len(p) == 1 and 0 <= p[0] < self.size

    def ball(self, center: Point, r: int) -> list[Point]:
        return [(j,) for j in range(self.size) if self.matrix[center[0]][j] <= r]

    def diameter(self) -> int:
        return max(max(row) for row in self.matrix)

    def label(self, p: Point) -> str:
        return f"p{p[0]}"

    def params(self) -> dict:
        return {"kind": self.kind, "distances": [list(r) for r in self.matrix]}


def pattern_window(space: FinitePatternSpace) -> Window:
    pts = [(i,) for i in range(space.size)]
    return Window(space, (0,), space.diameter(), pts, complete=True)


class CoarseUnionSpace(SpacePresentation):
    """Star-metric union of finite component windows.

    Components are numbered 1..count; a point is (n, *inner).  Within a
    component the inner metric applies; across components
    d(x, y) = d(x, p_n) + f(n) + f(m) + d(y, p_m) through a virtual hub,
    where p_n is the component basepoint and f the spoke length.  The
    component separation d(X_n, X_m) = f(n) + f(m) is exact.
    """

    kind = "coarse_union"

    def __init__(self, components: Sequence[Window], spokes: Sequence[int]):
        if not components:
            raise UsageError("coarse union needs at least one component")
        if len(spokes) != len(components):
            raise UsageError("one spoke length per component is required")
        if any(s < 0 for s in spokes):
            raise UsageError("spoke lengths must be nonnegative")
        if any(spokes[i] >= spokes[i + 1] for i in range(len(spokes) - 1)):
            raise UsageError("spoke lengths must be strictly increasing")
        self.components = tuple(components)
        self.spokes = tuple(spokes)

    def _comp(self, p: Point) -> tuple[int, Window, Point]:
        n = p[0]
        comp = self.components[n - 1]
        return n, comp, p[1:]

    def distance(self, a: Point, b: Point) -> int:
        n, ca, xa = self._comp(a)
        m, cb, xb = self._comp(b)
        if n == m:
            return ca.space.distance(xa, xb)
        return (ca.space.distance(xa, ca.basepoint) + self.spokes[n - 1]
                + self.spokes[m - 1] + cb.space.distance(xb, cb.basepoint))

    def is_point(self, p: Point) -> bool:
        if not p or not (1 <= p[0] <= len(self.components)):
            return False
        return p[1:] in self.components[p[0] - 1]

    def ball(self, center: Point, r: int) -> list[Point]:
        n, comp, x = self._comp(center)
        out = [(n, *q) for q in comp.neighbors(x, r)]
        to_hub = comp.space.distance(x, comp.basepoint) + self.spokes[n - 1]
        for m, other in enumerate(self.components, start=1):
            if m == n:
                continue
            rem = r - to_hub - self.spokes[m - 1]
            if rem >= 0:
                out.extend((m, *q) for q in other.neighbors(other.basepoint, rem))
        return out

    def label(self, p: Point) -> str:
        n, comp, x = self._comp(p)
        return f"c{n}:{comp.space.label(x)}"

    def params(self) -> dict:
        return {"kind": self.kind,
                "components": [c.fingerprint() for c in self.components],
                "spokes": list(self.spokes)}


def make_coarse_union(components: Sequence[Window], spoke: Callable[[int], int] | Sequence[int],
                      margin: int = 0) -> Window:
    """Complete finite coarse union; spoke is f(n) for n = 1..count."""
    count = len(components)
    spokes = [spoke(n) for n in range(1, count + 1)] if callable(spoke) else list(spoke)
    space = CoarseUnionSpace(components, spokes)
    points = [(n, *p) for n, comp in enumerate(components, start=1) for p in comp.points]
    base = (1, *components[0].basepoint)
    horizon = max(space.distance(base, p) for p in points)
    return Window(space, base, horizon, points, margin=margin, complete=True)


def make_cluster_space(pattern: FinitePatternSpace | Sequence[Sequence[int]],
                       gap: Callable[[int], int] | Sequence[int], count: int,
                       margin: int = 0) -> Window:
    """``count`` copies of a finite pattern on a line; copies n and m sit
    at exact mutual distance gap(n) + gap(m) >= gap(min(n, m))."""
    if count < 1:
        raise UsageError("cluster count must be >= 1")
    if not isinstance(pattern, FinitePatternSpace):
        pattern = FinitePatternSpace(pattern)
    comp = pattern_window(pattern)
    return make_coarse_union([comp] * count, gap, margin=margin)


# ---------------------------------------------------------------------------
# JSON space specs

def _affine(spec: dict, what: str) -> Callable[[int], int]:
    try:
        slope, offset = int(spec["slope"]), int(spec.get("offset", 0))
    except (KeyError, TypeError, ValueError):
        raise UsageError(f"{what} must be an object {{'slope': a, 'offset': b}}") from None
    return lambda n: slope * n + offset


def window_from_spec(spec: dict) -> Window:
    """Build a window from a parsed space-spec dict (schema in README)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise UsageError("space spec must be an object with a 'kind' field")
    kind = spec["kind"]
    margin = int(spec.get("margin", 0))
    try:
        if kind == "grid":
            return make_grid(bool(spec["signed"]), int(spec["dims"]), int(spec["horizon"]), margin)
        if kind == "free_group":
            return make_free_group(int(spec["rank"]), int(spec["horizon"]), margin)
        if kind == "M":
            return make_ternary(int(spec["max_index"]), margin)
        if kind == "Mk":
            return make_square_tuples(int(spec["k"]), int(spec["horizon"]), margin)
        if kind == "M32":
            return make_paired_columns(int(spec["horizon"]), margin)
        if kind == "clusters":
            return make_cluster_space(spec["pattern"]["distances"], _affine(spec["gap"], "gap"),
                                      int(spec["count"]), margin)
        if kind == "coarse_union":
            comps = [window_from_spec(c) for c in spec["components"]]
            return make_coarse_union(comps, _affine(spec["spoke"], "spoke"), margin)
    except KeyError as e:
        raise UsageError(f"space spec of kind {kind!r} is missing field {e.args[0]!r}") from None
    raise UsageError(f"unknown space kind {kind!r}")


def load_space(path: str) -> Window:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: not valid JSON: {e.msg}") from None
    return window_from_spec(spec)
