"""Partial translations at window scale and decomposition of bounded
relations into their graphs.

A partial translation is an injective map between two subsets of one
window moving every point a bounded distance; under composition and
inversion these form an inverse semigroup.  A bounded relation (all
pairs within distance n) splits into finitely many such graphs; the
decomposition here colors the relation's edges with at most Delta
colors, Delta being the maximum in/out degree of the relation viewed as
a bipartite graph, so the part count meets the Koenig bound exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .spaces import Point, UsageError, Window


@dataclass(frozen=True)
class PartialTranslation:
    """A finite injective map on window points with its exact
    displacement bound max d(x, f(x)) over the domain."""

    graph: tuple[tuple[Point, Point], ...]   # sorted (source, target) pairs
    displacement: int

    def mapping(self) -> dict[Point, Point]:
        return dict(self.graph)

    def domain(self) -> tuple[Point, ...]:
        return tuple(x for x, _ in self.graph)

    def image(self) -> tuple[Point, ...]:
        return tuple(y for _, y in self.graph)

    def __len__(self) -> int:
        return len(self.graph)


def partial_translation(w: Window, mapping: Mapping[Point, Point]) -> PartialTranslation:
    """Validates injectivity and membership; records the exact displacement."""
    seen_targets = set()
    disp = 0
    for x, y in mapping.items():
        if x not in w or y not in w:
            raise UsageError(f"translation pair {x!r} -> {y!r} leaves the window")
        if y in seen_targets:
            raise UsageError(f"translation is not injective at target {y!r}")
        seen_targets.add(y)
        disp = max(disp, w.distance(x, y))
    graph = tuple(sorted(mapping.items()))
    return PartialTranslation(graph=graph, displacement=disp)


def identity_on(w: Window, points: Iterable[Point]) -> PartialTranslation:
    return partial_translation(w, {p: p for p in points})


def compose(w: Window, f: PartialTranslation, g: PartialTranslation) -> PartialTranslation:
    """f after g, defined where the chain x -> g(x) -> f(g(x)) exists."""
    fm = f.mapping()
    return partial_translation(
        w, {x: fm[y] for x, y in g.graph if y in fm})


def invert(f: PartialTranslation) -> PartialTranslation:
    graph = tuple(sorted((y, x) for x, y in f.graph))
    return PartialTranslation(graph=graph, displacement=f.displacement)


def apply_translation(f: PartialTranslation, points: Iterable[Point]) -> set[Point]:
    fm = f.mapping()
    return {fm[p] for p in points if p in fm}


def fixed_points(f: PartialTranslation) -> set[Point]:
    return {x for x, y in f.graph if x == y}


@dataclass(frozen=True)
class BoundedRelation:
    """Ordered point pairs, every pair within distance ``bound``."""

    pairs: frozenset[tuple[Point, Point]]
    bound: int


def relation_at(w: Window, n: int) -> BoundedRelation:
    """All ordered pairs at distance <= n among interior(n) points."""
    if n < 0:
        raise UsageError("relation bound must be nonnegative")
    if not w.complete and n > w.horizon - w.margin:
        raise UsageError("relation bound exceeds the window's trust margin")
    inside = set(w.interior(n))
    pairs = set()
    for x in inside:
        for y in w.neighbors(x, n):
            if y in inside:
                pairs.add((x, y))
    return BoundedRelation(pairs=frozenset(pairs), bound=n)


def relation_degree(rel: BoundedRelation) -> int:
    """Max in/out degree of the relation as a bipartite graph."""
    out_deg: dict[Point, int] = {}
    in_deg: dict[Point, int] = {}
    for x, y in rel.pairs:
        out_deg[x] = out_deg.get(x, 0) + 1
        in_deg[y] = in_deg.get(y, 0) + 1
    degs = list(out_deg.values()) + list(in_deg.values())
    return max(degs) if degs else 0


def decompose(w: Window, rel: BoundedRelation) -> list[PartialTranslation]:
    """Split a bounded relation into the graphs of partial translations.

    Bipartite edge coloring by alternating-path recoloring: each color
    class meets every source and every target at most once, so it is
    the graph of a partial translation, and at most Delta colors are
    used.  The returned graphs partition the relation exactly; every
    part has displacement <= rel.bound.  Deterministic: edges are
    processed in canonical point order and colors allocated smallest
    first.
    """
    edges = sorted(rel.pairs, key=lambda e: (w.index(e[0]), w.index(e[1])))
    # color tables: src_col[x][c] = y means edge (x, y) wears color c
    src_col: dict[Point, dict[int, Point]] = {}
    tgt_col: dict[Point, dict[int, Point]] = {}

    def free_color(table: dict[int, Point]) -> int:
        c = 0
        while c in table:
            c += 1
        return c

    for u, v in edges:
        su = src_col.setdefault(u, {})
        tv = tgt_col.setdefault(v, {})
        a = free_color(su)
        if a not in tv:
            su[a] = v
            tv[a] = u
            continue
        b = free_color(tv)
        # a is free at u but taken at v; b is free at v.  Walk the
        # maximal chain of edges alternating colors a, b away from v.
        # Sources on the chain are entered by a-colored edges, and a is
        # free at u, so the chain never reaches u and never cycles.
        chain: list[tuple[Point, Point, int]] = []   # (source, target, color)
        x, col, at_target = v, a, True
        while True:
            if at_target:
                src = tgt_col[x].get(col)
                if src is None:
                    break
                chain.append((src, x, col))
            else:
                tgt = src_col[x].get(col)
                if tgt is None:
                    break
                chain.append((x, tgt, col))
            x = chain[-1][0] if at_target else chain[-1][1]
            col = b if col == a else a
            at_target = not at_target
        # Swap a and b on every chain edge: afterwards a is free at v
        # (its a-edge turned b, and v had no b) and still free at u.
        for s, t, c in chain:
            del src_col[s][c]
            del tgt_col[t][c]
        for s, t, c in chain:
            swapped = b if c == a else a
            src_col[s][swapped] = t
            tgt_col[t][swapped] = s
        su[a] = v
        tgt_col[v][a] = u

    classes: dict[int, dict[Point, Point]] = {}
    for x, table in src_col.items():
        for c, y in table.items():
            classes.setdefault(c, {})[x] = y
    return [partial_translation(w, classes[c]) for c in sorted(classes)]


def random_translation(w: Window, rng: random.Random, max_disp: int,
                       density: float = 0.5) -> PartialTranslation:
    """A seeded random partial translation with displacement <= max_disp.

    Sources are drawn from interior(max_disp) so every candidate target
    is a window point; targets are chosen injectively among neighbors.
    """
    mapping: dict[Point, Point] = {}
    used = set()
    pool = list(w.interior(max_disp))
    rng.shuffle(pool)
    for x in pool:
        if rng.random() > density:
            continue
        cands = [y for y in w.neighbors(x, max_disp) if y not in used]
        if not cands:
            continue
        y = rng.choice(sorted(cands, key=w.index))
        mapping[x] = y
        used.add(y)
    return partial_translation(w, mapping)
