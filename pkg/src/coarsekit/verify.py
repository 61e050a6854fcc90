"""Standalone witness checkers.

Each checker re-derives a certificate's claims from raw distance
queries, never calling the search code that produced it.  A checker
returns a list of human-readable violations; empty means the witness
stands.
"""

from __future__ import annotations

from typing import Sequence

from .criteria import PairFamilyWitness, SplitWitness, TowerWitness
from .spaces import Partition, Point, Window


def check_tower_witness(w: Window, wit: TowerWitness) -> list[str]:
    problems: list[str] = []
    if len(wit.bounds) != max(wit.levels - 1, 0):
        problems.append("bounds list does not match the level count")
        return problems
    scales = [s for s, _ in wit.bounds]
    if any(a >= b for a, b in zip(scales, scales[1:])):
        problems.append("level scales are not strictly increasing")
    seen: set[Point] = set()
    for t, tower in enumerate(wit.towers):
        if len(tower) != wit.levels:
            problems.append(f"tower {t} has {len(tower)} levels, expected {wit.levels}")
            continue
        for p in tower:
            if p not in w:
                problems.append(f"tower {t} point {p!r} is outside the window")
            elif p in seen:
                problems.append(f"point {w.label(p)} appears twice across towers")
            seen.add(p)
        base = tower[0]
        for j, (lo, hi) in enumerate(wit.bounds, start=2):
            d = w.distance(base, tower[j - 1])
            if not lo <= d <= hi:
                problems.append(
                    f"tower {t} level {j}: d = {d} outside [{lo}, {hi}]")
    return problems


def check_pair_family(w: Window, wit: PairFamilyWitness) -> list[str]:
    problems: list[str] = []
    for r in wit.scales:
        fam = wit.families.get(r)
        if fam is None:
            problems.append(f"scale {r} has no family")
            continue
        seen: set[Point] = set()
        for x, y in fam:
            for p in (x, y):
                if p not in w:
                    problems.append(f"scale {r}: point {p!r} outside the window")
                elif p in seen:
                    problems.append(f"scale {r}: point {w.label(p)} reused")
                seen.add(p)
            d = w.distance(x, y)
            if not r < d <= wit.bound:
                problems.append(
                    f"scale {r}: d({w.label(x)}, {w.label(y)}) = {d} "
                    f"not in ({r}, {wit.bound}]")
    return problems


def check_split_witness(w: Window, wit: SplitWitness) -> list[str]:
    problems: list[str] = []
    a_set, b_set = set(wit.side_a), set(wit.side_b)
    if a_set & b_set:
        problems.append("sides overlap")
    expected = {p for p in w.points if w.base_distance(p) > wit.rho}
    if a_set | b_set != expected:
        problems.append("sides do not cover exactly the punctured window")
    for side, name in ((wit.side_a, "A"), (wit.side_b, "B")):
        if not any(w.margin_of(p) < wit.touch_margin for p in side):
            problems.append(f"side {name} does not touch the horizon")
    # halo disjointness: no point of B within r of A
    for x in wit.side_a:
        for y in w.neighbors(x, wit.r):
            if y in b_set:
                problems.append(
                    f"N_r(A) meets B at {w.label(x)} ~ {w.label(y)}")
                return problems
    return problems


def check_partition(w: Window, part: Partition) -> list[str]:
    problems: list[str] = []
    seen: set[Point] = set()
    for ci, cls in enumerate(part.classes):
        for i, x in enumerate(cls):
            if x in seen:
                problems.append(f"point {w.label(x)} appears in two classes")
            seen.add(x)
            for y in cls[i + 1:]:
                if w.distance(x, y) <= part.separation:
                    problems.append(
                        f"class {ci}: d({w.label(x)}, {w.label(y)}) <= {part.separation}")
    if seen != set(w.points):
        problems.append("classes do not cover the window exactly")
    return problems


def check_translation_cover(w: Window, pairs: Sequence[tuple[Point, Point]],
                            parts) -> list[str]:
    """The graphs of ``parts`` must partition ``pairs`` exactly, each
    part injective with displacement within its recorded bound."""
    problems: list[str] = []
    covered: list[tuple[Point, Point]] = []
    for k, f in enumerate(parts):
        targets = set()
        for x, y in f.graph:
            covered.append((x, y))
            if y in targets:
                problems.append(f"part {k} is not injective at {w.label(y)}")
            targets.add(y)
            if w.distance(x, y) > f.displacement:
                problems.append(f"part {k} exceeds its recorded displacement")
    if len(covered) != len(set(covered)):
        problems.append("parts overlap")
    if set(covered) != set(pairs):
        problems.append("parts do not cover the relation exactly")
    return problems
