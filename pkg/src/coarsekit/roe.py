"""Finite truncations of the uniform Roe algebra.

Band operators are sparse matrices over window points with exact
rational entries and a recorded propagation bound (the largest distance
between the indices of a nonzero entry).  Every partial translation f
yields a partial isometry v_f with one unit entry per domain point; the
conditional expectation E extracts the diagonal.  All identities tested
here are algebraic, so the arithmetic is exact rational end to end and
no operator norms appear.

The cluster-limit model realizes the diagonal-state representation on a
finite orbit: a pattern P of k labeled points stands for the orbit, a
tail translation t (a partial injection of P applied uniformly to all
clusters beyond a stabilization index) acts by the k x k 0/1 matrix
M_t with M_t e_q = e_t(q) on dom(t) and 0 off it, and limit diagonals
act diagonally.  Irreducibility is certified by computing the exact
dimension of the commutant over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .spaces import Point, UsageError, Window
from .translations import PartialTranslation, partial_translation
from .zoo import CoarseUnionSpace, FinitePatternSpace

Entry = tuple[Point, Point]


class InvariantViolation(AssertionError):
    """Two independently computed sides of an exact identity disagree."""


# ---------------------------------------------------------------------------
# band operators

@dataclass(frozen=True)
class BandOperator:
    """Sparse exact-rational matrix over window points; ``propagation``
    is recomputed from the entries at construction."""

    window: Window
    entries: dict[Entry, Fraction]
    propagation: int


def band(w: Window, entries: Mapping[Entry, Fraction | int]) -> BandOperator:
    clean: dict[Entry, Fraction] = {}
    prop = 0
    for (row, col), val in entries.items():
        v = Fraction(val)
        if not v:
            continue
        if row not in w or col not in w:
            raise UsageError(f"entry ({row!r}, {col!r}) indexes outside the window")
        clean[(row, col)] = v
        prop = max(prop, w.distance(row, col))
    return BandOperator(window=w, entries=clean, propagation=prop)


@dataclass(frozen=True)
class DiagonalOperator:
    """A band operator of propagation zero, kept as point -> value."""

    window: Window
    values: dict[Point, Fraction]

    def as_band(self) -> BandOperator:
        return band(self.window, {(p, p): v for p, v in self.values.items()})


def diagonal(w: Window, values: Mapping[Point, Fraction | int]) -> DiagonalOperator:
    vals = {p: Fraction(v) for p, v in values.items() if Fraction(v)}
    for p in vals:
        if p not in w:
            raise UsageError(f"diagonal point {p!r} outside the window")
    return DiagonalOperator(window=w, values=vals)


def indicator(w: Window, points: Iterable[Point]) -> DiagonalOperator:
    return diagonal(w, {p: 1 for p in points})


def vf(w: Window, f: PartialTranslation) -> BandOperator:
    """The partial isometry of f: unit entry at (f(x), x) per domain
    point.  Its propagation equals the displacement of f."""
    return band(w, {(y, x): 1 for x, y in f.graph})


def add(a: BandOperator, b: BandOperator) -> BandOperator:
    _same_window(a, b)
    out = dict(a.entries)
    for k, v in b.entries.items():
        out[k] = out.get(k, Fraction(0)) + v
    return band(a.window, out)


def scalar(c: Fraction | int, a: BandOperator) -> BandOperator:
    c = Fraction(c)
    return band(a.window, {k: c * v for k, v in a.entries.items()})


def multiply(a: BandOperator, b: BandOperator) -> BandOperator:
    _same_window(a, b)
    by_row: dict[Point, list[tuple[Point, Fraction]]] = {}
    for (row, col), v in b.entries.items():
        by_row.setdefault(row, []).append((col, v))
    out: dict[Entry, Fraction] = {}
    for (row, mid), av in a.entries.items():
        for col, bv in by_row.get(mid, ()):
            key = (row, col)
            out[key] = out.get(key, Fraction(0)) + av * bv
    return band(a.window, out)


def adjoint(a: BandOperator) -> BandOperator:
    # rational entries: the adjoint is the transpose
    return band(a.window, {(col, row): v for (row, col), v in a.entries.items()})


def _same_window(a: BandOperator, b: BandOperator) -> None:
    if a.window is not b.window:
        raise UsageError("operators live on different windows")


def expectation(a: BandOperator) -> DiagonalOperator:
    """E(a): the diagonal of a.  Idempotent and a bimodule map over
    diagonals: E(d a d') = d E(a) d'."""
    return diagonal(a.window, {row: v for (row, col), v in a.entries.items() if row == col})


def ideal_membership(a: BandOperator, points: Iterable[Point]) -> bool:
    """Whether E(a* a) vanishes on the given point set, i.e. whether a
    belongs to the ideal of operators whose columns die on that set."""
    gram = expectation(multiply(adjoint(a), a))
    return all(gram.values.get(p, Fraction(0)) == 0 for p in points)


# ---------------------------------------------------------------------------
# the finite cluster-limit model

Matrix = tuple[tuple[Fraction, ...], ...]


def _zero_matrix(k: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * k for _ in range(k)]


def _freeze(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(row) for row in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    k = len(a)
    out = _zero_matrix(k)
    for i in range(k):
        for l in range(k):
            if a[i][l]:
                for j in range(k):
                    if b[l][j]:
                        out[i][j] += a[i][l] * b[l][j]
    return _freeze(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return _freeze([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def mat_scale(c: Fraction, a: Matrix) -> Matrix:
    return _freeze([[c * x for x in row] for row in a])


def mat_transpose(a: Matrix) -> Matrix:
    return _freeze(list(zip(*a)))


def mat_eye(k: int) -> Matrix:
    return _freeze([[Fraction(int(i == j)) for j in range(k)] for i in range(k)])


@dataclass(frozen=True)
class TailTranslation:
    """A partial injection of pattern positions, applied uniformly to
    every cluster beyond a stabilization index."""

    mapping: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)


def tail_translation(mapping: Mapping[int, int], size: int) -> TailTranslation:
    seen = set()
    for q, t in mapping.items():
        if not (0 <= q < size and 0 <= t < size):
            raise UsageError("tail translation leaves the pattern")
        if t in seen:
            raise UsageError(f"tail translation is not injective at {t}")
        seen.add(t)
    return TailTranslation(mapping=tuple(sorted(mapping.items())))


@dataclass(frozen=True)
class ClusterLimitRep:
    """Generator matrices of the finite orbit model: for each tail
    translation t the 0/1 matrix with M_t e_q = e_t(q) on dom(t) and 0
    elsewhere, plus one diagonal matrix per limit diagonal."""

    pattern: FinitePatternSpace
    translation_matrices: tuple[Matrix, ...]
    diagonal_matrices: tuple[Matrix, ...]

    def generators(self) -> tuple[Matrix, ...]:
        return self.translation_matrices + self.diagonal_matrices


def translation_matrix(t: TailTranslation, k: int) -> Matrix:
    rows = _zero_matrix(k)
    for q, target in t.mapping:
        rows[target][q] = Fraction(1)
    return _freeze(rows)


def cluster_rep(pattern: FinitePatternSpace, tails: Sequence[TailTranslation],
                diags: Sequence[Mapping[int, Fraction | int]] = ()) -> ClusterLimitRep:
    k = pattern.size
    mats = []
    for t in tails:
        for q, target in t.mapping:
            if not (0 <= q < k and 0 <= target < k):
                raise UsageError("tail translation does not fit the pattern")
        mats.append(translation_matrix(t, k))
    dmats = []
    for lam in diags:
        rows = _zero_matrix(k)
        for q, v in lam.items():
            rows[q][q] = Fraction(v)
        dmats.append(_freeze(rows))
    return ClusterLimitRep(pattern=pattern, translation_matrices=tuple(mats),
                           diagonal_matrices=tuple(dmats))


def _nullity(rows: list[list[Fraction]], unknowns: int) -> int:
    """Unknowns minus rank, by exact Gaussian elimination."""
    rank = 0
    col = 0
    nrows = len(rows)
    while rank < nrows and col < unknowns:
        pivot = next((i for i in range(rank, nrows) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for i in range(nrows):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return unknowns - rank


def commutant_dimension(rep: ClusterLimitRep) -> int:
    """Dimension of the space of k x k matrices commuting with every
    generator, by exact linear solve on the k^2 commutation system.
    Value 1 certifies irreducibility of the generated algebra."""
    k = rep.pattern.size
    rows: list[list[Fraction]] = []
    for g in rep.generators():
        # (B g - g B)[i][j] = sum_l B[i][l] g[l][j] - g[i][l] B[l][j] = 0
        for i in range(k):
            for j in range(k):
                row = [Fraction(0)] * (k * k)
                for l in range(k):
                    row[i * k + l] += g[l][j]
                    row[l * k + j] -= g[i][l]
                rows.append(row)
    return _nullity(rows, k * k)


# ---------------------------------------------------------------------------
# bridging the model to cluster-space windows

def window_tail_translation(w: Window, t: TailTranslation,
                            start_cluster: int) -> PartialTranslation:
    """The window translation acting by t inside every cluster with
    index >= start_cluster."""
    space = w.space
    if not isinstance(space, CoarseUnionSpace):
        raise UsageError("tail translations act on cluster-space windows")
    tmap = t.as_dict()
    mapping = {}
    for p in w.points:
        n, q = p[0], p[1:]
        if n >= start_cluster and q[0] in tmap:
            mapping[p] = (n, tmap[q[0]])
    return partial_translation(w, mapping)


def cluster_block(a: BandOperator, cluster: int, size: int) -> Matrix:
    """The k x k sub-matrix of a band operator on one cluster."""
    rows = _zero_matrix(size)
    for i in range(size):
        for j in range(size):
            rows[i][j] = a.entries.get(((cluster, i), (cluster, j)), Fraction(0))
    return _freeze(rows)


@dataclass(frozen=True)
class KernelCheck:
    matrix_zero: bool        # the model matrix of the combination vanishes
    tail_diagonal_zero: bool # E(a* a) vanishes on all tail clusters of the window
    coefficients: tuple[tuple[Fraction, TailTranslation], ...]


def kernel_check(coeffs: Sequence[tuple[Fraction | int, TailTranslation]],
                 pattern: FinitePatternSpace, w: Window,
                 start_cluster: int) -> KernelCheck:
    """Cross-validate the kernel criterion on the finite model.

    Side one: the k x k model matrix of a = sum c_i M_(t_i) is zero.
    Side two: on the cluster window, E(a* a) restricted to every cluster
    beyond the stabilization index vanishes, computed with the window
    band-operator arithmetic.  The two sides must coincide; disagreement
    raises InvariantViolation carrying the operator.
    """
    k = pattern.size
    model = _freeze(_zero_matrix(k))
    for c, t in coeffs:
        model = mat_add(model, mat_scale(Fraction(c), translation_matrix(t, k)))
    matrix_zero = all(not v for row in model for v in row)

    op = band(w, {})
    for c, t in coeffs:
        op = add(op, scalar(Fraction(c), vf(w, window_tail_translation(w, t, start_cluster))))
    gram = expectation(multiply(adjoint(op), op))
    tail_points = [p for p in w.points if p[0] >= start_cluster]
    tail_zero = all(gram.values.get(p, Fraction(0)) == 0 for p in tail_points)

    if matrix_zero != tail_zero:
        raise InvariantViolation(
            f"kernel criterion split: model matrix zero = {matrix_zero}, window tail "
            f"diagonal zero = {tail_zero}, combination = {coeffs!r}")
    return KernelCheck(matrix_zero=matrix_zero, tail_diagonal_zero=tail_zero,
                       coefficients=tuple((Fraction(c), t) for c, t in coeffs))
