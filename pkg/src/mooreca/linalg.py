"""Exact linear algebra over Z_p.

Dense Gauss-Jordan elimination (rank, determinant, nullspace, inverse),
the block elimination that reduces the rank of a block-tridiagonal rule
matrix to the rank of one n×n block, and closed-form determinants for
the blocks A₁ - I and B₁ of the φ rule matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import debugprint
from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldElement
from .gfp import FieldSpec
from .gfp import IntArray
from .gfp import inv_int
from .gfp import matmul_mod
from .gfp import reduce
from .rulematrix import RuleMatrix


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    field: FieldSpec
    entries: IntArray

    def __post_init__(self) -> None:
        arr = reduce(self.entries, self.field.p)
        if arr.ndim != 2:
            raise CAError(CAErrorCode.DIMENSION_MISMATCH, f"expected a 2-D array, got {arr.ndim}-D")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> DenseMatrix:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> DenseMatrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: list[list[int]]) -> DenseMatrix:
        return cls(field, np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> DenseMatrix:
        return DenseMatrix(self.field, self.entries.T)

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        if other.field != self.field:
            raise CAError(CAErrorCode.FIELD_MISMATCH, f"{self.field} vs {other.field}")
        if self.cols != other.rows:
            raise CAError(
                CAErrorCode.DIMENSION_MISMATCH,
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}",
            )
        return DenseMatrix(self.field, matmul_mod(self.entries, other.entries, self.field.p))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.field == other.field and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None  # type: ignore[assignment]


def as_dense(mat: DenseMatrix | RuleMatrix) -> DenseMatrix:
    if isinstance(mat, DenseMatrix):
        return mat
    return DenseMatrix(mat.field, mat.dense_view)


@dataclass(frozen=True)
class EliminationResult:
    rank: int
    det: FieldElement | None
    pivots: tuple[int, ...]
    nullspace_basis: tuple[IntArray, ...]
    rref: DenseMatrix

    @property
    def nullity(self) -> int:
        return len(self.nullspace_basis)


def _row_reduce(
    work: IntArray, p: int, pivot_cols: int | None = None
) -> tuple[IntArray, list[int], int]:
    """Reduce ``work`` in place to reduced row echelon form.

    Pivots are searched only among the first ``pivot_cols`` columns; the
    pivot in each column is the first nonzero entry at or below the
    current row. Returns the array, pivot columns and the product of the
    pivots times the sign of the row permutation (the determinant for
    square input of full rank).
    """
    rows, cols = work.shape
    limit = cols if pivot_cols is None else pivot_cols
    pivots: list[int] = []
    det = 1
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
            det = -det
        pv = int(work[r, c])
        det = det * pv % p
        work[r] = work[r] * inv_int(pv, p) % p
        others = np.flatnonzero(work[:, c])
        others = others[others != r]
        if others.size:
            work[others] = (work[others] - np.outer(work[others, c], work[r]) % p) % p
        pivots.append(c)
        r += 1
    return work, pivots, det % p


def eliminate(mat: DenseMatrix | RuleMatrix) -> EliminationResult:
    """Gauss-Jordan elimination with deterministic first-nonzero pivoting."""
    dense = as_dense(mat)
    p = dense.field.p
    work, pivots, det = _row_reduce(dense.entries.astype(np.int64, copy=True), p)
    rank = len(pivots)
    pivot_set = set(pivots)
    basis = []
    for free in range(dense.cols):
        if free in pivot_set:
            continue
        v = np.zeros(dense.cols, dtype=np.int64)
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -work[row, free] % p
        basis.append(v)
    det_el = None
    if dense.is_square:
        det_el = FieldElement(det if rank == dense.rows else 0, dense.field)
    return EliminationResult(rank, det_el, tuple(pivots), tuple(basis), DenseMatrix(dense.field, work))


def rank(mat: DenseMatrix | RuleMatrix) -> int:
    return eliminate(mat).rank


def invert(mat: DenseMatrix | RuleMatrix) -> DenseMatrix:
    """Exact inverse over Z_p.

    Raises:
        CAError: ``Singular`` when the matrix is not invertible;
            ``DimensionMismatch`` when it is not square.
    """
    dense = as_dense(mat)
    if not dense.is_square:
        raise CAError(
            CAErrorCode.DIMENSION_MISMATCH,
            f"cannot invert a {dense.rows}x{dense.cols} matrix",
        )
    n = dense.rows
    aug = np.hstack([dense.entries, np.eye(n, dtype=np.int64)])
    work, pivots, _ = _row_reduce(aug, dense.field.p, pivot_cols=n)
    if len(pivots) < n:
        raise CAError(
            CAErrorCode.SINGULAR,
            f"matrix of rank {len(pivots)} < {n} has no inverse",
            {"rank": len(pivots), "size": n},
        )
    return DenseMatrix(dense.field, work[:, n:])


def solve(mat: DenseMatrix | RuleMatrix, rhs: IntArray) -> IntArray | None:
    """One solution x of mat·x = rhs, or None when rhs is outside the column space."""
    dense = as_dense(mat)
    p = dense.field.p
    b = reduce(rhs, p).reshape(-1, 1)
    work, pivots, _ = _row_reduce(np.hstack([dense.entries, b]), p, pivot_cols=dense.cols)
    r = len(pivots)
    if work[r:, -1].any():
        return None
    x = np.zeros(dense.cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = work[row, -1]
    return x


def column_space_complement(mat: DenseMatrix | RuleMatrix) -> list[int]:
    """Indices k whose unit vectors e_k extend a basis of the column space to the whole space."""
    dense = as_dense(mat)
    aug = np.hstack([dense.entries, np.eye(dense.rows, dtype=np.int64)])
    _, pivots, _ = _row_reduce(aug, dense.field.p)
    return [pc - dense.cols for pc in pivots if pc >= dense.cols]


@dataclass(frozen=True)
class BlockEliminationTrace:
    """The blocks P₁, …, P_m produced by the block row elimination.

    ``orientation`` is ``"lower"`` for a constant superdiagonal and
    ``"upper"`` for a constant subdiagonal; in the upper case the trace is
    that of the block transpose, so ``X`` and every P_k are transposed.
    """

    P_sequence: tuple[IntArray, ...]
    X: IntArray
    final_rank: int
    pm_rank: int
    orientation: str = "lower"


def _check_lower_shape(T: RuleMatrix) -> IntArray:
    m = T.dims.m
    X = T.block(1, 2)
    for r, c in T.nonzero_blocks():
        if abs(r - c) > 1:
            raise CAError(
                CAErrorCode.SHAPE_MISMATCH,
                f"nonzero block at ({r}, {c}) outside the block tridiagonal",
            )
    for k in range(2, m):
        if not np.array_equal(T.block(k, k + 1), X):
            raise CAError(
                CAErrorCode.SHAPE_MISMATCH,
                f"superdiagonal block ({k}, {k + 1}) differs from ({1}, {2})",
            )
    return X


def block_rank_lower(T: RuleMatrix) -> BlockEliminationTrace:
    """Rank of T through block row elimination against a constant superdiagonal X.

    Numbering the block rows from the bottom, the last block row reads
    ``[… B₁ A₁]`` and the one above it ``[… B₂ A₂ X]``. Eliminating the
    columns right to left with rows that carry X gives

        P₁ = A₁,  Q₁ = B₁,
        P_{k+1} = Q_k - P_k X⁻¹ A_{k+1},   Q_{k+1} = -P_k X⁻¹ B_{k+1},

    and rank(T) = (m-1)n + rank(P_m).

    Raises:
        CAError: ``ShapeMismatch`` when T is not block tridiagonal with a
            constant superdiagonal; ``SingularX`` when X is singular.
    """
    p = T.p
    m, n = T.dims.m, T.dims.n
    X = _check_lower_shape(T)
    try:
        x_inv = invert(DenseMatrix(T.field, X)).entries
    except CAError as e:
        raise CAError(
            CAErrorCode.SINGULAR_X,
            "superdiagonal block X is singular",
            e.details,
        ) from e

    def diag(j: int) -> IntArray:
        return T.block(m + 1 - j, m + 1 - j)

    def sub(j: int) -> IntArray:
        return T.block(m + 1 - j, m - j)

    P = diag(1)
    Q = sub(1)
    sequence = [P]
    for k in range(1, m):
        W = matmul_mod(P, x_inv, p)
        P_next = (Q - matmul_mod(W, diag(k + 1), p)) % p
        if k + 1 <= m - 1:
            Q = -matmul_mod(W, sub(k + 1), p) % p
        P = P_next
        sequence.append(P)
    pm_rank = rank(DenseMatrix(T.field, P))
    return BlockEliminationTrace(tuple(sequence), X, (m - 1) * n + pm_rank, pm_rank, "lower")


def block_rank_upper(T: RuleMatrix) -> BlockEliminationTrace:
    """As :func:`block_rank_lower`, for a constant subdiagonal, via the block transpose."""
    trace = block_rank_lower(T.transpose())
    return BlockEliminationTrace(
        trace.P_sequence, trace.X, trace.final_rank, trace.pm_rank, "upper"
    )


def a1_minus_identity(field: FieldSpec, n: int, d: int, h: int) -> DenseMatrix:
    """A₁ - I for the φ rule: tridiagonal (h, -1, d) with h + d at (n, n-1)."""
    m = -np.eye(n, dtype=np.int64) + d * np.eye(n, k=1, dtype=np.int64)
    m += h * np.eye(n, k=-1, dtype=np.int64)
    m[n - 1, n - 2] += d
    return DenseMatrix(field, m)


def b1_matrix(field: FieldSpec, n: int, e: int, f: int, g: int) -> DenseMatrix:
    """B₁ for the φ rule: tridiagonal (g, f, e) with g + e at (n, n-1)."""
    m = f * np.eye(n, dtype=np.int64) + e * np.eye(n, k=1, dtype=np.int64)
    m += g * np.eye(n, k=-1, dtype=np.int64)
    m[n - 1, n - 2] += e
    return DenseMatrix(field, m)


def delta(field: FieldSpec, k: int, d: int, h: int) -> FieldElement:
    """Δ_k: determinant of the k×k tridiagonal Toeplitz matrix (h, -1, d).

    Raises:
        CAError: ``EvenCharacteristic`` for p = 2, where 2 has no inverse.
    """
    p = field.p
    if p == 2:
        raise CAError(CAErrorCode.EVEN_CHARACTERISTIC, "Δ_k divides by 2^k, undefined over Z_2")
    disc = (1 - 4 * h * d) % p
    total = 0
    for i in range(k // 2 + 1):
        sign = -1 if (k - 2 * i) % 2 else 1
        total += math.comb(k + 1, 2 * i + 1) % p * sign * pow(disc, i, p)
    half = pow(2, -1, p)
    return FieldElement(total % p * pow(half, k, p) % p, field)


def det_A1_minus_I_closed(field: FieldSpec, n: int, d: int, h: int) -> FieldElement:
    """det(A₁ - I) by case analysis on d and h.

    - d = 0: (-1)^n
    - h = 0: (-1)^(n-1) (d² - 1)
    - d + h = -1: -h^(n-1)
    - otherwise: -Δ_{n-1} - d(h + d) Δ_{n-2}
    """
    p = field.p
    d %= p
    h %= p
    if d == 0:
        return field.element((-1) ** n)
    if h == 0:
        return field.element((-1) ** (n - 1) * (d * d - 1))
    if (d + h) % p == p - 1:
        return field.element(-pow(h, n - 1, p))
    return -delta(field, n - 1, d, h) - field.element(d * (h + d)) * delta(field, n - 2, d, h)


def det_A1_minus_I(field: FieldSpec, n: int, d: int, h: int) -> FieldElement:
    """Closed form when available, dense determinant otherwise."""
    try:
        return det_A1_minus_I_closed(field, n, d, h)
    except CAError as e:
        if e.code is not CAErrorCode.EVEN_CHARACTERISTIC:
            raise
        debugprint.debug(f"det(A1-I): {e}; falling back to dense elimination")
        det = eliminate(a1_minus_identity(field, n, d, h)).det
        assert det is not None
        return det


def det_B1_closed(field: FieldSpec, n: int, e: int, f: int, g: int) -> FieldElement:
    """det(B₁) in the cases with a closed form.

    - e = 0: fⁿ
    - g = 0: f^(n-2) (f² - e²)
    - f = e + g: f·g^(n-1)

    Raises:
        CAError: ``CaseNotCovered`` otherwise.
    """
    p = field.p
    e %= p
    f %= p
    g %= p
    if e == 0:
        return field.element(pow(f, n, p))
    if g == 0:
        return field.element(pow(f, n - 2, p) * (f * f - e * e))
    if f == (e + g) % p:
        return field.element(f * pow(g, n - 1, p))
    raise CAError(
        CAErrorCode.CASE_NOT_COVERED,
        "det(B1) has no closed form for these coefficients",
        {"e": e, "f": f, "g": g},
    )
