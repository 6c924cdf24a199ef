"""Rule matrices: the mn×mn matrices T with flatten(step(c)) = T·flatten(c).

A :class:`RuleMatrix` keeps its m×m grid of n×n blocks alongside the dense
view, so the structured rank algorithms in :mod:`mooreca.linalg` can look
at block positions without re-slicing.

Two builders are provided. :func:`build_from_resolver` reads each column
off the direct stepper and is authoritative for any boundary spec.
:func:`build_theorem_matrix` assembles the closed-form block layouts of
the thirteen named specs from the primitives

    A = dP + hQ,   B = fI + eP + gQ,   C = bI + cP + aQ

(P the superdiagonal shift, Q the subdiagonal shift) plus single-entry
corrections ε(i, j).
"""

from __future__ import annotations

from collections.abc import Callable
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import debugprint
from .boundary import BoundarySpec
from .boundary import canonical_name
from .boundary import named_spec
from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldSpec
from .gfp import IntArray
from .gfp import matmul_mod
from .gfp import reduce
from .grid import Configuration
from .grid import LatticeDims
from .grid import StateVector
from .grid import flatten
from .stepper import RuleCoefficients
from .stepper import step

BlockKey = tuple[int, int]


@dataclass(frozen=True)
class BlockPrimitives:
    P: IntArray
    Q: IntArray
    I: IntArray  # noqa: E741
    A: IntArray
    B: IntArray
    C: IntArray


def block_primitives(n: int, coeffs: RuleCoefficients) -> BlockPrimitives:
    if n < 3:
        raise CAError(CAErrorCode.TOO_SMALL, f"block dimension {n} is below 3")
    k = coeffs
    p = k.field.p
    shift_up = np.eye(n, k=1, dtype=np.int64)
    shift_down = np.eye(n, k=-1, dtype=np.int64)
    ident = np.eye(n, dtype=np.int64)
    return BlockPrimitives(
        P=shift_up,
        Q=shift_down,
        I=ident,
        A=(k.d * shift_up + k.h * shift_down) % p,
        B=(k.f * ident + k.e * shift_up + k.g * shift_down) % p,
        C=(k.b * ident + k.c * shift_up + k.a * shift_down) % p,
    )


def unit(n: int, i: int, j: int) -> IntArray:
    """ε(i, j): the n×n matrix with a single 1 at 1-indexed ``(i, j)``."""
    out = np.zeros((n, n), dtype=np.int64)
    out[i - 1, j - 1] = 1
    return out


@dataclass(frozen=True, eq=False)
class RuleMatrix:
    """An mn×mn matrix over Z_p with its m×m block grid.

    ``blocks`` maps 1-indexed block coordinates to n×n arrays; absent
    positions are zero. ``labels`` optionally names blocks (``"A1"``,
    ``"D_np"``) for inspection.
    """

    field: FieldSpec
    dims: LatticeDims
    blocks: Mapping[BlockKey, IntArray]
    labels: Mapping[BlockKey, str]
    spec_name: str = "custom"
    builder: str = "derived"

    @classmethod
    def from_dense(
        cls,
        field: FieldSpec,
        dims: LatticeDims,
        dense: IntArray,
        spec_name: str = "custom",
        builder: str = "derived",
    ) -> RuleMatrix:
        size = dims.size
        dense = reduce(dense, field.p)
        if dense.shape != (size, size):
            raise CAError(
                CAErrorCode.DIMENSION_MISMATCH,
                f"dense matrix of shape {dense.shape} does not fit a {dims} lattice",
            )
        n = dims.n
        blocks: dict[BlockKey, IntArray] = {}
        for r in range(dims.m):
            for c in range(dims.m):
                blk = dense[r * n : (r + 1) * n, c * n : (c + 1) * n]
                if blk.any():
                    blocks[(r + 1, c + 1)] = blk.copy()
        return cls(field, dims, blocks, {}, spec_name, builder)

    @cached_property
    def dense_view(self) -> IntArray:
        n = self.dims.n
        out = np.zeros((self.dims.size, self.dims.size), dtype=np.int64)
        for (r, c), blk in self.blocks.items():
            out[(r - 1) * n : r * n, (c - 1) * n : c * n] = blk
        out.setflags(write=False)
        return out

    def dense(self) -> IntArray:
        return self.dense_view.copy()

    @property
    def p(self) -> int:
        return self.field.p

    def block(self, r: int, c: int) -> IntArray:
        blk = self.blocks.get((r, c))
        if blk is None:
            return np.zeros((self.dims.n, self.dims.n), dtype=np.int64)
        return blk

    def label(self, r: int, c: int) -> str:
        return self.labels.get((r, c), "O")

    def nonzero_blocks(self) -> set[BlockKey]:
        return {key for key, blk in self.blocks.items() if blk.any()}

    def corner_blocks(self) -> set[BlockKey]:
        """Nonzero blocks off the block tridiagonal."""
        return {(r, c) for r, c in self.nonzero_blocks() if abs(r - c) > 1}

    def is_block_sparse(self, max_corners: int = 1) -> bool:
        corners = self.corner_blocks()
        m = self.dims.m
        return corners <= {(1, m), (m, 1)} and len(corners) <= max_corners

    def apply(self, v: StateVector) -> StateVector:
        if v.field != self.field:
            raise CAError(CAErrorCode.FIELD_MISMATCH, f"{v.field} vs {self.field}")
        if len(v) != self.dims.size:
            raise CAError(
                CAErrorCode.DIMENSION_MISMATCH,
                f"vector of length {len(v)} against {self.dims.size}x{self.dims.size} matrix",
            )
        return StateVector(self.field, matmul_mod(self.dense_view, v.entries, self.p))

    def _derived(self, dense: IntArray, spec_name: str | None = None) -> RuleMatrix:
        return RuleMatrix.from_dense(
            self.field, self.dims, dense, spec_name or self.spec_name, "derived"
        )

    def matmul(self, other: RuleMatrix) -> RuleMatrix:
        if other.field != self.field or other.dims != self.dims:
            raise CAError(CAErrorCode.DIMENSION_MISMATCH, "rule matrices differ in field or size")
        return self._derived(matmul_mod(self.dense_view, other.dense_view, self.p))

    def power(self, k: int) -> RuleMatrix:
        if k < 0:
            raise CAError(CAErrorCode.OUT_OF_RANGE, f"negative power {k}")
        result = np.eye(self.dims.size, dtype=np.int64)
        base = self.dense_view
        while k:
            if k & 1:
                result = matmul_mod(result, base, self.p)
            k >>= 1
            if k:
                base = matmul_mod(base, base, self.p)
        return self._derived(result)

    def transpose(self) -> RuleMatrix:
        blocks = {(c, r): blk.T.copy() for (r, c), blk in self.blocks.items()}
        labels = {(c, r): f"{lbl}ᵀ" for (r, c), lbl in self.labels.items()}
        return RuleMatrix(self.field, self.dims, blocks, labels, self.spec_name, "derived")

    def minus_identity(self) -> RuleMatrix:
        return self._derived(self.dense_view - np.eye(self.dims.size, dtype=np.int64))

    def reversed(self) -> RuleMatrix:
        """The 180° rotation: reverse both the row and the column order."""
        return self._derived(self.dense_view[::-1, ::-1])

    def is_zero(self) -> bool:
        return not self.nonzero_blocks()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RuleMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.dims == other.dims
            and bool(np.array_equal(self.dense_view, other.dense_view))
        )

    __hash__ = None  # type: ignore[assignment]


def mismatches(left: RuleMatrix, right: RuleMatrix) -> list[tuple[int, int, int, int]]:
    """1-indexed ``(row, col, left_value, right_value)`` for every differing entry."""
    diff = np.argwhere(left.dense_view != right.dense_view)
    return [
        (int(r) + 1, int(c) + 1, int(left.dense_view[r, c]), int(right.dense_view[r, c]))
        for r, c in diff
    ]


def build_from_resolver(
    spec: BoundarySpec, dims: LatticeDims, coeffs: RuleCoefficients
) -> RuleMatrix:
    """Read T column by column: column (i-1)n+j is flatten(step(e_{i,j}))."""
    size = dims.size
    dense = np.zeros((size, size), dtype=np.int64)
    for i in range(1, dims.m + 1):
        for j in range(1, dims.n + 1):
            unit_cfg = Configuration.indicator(coeffs.field, dims, i, j)
            dense[:, dims.index(i, j)] = flatten(step(unit_cfg, coeffs, spec)).entries
    return RuleMatrix.from_dense(coeffs.field, dims, dense, spec.name, "resolver")


def rotate180_coeffs(coeffs: RuleCoefficients) -> RuleCoefficients:
    """Point-reflect the stencil: (a,b,c,d,e,f,g,h) -> (e,f,g,h,a,b,c,d)."""
    k = coeffs
    return RuleCoefficients(k.field, k.e, k.f, k.g, k.h, k.a, k.b, k.c, k.d)


class _Terms:
    """Closed-form block arithmetic for one lattice width and rule."""

    def __init__(self, n: int, coeffs: RuleCoefficients):
        self.n = n
        self.k = coeffs
        self.p = coeffs.field.p
        prims = block_primitives(n, coeffs)
        self.A = prims.A
        self.B = prims.B
        self.C = prims.C

    def eps(self, weight: int, i: int, j: int) -> IntArray:
        return weight % self.p * unit(self.n, i, j)

    def sum(self, *terms: IntArray) -> IntArray:
        total = np.zeros((self.n, self.n), dtype=np.int64)
        for term in terms:
            total = (total + term) % self.p
        return total


Labelled = tuple[str, IntArray]


@dataclass(frozen=True)
class _Layout:
    diagonal: Labelled
    upper: Labelled
    lower: Labelled
    extra: dict[BlockKey, Labelled]


def _layout_nb(t: _Terms, m: int) -> _Layout:
    return _Layout(("A", t.A), ("B", t.B), ("C", t.C), {})


def _layout_pb(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_p = t.sum(t.A, t.eps(k.d, n, 1), t.eps(k.h, 1, n))
    b_p = t.sum(t.B, t.eps(k.e, n, 1), t.eps(k.g, 1, n))
    c_p = t.sum(t.C, t.eps(k.c, n, 1), t.eps(k.a, 1, n))
    return _Layout(
        ("A_p", a_p), ("B_p", b_p), ("C_p", c_p), {(1, m): ("C_p", c_p), (m, 1): ("B_p", b_p)}
    )


def _layout_ab(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_a = t.sum(t.A, t.eps(k.h, 1, 1), t.eps(k.d, n, n))
    b_a = t.sum(t.B, t.eps(k.g, 1, 1), t.eps(k.e, n, n))
    c_a = t.sum(t.C, t.eps(k.a, 1, 1), t.eps(k.c, n, n))
    return _Layout(
        ("A_a", a_a),
        ("B_a", b_a),
        ("C_a", c_a),
        {(1, 1): ("A_a+C_a", t.sum(a_a, c_a)), (m, m): ("A_a+B_a", t.sum(a_a, b_a))},
    )


def _layout_rb(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_r = t.sum(t.A, t.eps(k.h, 1, 2), t.eps(k.d, n, n - 1))
    b_r = t.sum(t.B, t.eps(k.g, 1, 2), t.eps(k.e, n, n - 1))
    c_r = t.sum(t.C, t.eps(k.a, 1, 2), t.eps(k.c, n, n - 1))
    both = t.sum(b_r, c_r)
    return _Layout(
        ("A_r", a_r),
        ("B_r", b_r),
        ("C_r", c_r),
        {(1, 2): ("B_r+C_r", both), (m, m - 1): ("C_r+B_r", both)},
    )


def _layout_phi(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a1 = t.sum(t.A, t.eps(k.d, n, n - 1))
    b1 = t.sum(t.B, t.eps(k.e, n, n - 1))
    c1 = t.sum(t.C, t.eps(k.c, n, n - 1))
    d1 = t.sum(t.B, t.C, t.eps(k.c + k.e, n, n - 1), t.eps(k.g, 1, 2))
    return _Layout(("A1", a1), ("B1", b1), ("C1", c1), {(m, m - 1): ("D1", d1)})


def _layout_psi(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_np = t.sum(t.A, t.eps(k.d, n, 1))
    b_np = t.sum(t.B, t.eps(k.e, n, 1))
    c_np = t.sum(t.C, t.eps(k.c, n, 1))
    d_np = t.sum(t.B, t.eps(k.e, n, 1), t.eps(k.g, 1, n))
    return _Layout(("A_np", a_np), ("B_np", b_np), ("C_np", c_np), {(m, 1): ("D_np", d_np)})


def _layout_tau(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_na = t.sum(t.A, t.eps(k.d, n, n))
    b_na = t.sum(t.B, t.eps(k.e, n, n))
    c_na = t.sum(t.C, t.eps(k.c, n, n))
    d_na = t.sum(t.A, t.B, t.eps(k.g, 1, 1), t.eps(k.d + k.e, n, n))
    return _Layout(("A_na", a_na), ("B_na", b_na), ("C_na", c_na), {(m, m): ("D_na", d_na)})


def _layout_sigma(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_ra = t.sum(t.A, t.eps(k.h, 1, 2), t.eps(k.d, n, n))
    b_ra = t.sum(t.B, t.eps(k.g, 1, 2), t.eps(k.e, n, n))
    c_ra = t.sum(t.C, t.eps(k.a, 1, 2), t.eps(k.c, n, n))
    e_ra = t.sum(
        t.B, t.C, t.eps(k.a + k.g, 1, 2), t.eps(k.c, n, n - 1), t.eps(k.e, n, n)
    )
    d_ra = t.sum(
        t.A, t.B, t.eps(k.g, 1, 1), t.eps(k.h, 1, 2), t.eps(k.d + k.e, n, n)
    )
    return _Layout(
        ("A_ra", a_ra),
        ("B_ra", b_ra),
        ("C_ra", c_ra),
        {(1, 2): ("E_ra", e_ra), (m, m): ("D_ra", d_ra)},
    )


def _layout_lambda(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_rp = t.sum(t.A, t.eps(k.h, 1, 2), t.eps(k.d, n, 1))
    b_rp = t.sum(t.B, t.eps(k.g, 1, 2), t.eps(k.e, n, 1))
    c_rp = t.sum(t.C, t.eps(k.a, 1, 2), t.eps(k.c, n, 1))
    e_rp = t.sum(
        t.B, t.C, t.eps(k.a + k.g, 1, 2), t.eps(k.c, n, n - 1), t.eps(k.e, n, 1)
    )
    d_rp = t.sum(t.B, t.eps(k.e, n, 1), t.eps(k.g, 1, n))
    return _Layout(
        ("A_rp", a_rp),
        ("B_rp", b_rp),
        ("C_rp", c_rp),
        {(1, 2): ("E_rp", e_rp), (m, 1): ("D_rp", d_rp)},
    )


def _layout_xi(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a_pa = t.sum(t.A, t.eps(k.h, 1, n), t.eps(k.d, n, n))
    b_pa = t.sum(t.B, t.eps(k.g, 1, n), t.eps(k.e, n, n))
    c_pa = t.sum(t.C, t.eps(k.a, 1, n), t.eps(k.c, n, n))
    e_pa = t.sum(t.C, t.eps(k.a, 1, n), t.eps(k.c, n, 1))
    d_pa = t.sum(
        t.A, t.B, t.eps(k.g, 1, 1), t.eps(k.h, 1, n), t.eps(k.d + k.e, n, n)
    )
    return _Layout(
        ("A_pa", a_pa),
        ("B_pa", b_pa),
        ("C_pa", c_pa),
        {(1, m): ("E_pa", e_pa), (m, m): ("D_pa", d_pa)},
    )


def _layout_phi90(t: _Terms, m: int) -> _Layout:
    k = t.k
    a2 = t.sum(t.A, t.eps(k.h, 1, 2))
    b2 = t.sum(t.B, t.eps(k.g, 1, 2))
    c2 = t.sum(t.C, t.eps(k.a, 1, 2))
    f2 = t.sum(t.B, t.eps(k.a + k.g, 1, 2))
    d2 = t.sum(t.B, t.C, t.eps(k.a + k.g, 1, 2))
    return _Layout(
        ("A2", a2), ("B2", b2), ("C2", c2), {(1, 2): ("F2", f2), (m, m - 1): ("D2", d2)}
    )


def _layout_phi180(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a3 = t.sum(t.A, t.eps(k.h, 1, 2))
    b3 = t.sum(t.B, t.eps(k.g, 1, 2))
    c3 = t.sum(t.C, t.eps(k.a, 1, 2))
    d3 = t.sum(t.B, t.C, t.eps(k.a + k.g, 1, 2), t.eps(k.c, n, n - 1))
    return _Layout(("A3", a3), ("B3", b3), ("C3", c3), {(1, 2): ("D3", d3)})


def _layout_phi270(t: _Terms, m: int) -> _Layout:
    k, n = t.k, t.n
    a4 = t.sum(t.A, t.eps(k.d, n, n - 1))
    b4 = t.sum(t.B, t.eps(k.e, n, n - 1))
    c4 = t.sum(t.C, t.eps(k.c, n, n - 1))
    d4 = t.sum(t.B, t.C, t.eps(k.c + k.e, n, n - 1))
    f4 = t.sum(t.C, t.eps(k.c + k.e, n, n - 1))
    return _Layout(
        ("A4", a4), ("B4", b4), ("C4", c4), {(1, 2): ("D4", d4), (m, m - 1): ("F4", f4)}
    )


THEOREM_LAYOUTS: dict[str, Callable[[_Terms, int], _Layout]] = {
    "NB": _layout_nb,
    "PB": _layout_pb,
    "AB": _layout_ab,
    "RB": _layout_rb,
    "φ": _layout_phi,
    "ψ": _layout_psi,
    "τ": _layout_tau,
    "σ": _layout_sigma,
    "λ": _layout_lambda,
    "ξ": _layout_xi,
    "φ90": _layout_phi90,
    "φ180": _layout_phi180,
    "φ270": _layout_phi270,
}


def build_theorem_matrix(
    spec_name: str, dims: LatticeDims, coeffs: RuleCoefficients
) -> RuleMatrix:
    """Assemble the closed-form block layout of a named spec.

    The layout is block tridiagonal (diagonal, upper, lower families)
    with a handful of positions overridden by boundary-specific blocks.
    """
    name = canonical_name(spec_name)
    m = dims.m
    layout = THEOREM_LAYOUTS[name](_Terms(dims.n, coeffs), m)
    blocks: dict[BlockKey, IntArray] = {}
    labels: dict[BlockKey, str] = {}

    def put(key: BlockKey, entry: Labelled) -> None:
        labels[key], blocks[key] = entry

    for r in range(1, m + 1):
        put((r, r), layout.diagonal)
        if r < m:
            put((r, r + 1), layout.upper)
        if r > 1:
            put((r, r - 1), layout.lower)
    for key, entry in layout.extra.items():
        put(key, entry)
    return RuleMatrix(coeffs.field, dims, blocks, labels, name, "theorem")


def build_named(
    spec_name: str, dims: LatticeDims, coeffs: RuleCoefficients, builder: str = "resolver"
) -> RuleMatrix:
    """Build a named spec's matrix with the chosen builder."""
    if builder == "theorem":
        return build_theorem_matrix(spec_name, dims, coeffs)
    if builder == "resolver":
        return build_from_resolver(named_spec(spec_name), dims, coeffs)
    raise CAError(CAErrorCode.UNKNOWN_NAME, f"unknown builder {builder!r}")


def cross_check(
    spec_name: str, dims: LatticeDims, coeffs: RuleCoefficients
) -> list[tuple[int, int, int, int]]:
    """Entries where the closed form disagrees with the resolver-built matrix."""
    theorem = build_theorem_matrix(spec_name, dims, coeffs)
    resolver = build_from_resolver(named_spec(spec_name), dims, coeffs)
    diffs = mismatches(theorem, resolver)
    for row, col, got, want in diffs:
        debugprint.debug(
            f"{theorem.spec_name}: entry ({row}, {col}) theorem={got} resolver={want}"
        )
    return diffs
