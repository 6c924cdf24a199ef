"""Global dynamics of a linear automaton read off its rule matrix."""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np

from . import debugprint
from .boundary import BoundarySpec
from .errors import CAError
from .errors import CAErrorCode
from .gfp import IntArray
from .gfp import matmul_mod
from .grid import Configuration
from .grid import LatticeDims
from .grid import StateVector
from .grid import flatten
from .grid import unflatten
from .linalg import BlockEliminationTrace
from .linalg import DenseMatrix
from .linalg import block_rank_lower
from .linalg import block_rank_upper
from .linalg import column_space_complement
from .linalg import det_A1_minus_I
from .linalg import det_B1_closed
from .linalg import eliminate
from .linalg import invert
from .rulematrix import RuleMatrix
from .rulematrix import build_theorem_matrix
from .stepper import RuleCoefficients
from .stepper import step

# Witnesses are only extracted while p^(mn) stays below this.
WITNESS_LIMIT = 2**24

# Distinct states remembered by the orbit hash set before switching to Floyd.
ORBIT_MEMORY_CAP = 1 << 16


class RankMethod(Enum):
    BLOCK = "block"
    DENSE = "dense"


@dataclass(frozen=True)
class ReversibilityReport:
    """Rank of a rule matrix and, when it is full, access to the inverse.

    The inverse is computed on first access to :attr:`inverse` unless
    :func:`reversibility` was asked to compute it up front.
    """

    rank: int
    size: int
    method: RankMethod
    matrix: RuleMatrix = dc_field(repr=False, compare=False)
    trace: BlockEliminationTrace | None = None

    @property
    def full_rank(self) -> bool:
        return self.rank == self.size

    @property
    def inverse_available(self) -> bool:
        return self.full_rank

    @cached_property
    def inverse(self) -> DenseMatrix | None:
        return invert(self.matrix) if self.full_rank else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "rank": self.rank,
            "full_rank": self.full_rank,
            "method": self.method.value,
            "orientation": self.trace.orientation if self.trace else None,
        }


def _phi_x_invertible(T: RuleMatrix, coeffs: RuleCoefficients | None) -> bool | None:
    """Decide invertibility of X = B₁ from the closed form, when it applies."""
    if coeffs is None or T.spec_name != "φ":
        return None
    try:
        det = det_B1_closed(T.field, T.dims.n, coeffs.e, coeffs.f, coeffs.g)
    except CAError as e:
        debugprint.debug(f"reversibility: {e}")
        return None
    return bool(det)


def _block_rank(T: RuleMatrix, coeffs: RuleCoefficients | None) -> BlockEliminationTrace | None:
    if _phi_x_invertible(T, coeffs) is False:
        debugprint.debug("reversibility: det(B1) = 0, block elimination declined")
    else:
        try:
            return block_rank_lower(T)
        except CAError as e:
            debugprint.debug(f"reversibility: lower block form declined: {e}")
    try:
        return block_rank_upper(T)
    except CAError as e:
        debugprint.debug(f"reversibility: upper block form declined: {e}")
    return None


def reversibility(
    T: RuleMatrix,
    coeffs: RuleCoefficients | None = None,
    compute_inverse: bool = True,
) -> ReversibilityReport:
    """Rank of T, by block elimination when its shape allows and densely otherwise.

    Passing ``coeffs`` for a φ matrix lets the closed-form det(B₁) decide
    up front whether the superdiagonal block is invertible.
    """
    size = T.dims.size
    trace = _block_rank(T, coeffs)
    if trace is not None:
        rank, method = trace.final_rank, RankMethod.BLOCK
    else:
        rank, method = eliminate(T).rank, RankMethod.DENSE
    debugprint.debug(f"reversibility: {T.spec_name} rank {rank}/{size} via {method.value}")
    report = ReversibilityReport(rank, size, method, T, trace)
    if compute_inverse:
        _ = report.inverse
    return report


def step_backward(c: Configuration, report: ReversibilityReport) -> Configuration:
    """The unique predecessor of ``c``.

    Raises:
        CAError: ``NotReversible`` when the report carries no inverse.
    """
    inverse = report.inverse
    if inverse is None:
        raise CAError(
            CAErrorCode.NOT_REVERSIBLE,
            f"rule matrix has rank {report.rank} < {report.size}",
            {"rank": report.rank, "size": report.size},
        )
    if inverse.field != c.field:
        raise CAError(CAErrorCode.FIELD_MISMATCH, f"{inverse.field} vs {c.field}")
    entries = matmul_mod(inverse.entries, flatten(c).entries, c.field.p)
    return unflatten(StateVector(c.field, entries), c.dims)


@dataclass(frozen=True)
class FixedPointSet:
    dimension: int
    basis: tuple[IntArray, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "basis": [[int(x) for x in v] for v in self.basis],
        }


def fixed_points(T: RuleMatrix) -> FixedPointSet:
    """Nullspace of T - I."""
    result = eliminate(T.minus_identity())
    return FixedPointSet(result.nullity, result.nullspace_basis)


def fixed_point_dimension_vn(coeffs: RuleCoefficients, dims: LatticeDims) -> int:
    """Dimension of Fix(T) for a von Neumann rule under the φ boundary.

    With f = 0 the matrix T - I is block lower triangular with every
    diagonal block equal to A₁ - I, so det(T - I) = det(A₁ - I)^m and a
    nonzero closed-form determinant settles the answer without building T.
    Every other case goes through the nullspace.
    """
    if not coeffs.is_von_neumann:
        raise CAError(CAErrorCode.INVALID_CONFIG, "rule has nonzero diagonal weights")
    if coeffs.f == 0:
        det = det_A1_minus_I(coeffs.field, dims.n, coeffs.d, coeffs.h)
        if det:
            return 0
        debugprint.debug("fixed points: det(A1-I) = 0, computing the nullspace")
    return fixed_points(build_theorem_matrix("φ", dims, coeffs)).dimension


@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    index: int | None = None

    def __bool__(self) -> bool:
        return self.nilpotent


def is_nilpotent(T: RuleMatrix) -> NilpotencyReport:
    """Whether T^(mn) = 0, with the least k such that T^k = 0.

    Squares T until the power exponent reaches mn, then scans linearly
    upward from the last nonzero power of two.
    """
    p = T.p
    size = T.dims.size
    base = T.dense_view
    if not base.any():
        return NilpotencyReport(True, 1)
    prev = base
    exponent = 1
    while exponent < size:
        squared = matmul_mod(prev, prev, p)
        if not squared.any():
            break
        prev = squared
        exponent *= 2
    else:
        return NilpotencyReport(False)
    # prev = T^exponent is nonzero and T^(2·exponent) = 0.
    current, k = prev, exponent
    while current.any():
        current = matmul_mod(current, base, p)
        k += 1
    return NilpotencyReport(True, k)


@dataclass(frozen=True)
class GoeReport:
    """Garden-of-Eden census: configurations with no predecessor."""

    image_size_log_p: int
    goe_count: int
    total: int
    witness: Configuration | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "image_size_log_p": self.image_size_log_p,
            "goe_count": str(self.goe_count),
            "witness": None if self.witness is None else self.witness.cells.tolist(),
        }


def goe_census(T: RuleMatrix, rank: int | None = None) -> GoeReport:
    """Count Gardens of Eden as p^(mn) - p^rank.

    A witness outside the image is produced by extending a column-space
    basis with unit vectors, provided p^(mn) does not exceed
    :data:`WITNESS_LIMIT`.
    """
    p = T.p
    size = T.dims.size
    if rank is None:
        rank = eliminate(T).rank
    total = p**size
    count = total - p**rank
    witness = None
    missing = column_space_complement(T) if count and total <= WITNESS_LIMIT else []
    if missing:
        vec = np.zeros(size, dtype=np.int64)
        vec[missing[0]] = 1
        witness = unflatten(StateVector(T.field, vec), T.dims)
    return GoeReport(rank, count, total, witness)


@dataclass(frozen=True)
class OrbitReport:
    """Trajectory of a configuration up to its first repeated state.

    ``transient`` is the number of steps before the cycle is entered and
    ``cycle_length`` the period. When the state space was not exhausted
    within ``max_steps`` both are None and ``undetermined`` is set.
    """

    trajectory: tuple[Configuration, ...] = dc_field(repr=False)
    transient: int | None
    cycle_length: int | None
    steps_taken: int

    @property
    def undetermined(self) -> bool:
        return self.cycle_length is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "transient": self.transient,
            "cycle_length": self.cycle_length,
            "undetermined": self.undetermined,
            "steps_taken": self.steps_taken,
        }


def _floyd(
    c: Configuration,
    coeffs: RuleCoefficients,
    spec: BoundarySpec,
    budget: int,
) -> tuple[int | None, int | None, int]:
    def f(x: Configuration) -> Configuration:
        return step(x, coeffs, spec)

    steps = 0
    tortoise, hare = f(c), f(f(c))
    while tortoise != hare:
        if steps >= budget:
            return None, None, steps
        tortoise, hare = f(tortoise), f(f(hare))
        steps += 1
    mu = 0
    tortoise = c
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    lam = 1
    hare = f(tortoise)
    while tortoise != hare:
        hare = f(hare)
        lam += 1
    return mu, lam, steps + mu + lam


def orbit(
    c: Configuration,
    coeffs: RuleCoefficients,
    spec: BoundarySpec,
    max_steps: int,
    memory_cap: int = ORBIT_MEMORY_CAP,
) -> OrbitReport:
    """Iterate ``step`` from ``c`` until a state repeats or ``max_steps`` runs out."""
    if max_steps < 1:
        raise CAError(CAErrorCode.OUT_OF_RANGE, f"max_steps {max_steps} must be at least 1")
    seen: dict[bytes, int] = {}
    states: list[Configuration] = []
    state = c
    for t in range(max_steps + 1):
        key = state.key()
        first = seen.get(key)
        if first is not None:
            return OrbitReport(tuple(states), first, t - first, t)
        if len(seen) >= memory_cap:
            debugprint.debug(f"orbit: {len(seen)} states remembered, switching to Floyd")
            mu, lam, used = _floyd(c, coeffs, spec, max_steps)
            return OrbitReport(tuple(states), mu, lam, used)
        seen[key] = t
        states.append(state)
        if t < max_steps:
            state = step(state, coeffs, spec)
    debugprint.debug(f"orbit: no repeat within {max_steps} steps")
    return OrbitReport(tuple(states), None, None, max_steps)
