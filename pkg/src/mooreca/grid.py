"""Configurations on an m×n lattice and the row-major flattening map.

Public coordinates are 1-indexed ``(i, j)`` with ``1 <= i <= m`` and
``1 <= j <= n``; cell ``(i, j)`` lives at flat index ``(i-1)*n + (j-1)``.
"""

from __future__ import annotations

from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldElement
from .gfp import FieldSpec
from .gfp import IntArray
from .gfp import reduce

MIN_SIDE = 3


@dataclass(frozen=True)
class LatticeDims:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < MIN_SIDE or self.n < MIN_SIDE:
            raise CAError(
                CAErrorCode.TOO_SMALL,
                f"lattice {self.m}x{self.n} is smaller than {MIN_SIDE}x{MIN_SIDE}",
                {"m": self.m, "n": self.n},
            )

    @property
    def size(self) -> int:
        return self.m * self.n

    def contains(self, i: int, j: int) -> bool:
        return 1 <= i <= self.m and 1 <= j <= self.n

    def index(self, i: int, j: int) -> int:
        """Flat storage index of cell ``(i, j)``."""
        if not self.contains(i, j):
            raise CAError(
                CAErrorCode.OUT_OF_RANGE,
                f"cell ({i}, {j}) outside {self.m}x{self.n} lattice",
            )
        return (i - 1) * self.n + (j - 1)

    def cell(self, index: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        i, j = divmod(index, self.n)
        return i + 1, j + 1

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


def _frozen(arr: IntArray) -> IntArray:
    arr = np.array(arr, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Configuration:
    """The state matrix of the lattice at one time step."""

    field: FieldSpec
    dims: LatticeDims
    cells: IntArray

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells)
        if cells.shape != (self.dims.m, self.dims.n):
            raise CAError(
                CAErrorCode.DIMENSION_MISMATCH,
                f"cell array of shape {cells.shape} does not match {self.dims}",
            )
        if cells.size and (cells.min() < 0 or cells.max() >= self.field.p):
            raise CAError(
                CAErrorCode.OUT_OF_RANGE,
                f"cell values must lie in [0, {self.field.p})",
            )
        object.__setattr__(self, "cells", _frozen(cells))

    @classmethod
    def zeros(cls, field: FieldSpec, dims: LatticeDims) -> Configuration:
        return cls(field, dims, np.zeros((dims.m, dims.n), dtype=np.int64))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]]) -> Configuration:
        if not rows or len({len(r) for r in rows}) != 1:
            raise CAError(CAErrorCode.DIMENSION_MISMATCH, "rows must be non-empty and equal length")
        arr = np.array(rows, dtype=np.int64)
        return cls(field, LatticeDims(arr.shape[0], arr.shape[1]), arr)

    @classmethod
    def indicator(cls, field: FieldSpec, dims: LatticeDims, i: int, j: int) -> Configuration:
        """The configuration e_{i,j}: a single 1 at cell ``(i, j)``."""
        arr = np.zeros((dims.m, dims.n), dtype=np.int64)
        arr[i - 1, j - 1] = 1
        return cls(field, dims, arr)

    @classmethod
    def random(
        cls, field: FieldSpec, dims: LatticeDims, rng: np.random.Generator
    ) -> Configuration:
        return cls(field, dims, rng.integers(0, field.p, size=(dims.m, dims.n), dtype=np.int64))

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        self.dims.index(i, j)
        return FieldElement(int(self.cells[i - 1, j - 1]), self.field)

    def _check_same(self, other: Configuration) -> None:
        if other.field != self.field:
            raise CAError(CAErrorCode.FIELD_MISMATCH, f"{self.field} vs {other.field}")
        if other.dims != self.dims:
            raise CAError(CAErrorCode.DIMENSION_MISMATCH, f"{self.dims} vs {other.dims}")

    def __add__(self, other: Configuration) -> Configuration:
        self._check_same(other)
        return Configuration(self.field, self.dims, (self.cells + other.cells) % self.field.p)

    def scale(self, k: int) -> Configuration:
        k %= self.field.p
        return Configuration(self.field, self.dims, self.cells * k % self.field.p)

    def is_zero(self) -> bool:
        return not self.cells.any()

    def key(self) -> bytes:
        """Hashable fingerprint, used for cycle detection."""
        return self.cells.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.field == other.field
            and self.dims == other.dims
            and bool(np.array_equal(self.cells, other.cells))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.dims, self.key()))


@dataclass(frozen=True, eq=False)
class StateVector:
    """A flattened configuration, as a column vector of length m·n."""

    field: FieldSpec
    entries: IntArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(reduce(self.entries, self.field.p).ravel()))

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.field == other.field and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.field, self.entries.tobytes()))


def flatten(c: Configuration) -> StateVector:
    return StateVector(c.field, c.cells.reshape(-1))


def unflatten(v: StateVector, dims: LatticeDims) -> Configuration:
    if len(v) != dims.size:
        raise CAError(
            CAErrorCode.DIMENSION_MISMATCH,
            f"vector of length {len(v)} cannot fill a {dims} lattice",
            {"length": len(v), "m": dims.m, "n": dims.n},
        )
    return Configuration(v.field, dims, v.entries.reshape(dims.m, dims.n))


def format_grid(c: Configuration) -> str:
    """Render ``c`` in the grid text format: a ``p m n`` header line, then rows."""
    lines = [f"{c.field.p} {c.dims.m} {c.dims.n}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in c.cells)
    return "\n".join(lines) + "\n"


def parse_grid(text: str | Iterable[str]) -> Configuration:
    """Parse the grid text format produced by :func:`format_grid`."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    rows = [line.split() for line in lines if line.strip()]
    if not rows:
        raise CAError(CAErrorCode.INVALID_FORMAT, "empty grid file")
    try:
        header = [int(tok) for tok in rows[0]]
        body = [[int(tok) for tok in row] for row in rows[1:]]
    except ValueError as e:
        raise CAError(CAErrorCode.INVALID_FORMAT, f"non-integer token in grid: {e}") from e
    if len(header) != 3:
        raise CAError(CAErrorCode.INVALID_FORMAT, "grid header must be 'p m n'")
    p, m, n = header
    fld = FieldSpec(p)
    dims = LatticeDims(m, n)
    if len(body) != m or any(len(row) != n for row in body):
        raise CAError(
            CAErrorCode.DIMENSION_MISMATCH,
            f"grid body does not have {m} rows of {n} values",
        )
    return Configuration(fld, dims, np.array(body, dtype=np.int64))
