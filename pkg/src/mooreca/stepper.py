"""Direct evolution of configurations under the linear Moore rule.

The new state of cell ``(i, j)`` is

    a·x[i-1,j-1] + b·x[i-1,j] + c·x[i-1,j+1] + d·x[i,j+1]
  + e·x[i+1,j+1] + f·x[i+1,j] + g·x[i+1,j-1] + h·x[i,j-1]   (mod p)

with neighbours outside the lattice fetched through the boundary resolver.
This module is the oracle every rule matrix is checked against.
"""

from __future__ import annotations

from collections.abc import Iterator
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boundary import BoundarySpec
from .boundary import resolve
from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldElement
from .gfp import FieldSpec
from .gfp import IntArray
from .grid import Configuration
from .grid import LatticeDims

COEFFICIENT_NAMES = ("a", "b", "c", "d", "e", "f", "g", "h")

# Row/column offset of the neighbour each coefficient weighs.
NEIGHBOR_OFFSETS: Mapping[str, tuple[int, int]] = {
    "a": (-1, -1),
    "b": (-1, 0),
    "c": (-1, 1),
    "d": (0, 1),
    "e": (1, 1),
    "f": (1, 0),
    "g": (1, -1),
    "h": (0, -1),
}


@dataclass(frozen=True)
class RuleCoefficients:
    """The eight weights of the local rule.

    Zero weights are allowed; setting ``a = c = e = g = 0`` gives the
    von Neumann rule.
    """

    field: FieldSpec
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    e: int = 0
    f: int = 0
    g: int = 0
    h: int = 0

    def __post_init__(self) -> None:
        for name in COEFFICIENT_NAMES:
            self.field.check(getattr(self, name), f"coefficient {name}")

    @classmethod
    def from_sequence(cls, field: FieldSpec, values: Sequence[int]) -> RuleCoefficients:
        if len(values) != len(COEFFICIENT_NAMES):
            raise CAError(
                CAErrorCode.INVALID_CONFIG,
                f"expected 8 coefficients a..h, got {len(values)}",
            )
        return cls(field, *(int(v) for v in values))

    @classmethod
    def uniform(cls, field: FieldSpec, value: int) -> RuleCoefficients:
        return cls.from_sequence(field, [value] * 8)

    @classmethod
    def random(
        cls, field: FieldSpec, rng: np.random.Generator, von_neumann: bool = False
    ) -> RuleCoefficients:
        values = [int(v) for v in rng.integers(0, field.p, size=8)]
        coeffs = cls.from_sequence(field, values)
        return coeffs.restrict_von_neumann() if von_neumann else coeffs

    def values(self) -> tuple[int, ...]:
        return tuple(getattr(self, name) for name in COEFFICIENT_NAMES)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(zip(COEFFICIENT_NAMES, self.values(), strict=True))

    def element(self, name: str) -> FieldElement:
        return FieldElement(getattr(self, name), self.field)

    @property
    def is_von_neumann(self) -> bool:
        return self.a == self.c == self.e == self.g == 0

    def restrict_von_neumann(self) -> RuleCoefficients:
        return RuleCoefficients(self.field, 0, self.b, 0, self.d, 0, self.f, 0, self.h)

    def to_dict(self) -> dict[str, int]:
        return dict(self)


@lru_cache(maxsize=128)
def _frame_sources(
    spec: BoundarySpec, dims: LatticeDims
) -> tuple[tuple[int, int, int, int], ...]:
    """(padded_row, padded_col, source_row, source_col) for every non-zero frame cell."""
    out = []
    for i in range(dims.m + 2):
        for j in range(dims.n + 2):
            if dims.contains(i, j):
                continue
            res = resolve(spec, dims, i, j)
            if res.source is not None:
                out.append((i, j, res.source[0], res.source[1]))
    return tuple(out)


def padded(c: Configuration, spec: BoundarySpec) -> IntArray:
    """The configuration surrounded by its resolved one-cell frame."""
    m, n = c.dims.m, c.dims.n
    grid = np.zeros((m + 2, n + 2), dtype=np.int64)
    grid[1 : m + 1, 1 : n + 1] = c.cells
    for pi, pj, si, sj in _frame_sources(spec, c.dims):
        grid[pi, pj] = c.cells[si - 1, sj - 1]
    return grid


def step(c: Configuration, coeffs: RuleCoefficients, spec: BoundarySpec) -> Configuration:
    """Advance ``c`` one synchronous time step."""
    if coeffs.field != c.field:
        raise CAError(
            CAErrorCode.FIELD_MISMATCH,
            f"coefficients over {coeffs.field}, configuration over {c.field}",
        )
    p = c.field.p
    m, n = c.dims.m, c.dims.n
    old = padded(c, spec)
    new = np.zeros((m, n), dtype=np.int64)
    for name, weight in coeffs:
        if weight == 0:
            continue
        di, dj = NEIGHBOR_OFFSETS[name]
        window = old[1 + di : 1 + di + m, 1 + dj : 1 + dj + n]
        new = (new + weight * window % p) % p
    return Configuration(c.field, c.dims, new)


def evolve(
    c: Configuration, coeffs: RuleCoefficients, spec: BoundarySpec, t: int
) -> Configuration:
    if t < 0:
        raise CAError(CAErrorCode.OUT_OF_RANGE, f"step count {t} is negative")
    for _ in range(t):
        c = step(c, coeffs, spec)
    return c


def trajectory(
    c: Configuration, coeffs: RuleCoefficients, spec: BoundarySpec
) -> Iterator[Configuration]:
    """Yield ``c``, ``step(c)``, ``step(step(c))``, ... without end."""
    while True:
        yield c
        c = step(c, coeffs, spec)
