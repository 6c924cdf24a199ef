"""Boundary conditions as a virtual-cell resolver.

A lattice of m×n cells is surrounded by a one-cell frame of virtual
cells. :func:`resolve` says which real cell (or the zero state) a frame
cell stands for. Side cells follow the condition of their side; each of
the four frame corners follows its own entry in the BoundarySpec corner table.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import CAError
from .errors import CAErrorCode
from .grid import LatticeDims


class BaseBoundary(Enum):
    """The four base conditions, with the Greek symbols used in the literature."""

    NULL = ("null", "η")
    PERIODIC = ("periodic", "π")
    ADIABATIC = ("adiabatic", "α")
    REFLEXIVE = ("reflexive", "ρ")

    def __init__(self, code_name: str, symbol: str):
        self.code_name = code_name
        self.symbol = symbol

    @classmethod
    def from_code_name(cls, name: str) -> BaseBoundary:
        key = name.strip().lower()
        for kind in cls:
            if key in (kind.code_name, kind.symbol, kind.code_name[0]):
                return kind
        raise CAError(CAErrorCode.UNKNOWN_NAME, f"unknown boundary condition {name!r}")

    def map_coordinate(self, x: int, size: int) -> int | None:
        """Map an out-of-range coordinate ``x`` in ``{0, size+1}`` into ``[1, size]``.

        Returns None for the null condition.
        """
        low = x == 0
        if self is BaseBoundary.NULL:
            return None
        if self is BaseBoundary.PERIODIC:
            return size if low else 1
        if self is BaseBoundary.ADIABATIC:
            return 1 if low else size
        return 2 if low else size - 1


class CornerRule(Enum):
    # Corners listed explicitly by a named spec.
    NAMED_TABLE = "named_table"
    # Each corner takes the condition of its left/right side.
    VERTICAL_SIDE_WINS = "vertical_side_wins"


NULL = BaseBoundary.NULL
PERIODIC = BaseBoundary.PERIODIC
ADIABATIC = BaseBoundary.ADIABATIC
REFLEXIVE = BaseBoundary.REFLEXIVE


@dataclass(frozen=True)
class BoundarySpec:
    """Side assignment plus corner table.

    ``corners`` is ordered top-left, top-right, bottom-left, bottom-right,
    i.e. frame cells ``(0, 0)``, ``(0, n+1)``, ``(m+1, 0)``, ``(m+1, n+1)``.
    """

    top: BaseBoundary
    bottom: BaseBoundary
    left: BaseBoundary
    right: BaseBoundary
    corners: tuple[BaseBoundary, BaseBoundary, BaseBoundary, BaseBoundary]
    corner_rule: CornerRule = CornerRule.VERTICAL_SIDE_WINS
    name: str = "custom"

    @classmethod
    def custom(
        cls,
        top: BaseBoundary,
        bottom: BaseBoundary,
        left: BaseBoundary,
        right: BaseBoundary,
    ) -> BoundarySpec:
        return cls(top, bottom, left, right, (left, right, left, right))

    @classmethod
    def uniform(cls, kind: BaseBoundary, name: str) -> BoundarySpec:
        return cls(kind, kind, kind, kind, (kind,) * 4, CornerRule.NAMED_TABLE, name)

    def corner(self, top: bool, left: bool) -> BaseBoundary:
        return self.corners[(0 if top else 2) + (0 if left else 1)]

    @property
    def is_named(self) -> bool:
        return self.name != "custom"

    def to_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "top": self.top.code_name,
            "bottom": self.bottom.code_name,
            "left": self.left.code_name,
            "right": self.right.code_name,
            "corners": [c.code_name for c in self.corners],
            "corner_rule": self.corner_rule.value,
        }


def _mixed(
    name: str,
    top: BaseBoundary,
    bottom: BaseBoundary,
    left: BaseBoundary,
    right: BaseBoundary,
    corners: tuple[BaseBoundary, BaseBoundary, BaseBoundary, BaseBoundary],
) -> BoundarySpec:
    return BoundarySpec(top, bottom, left, right, corners, CornerRule.NAMED_TABLE, name)


UNIFORM_SPECS = ("NB", "PB", "AB", "RB")
MIXED_SPECS = ("φ", "ψ", "τ", "σ", "λ", "ξ")
ROTATED_SPECS = ("φ90", "φ180", "φ270")

NAMED_SPECS: dict[str, BoundarySpec] = {
    "NB": BoundarySpec.uniform(NULL, "NB"),
    "PB": BoundarySpec.uniform(PERIODIC, "PB"),
    "AB": BoundarySpec.uniform(ADIABATIC, "AB"),
    "RB": BoundarySpec.uniform(REFLEXIVE, "RB"),
    # Top/left sides carry the first condition, bottom/right the second.
    "φ": _mixed("φ", NULL, REFLEXIVE, NULL, REFLEXIVE, (NULL, NULL, REFLEXIVE, REFLEXIVE)),
    "ψ": _mixed("ψ", NULL, PERIODIC, NULL, PERIODIC, (NULL, NULL, PERIODIC, PERIODIC)),
    "τ": _mixed("τ", NULL, ADIABATIC, NULL, ADIABATIC, (NULL, NULL, ADIABATIC, ADIABATIC)),
    "σ": _mixed(
        "σ", REFLEXIVE, ADIABATIC, REFLEXIVE, ADIABATIC,
        (REFLEXIVE, REFLEXIVE, ADIABATIC, ADIABATIC),
    ),
    "λ": _mixed(
        "λ", REFLEXIVE, PERIODIC, REFLEXIVE, PERIODIC,
        (REFLEXIVE, REFLEXIVE, PERIODIC, PERIODIC),
    ),
    "ξ": _mixed(
        "ξ", PERIODIC, ADIABATIC, PERIODIC, ADIABATIC,
        (PERIODIC, PERIODIC, ADIABATIC, ADIABATIC),
    ),
    # Rotations of φ.
    "φ90": _mixed("φ90", NULL, REFLEXIVE, REFLEXIVE, NULL, (REFLEXIVE, NULL, REFLEXIVE, NULL)),
    "φ180": _mixed("φ180", REFLEXIVE, NULL, REFLEXIVE, NULL, (REFLEXIVE, REFLEXIVE, NULL, NULL)),
    "φ270": _mixed("φ270", REFLEXIVE, NULL, NULL, REFLEXIVE, (NULL, REFLEXIVE, NULL, REFLEXIVE)),
}

SPEC_ALIASES: dict[str, str] = {
    "nb": "NB",
    "pb": "PB",
    "ab": "AB",
    "rb": "RB",
    "phi": "φ",
    "psi": "ψ",
    "tau": "τ",
    "sigma": "σ",
    "lambda": "λ",
    "xi": "ξ",
    "phi90": "φ90",
    "phi180": "φ180",
    "phi270": "φ270",
}


def canonical_name(name: str) -> str:
    """Map a CLI alias (``phi``) or symbol (``φ``) to the canonical spec name."""
    key = name.strip()
    if key in NAMED_SPECS:
        return key
    alias = SPEC_ALIASES.get(key.lower())
    if alias is None:
        raise CAError(
            CAErrorCode.UNKNOWN_NAME,
            f"unknown boundary spec {name!r}",
            {"known": sorted(SPEC_ALIASES)},
        )
    return alias


def named_spec(name: str) -> BoundarySpec:
    return NAMED_SPECS[canonical_name(name)]


@dataclass(frozen=True)
class VirtualCellResolution:
    """Where a frame cell takes its value from: a lattice cell, or nowhere."""

    source: tuple[int, int] | None

    @property
    def is_zero(self) -> bool:
        return self.source is None


ZERO_STATE = VirtualCellResolution(None)


def resolve(spec: BoundarySpec, dims: LatticeDims, i: int, j: int) -> VirtualCellResolution:
    """Resolve frame cell ``(i, j)`` to the lattice cell it mirrors.

    Raises:
        CAError: ``NotAFrameCell`` if ``(i, j)`` is inside the lattice or
            outside the one-cell frame.
    """
    m, n = dims.m, dims.n
    if not (0 <= i <= m + 1 and 0 <= j <= n + 1) or dims.contains(i, j):
        raise CAError(
            CAErrorCode.NOT_A_FRAME_CELL,
            f"({i}, {j}) is not on the frame of a {dims} lattice",
            {"i": i, "j": j},
        )
    row_out = i in (0, m + 1)
    col_out = j in (0, n + 1)
    if row_out and col_out:
        kind = spec.corner(top=i == 0, left=j == 0)
        row = kind.map_coordinate(i, m)
        col = kind.map_coordinate(j, n)
        if row is None or col is None:
            return ZERO_STATE
        return VirtualCellResolution((row, col))
    if row_out:
        row = (spec.top if i == 0 else spec.bottom).map_coordinate(i, m)
        return ZERO_STATE if row is None else VirtualCellResolution((row, j))
    col = (spec.left if j == 0 else spec.right).map_coordinate(j, n)
    return ZERO_STATE if col is None else VirtualCellResolution((i, col))
