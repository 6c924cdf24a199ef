import pytest

from mooreca.boundary import MIXED_SPECS
from mooreca.boundary import NAMED_SPECS
from mooreca.boundary import ROTATED_SPECS
from mooreca.boundary import UNIFORM_SPECS
from mooreca.boundary import ZERO_STATE
from mooreca.boundary import BaseBoundary
from mooreca.boundary import BoundarySpec
from mooreca.boundary import CornerRule
from mooreca.boundary import VirtualCellResolution
from mooreca.boundary import canonical_name
from mooreca.boundary import named_spec
from mooreca.boundary import resolve
from mooreca.errors import CAError
from mooreca.errors import CAErrorCode
from mooreca.grid import LatticeDims

DIMS = LatticeDims(3, 3)


def at(i, j):
    return VirtualCellResolution((i, j))


@pytest.mark.parametrize(
    ("kind", "low", "high"),
    [
        (BaseBoundary.NULL, None, None),
        (BaseBoundary.PERIODIC, 5, 1),
        (BaseBoundary.ADIABATIC, 1, 5),
        (BaseBoundary.REFLEXIVE, 2, 4),
    ],
)
def test_map_coordinate(kind, low, high):
    assert kind.map_coordinate(0, 5) == low
    assert kind.map_coordinate(6, 5) == high


def test_from_code_name_accepts_symbols():
    assert BaseBoundary.from_code_name("ρ") is BaseBoundary.REFLEXIVE
    assert BaseBoundary.from_code_name("Periodic") is BaseBoundary.PERIODIC
    assert BaseBoundary.from_code_name("a") is BaseBoundary.ADIABATIC
    with pytest.raises(CAError) as exc:
        BaseBoundary.from_code_name("toroidal")
    assert exc.value.code is CAErrorCode.UNKNOWN_NAME


def test_thirteen_named_specs():
    assert len(NAMED_SPECS) == 13
    assert all(spec.corner_rule is CornerRule.NAMED_TABLE for spec in NAMED_SPECS.values())
    assert set(UNIFORM_SPECS + MIXED_SPECS + ROTATED_SPECS) == set(NAMED_SPECS)
    for name in UNIFORM_SPECS:
        spec = NAMED_SPECS[name]
        assert spec.top is spec.bottom is spec.left is spec.right
    for name in MIXED_SPECS:
        spec = NAMED_SPECS[name]
        assert (spec.top, spec.bottom) == (spec.left, spec.right)
        assert spec.top is not spec.bottom
    for name in ROTATED_SPECS:
        spec = NAMED_SPECS[name]
        sides = [spec.top, spec.bottom, spec.left, spec.right]
        assert sorted(s.code_name for s in sides) == sorted(
            s.code_name for s in [BaseBoundary.NULL] * 2 + [BaseBoundary.REFLEXIVE] * 2
        )


@pytest.mark.parametrize(
    ("alias", "name"),
    [("phi", "φ"), ("PB", "PB"), ("sigma", "σ"), ("phi270", "φ270"), ("λ", "λ")],
)
def test_canonical_name(alias, name):
    assert canonical_name(alias) == name


def test_unknown_spec_name():
    with pytest.raises(CAError) as exc:
        named_spec("omega")
    assert exc.value.code is CAErrorCode.UNKNOWN_NAME


@pytest.mark.parametrize(
    ("spec", "cell", "expected"),
    [
        # null everywhere
        ("NB", (0, 2), ZERO_STATE),
        ("NB", (4, 4), ZERO_STATE),
        # periodic wraps both coordinates at corners
        ("PB", (0, 2), at(3, 2)),
        ("PB", (2, 4), at(2, 1)),
        ("PB", (0, 0), at(3, 3)),
        ("PB", (4, 4), at(1, 1)),
        # adiabatic copies the nearest cell
        ("AB", (0, 0), at(1, 1)),
        ("AB", (4, 1), at(3, 1)),
        # reflexive skips the edge cell
        ("RB", (0, 0), at(2, 2)),
        ("RB", (0, 1), at(2, 1)),
        ("RB", (4, 4), at(2, 2)),
        # φ: null on top/left, reflexive on bottom/right
        ("φ", (0, 2), ZERO_STATE),
        ("φ", (2, 0), ZERO_STATE),
        ("φ", (4, 2), at(2, 2)),
        ("φ", (2, 4), at(2, 2)),
        ("φ", (0, 0), ZERO_STATE),
        ("φ", (0, 4), ZERO_STATE),
        ("φ", (4, 0), at(2, 2)),
        ("φ", (4, 4), at(2, 2)),
        # ψ: periodic bottom/right
        ("ψ", (4, 3), at(1, 3)),
        ("ψ", (4, 0), at(1, 3)),
        # τ: adiabatic bottom/right
        ("τ", (4, 4), at(3, 3)),
        ("τ", (0, 4), ZERO_STATE),
        # σ: reflexive top/left, adiabatic bottom/right
        ("σ", (0, 0), at(2, 2)),
        ("σ", (4, 4), at(3, 3)),
        ("σ", (0, 4), at(2, 2)),
        # φ180: reflexive top/left, null bottom/right
        ("φ180", (0, 0), at(2, 2)),
        ("φ180", (4, 2), ZERO_STATE),
        # φ90: reflexive left, null right
        ("φ90", (2, 0), at(2, 2)),
        ("φ90", (0, 4), ZERO_STATE),
        ("φ90", (4, 0), at(2, 2)),
    ],
)
def test_resolve_named(spec, cell, expected):
    assert resolve(named_spec(spec), DIMS, *cell) == expected


def test_custom_corners_follow_vertical_sides():
    spec = BoundarySpec.custom(
        BaseBoundary.NULL, BaseBoundary.PERIODIC, BaseBoundary.ADIABATIC, BaseBoundary.REFLEXIVE
    )
    assert spec.corner_rule is CornerRule.VERTICAL_SIDE_WINS
    assert not spec.is_named
    assert resolve(spec, DIMS, 0, 0) == at(1, 1)
    assert resolve(spec, DIMS, 4, 4) == at(2, 2)
    assert resolve(spec, DIMS, 0, 2) == ZERO_STATE
    assert resolve(spec, DIMS, 4, 2) == at(1, 2)


@pytest.mark.parametrize("cell", [(2, 2), (1, 1), (5, 0), (0, -1)])
def test_not_a_frame_cell(cell):
    with pytest.raises(CAError) as exc:
        resolve(named_spec("PB"), DIMS, *cell)
    assert exc.value.code is CAErrorCode.NOT_A_FRAME_CELL


def test_to_dict():
    data = named_spec("phi").to_dict()
    assert data["name"] == "φ"
    assert data["top"] == "null"
    assert data["corners"] == ["null", "null", "reflexive", "reflexive"]
