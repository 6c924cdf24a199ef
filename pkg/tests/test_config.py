import json

import pytest

from mooreca.boundary import BaseBoundary
from mooreca.config import JobConfig
from mooreca.config import normalize_coefficients
from mooreca.config import parse_sides
from mooreca.errors import CAError
from mooreca.errors import CAErrorCode


def test_normalize_coefficients_formats():
    assert normalize_coefficients("1,2,0,0,1,1,0,2") == (1, 2, 0, 0, 1, 1, 0, 2)
    assert normalize_coefficients(" 1, 1,1,1,1,1,1,1 ") == (1,) * 8
    assert normalize_coefficients([0, 1, 0, 1, 0, 1, 0, 1]) == (0, 1, 0, 1, 0, 1, 0, 1)
    assert normalize_coefficients({"d": 2, "h": 1}) == (0, 0, 0, 2, 0, 0, 0, 1)
    assert normalize_coefficients(None) == (0,) * 8


@pytest.mark.parametrize("value", ["1,2,3", "1,x,0,0,0,0,0,0", {"z": 1}, [1] * 9])
def test_normalize_coefficients_rejects(value):
    with pytest.raises(CAError) as exc:
        normalize_coefficients(value)
    assert exc.value.code is CAErrorCode.INVALID_CONFIG


def test_parse_sides():
    assert parse_sides("null,reflexive,n,ρ") == ("null", "reflexive", "null", "reflexive")
    with pytest.raises(CAError):
        parse_sides("null,null")


def test_defaults_validate_to_example():
    job = JobConfig().validate()
    assert job.field.p == 3
    assert (job.dims.m, job.dims.n) == (4, 3)
    assert job.boundary.name == "φ"
    assert job.coeffs.values() == (1,) * 8


def test_layering(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"p": 5, "spec": "psi", "coeffs": "1,0,1,0,1,0,1,0"}), encoding="utf-8")
    cfg = JobConfig.load(path).merged({"p": 7, "m": None, "out": str(tmp_path)})
    assert cfg.p == 7
    assert cfg.m == 4
    assert cfg.spec == "psi"
    assert cfg.coeffs == (1, 0, 1, 0, 1, 0, 1, 0)
    assert cfg.out == tmp_path


def test_unknown_keys_rejected(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"prime": 5}), encoding="utf-8")
    with pytest.raises(CAError) as exc:
        JobConfig.load(path)
    assert exc.value.code is CAErrorCode.INVALID_CONFIG


def test_top_level_must_be_object(tmp_path):
    path = tmp_path / "job.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(CAError):
        JobConfig.load(path)


def test_custom_sides_override_spec():
    job = JobConfig(sides=("periodic", "null", "adiabatic", "reflexive")).validate()
    assert not job.boundary.is_named
    assert job.boundary.top is BaseBoundary.PERIODIC
    assert job.boundary.corners == (
        BaseBoundary.ADIABATIC,
        BaseBoundary.REFLEXIVE,
        BaseBoundary.ADIABATIC,
        BaseBoundary.REFLEXIVE,
    )


@pytest.mark.parametrize(
    ("overrides", "code"),
    [
        ({"p": 4}, CAErrorCode.NOT_PRIME),
        ({"m": 2}, CAErrorCode.TOO_SMALL),
        ({"coeffs": "3,0,0,0,0,0,0,0"}, CAErrorCode.OUT_OF_RANGE),
        ({"spec": "omega"}, CAErrorCode.UNKNOWN_NAME),
        ({"steps": -1}, CAErrorCode.OUT_OF_RANGE),
        ({"builder": "guess"}, CAErrorCode.INVALID_CONFIG),
    ],
)
def test_validate_errors(overrides, code):
    with pytest.raises(CAError) as exc:
        JobConfig().merged(overrides).validate()
    assert exc.value.code is code


def test_to_dict_is_json_ready():
    data = JobConfig(out=None).to_dict()
    assert json.loads(json.dumps(data))["coeffs"] == [1] * 8


@pytest.mark.parametrize("key", ["check", "verbose", "pgm", "backward"])
@pytest.mark.parametrize("value", ["false", 0, 1, "yes"])
def test_flags_must_be_booleans(key, value, tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({key: value}))
    with pytest.raises(CAError) as exc:
        JobConfig.load(path)
    assert exc.value.code is CAErrorCode.INVALID_CONFIG


def test_boolean_flags_accepted():
    config = JobConfig().merged({"check": False, "pgm": True})
    assert config.check is False
    assert config.pgm is True
