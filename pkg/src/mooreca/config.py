"""Job configuration for the command-line tools.

Values come from built-in defaults, then an optional JSON file, then
explicit command-line flags, each layer overriding the previous one.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .boundary import BaseBoundary
from .boundary import BoundarySpec
from .boundary import named_spec
from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldSpec
from .gfp import make_field
from .grid import LatticeDims
from .io import load_json
from .stepper import COEFFICIENT_NAMES
from .stepper import RuleCoefficients

# Type definitions for coefficient inputs - what users can pass
CoefficientInput = (
    str  # "a,b,c,d,e,f,g,h"
    | Sequence[int]  # eight integers in a..h order
    | Mapping[str, int]  # {"a": 1, "d": 2}; missing keys are 0
)


def normalize_coefficients(value: CoefficientInput | None) -> tuple[int, ...]:
    """Convert any coefficient input format to an 8-tuple in a..h order."""
    if value is None:
        return (0,) * 8

    if isinstance(value, str):
        tokens = [tok for tok in value.replace(" ", "").split(",") if tok]
        try:
            return normalize_coefficients([int(tok) for tok in tokens])
        except ValueError as e:
            raise CAError(CAErrorCode.INVALID_CONFIG, f"bad coefficient list {value!r}") from e

    if isinstance(value, Mapping):
        unknown = set(value) - set(COEFFICIENT_NAMES)
        if unknown:
            raise CAError(
                CAErrorCode.INVALID_CONFIG,
                f"unknown coefficient names: {sorted(unknown)}",
            )
        return tuple(int(value.get(name, 0)) for name in COEFFICIENT_NAMES)

    values = tuple(int(v) for v in value)
    if len(values) != len(COEFFICIENT_NAMES):
        raise CAError(
            CAErrorCode.INVALID_CONFIG,
            f"expected 8 coefficients a..h, got {len(values)}",
        )
    return values


def parse_sides(value: str | Sequence[str]) -> tuple[str, str, str, str]:
    """Parse ``top,bottom,left,right`` boundary kinds."""
    items = value.split(",") if isinstance(value, str) else list(value)
    names = [BaseBoundary.from_code_name(item).code_name for item in items]
    if len(names) != 4:
        raise CAError(
            CAErrorCode.INVALID_CONFIG,
            "sides must list four conditions: top,bottom,left,right",
        )
    return names[0], names[1], names[2], names[3]


_BOOL_KEYS = frozenset({"pgm", "backward", "check", "verbose"})


@dataclass(frozen=True)
class JobConfig:
    p: int = 3
    m: int = 4
    n: int = 3
    coeffs: tuple[int, ...] = (1,) * 8
    spec: str = "phi"
    sides: tuple[str, str, str, str] | None = None
    builder: str = "resolver"
    steps: int = 10
    seed: int = 0
    out: Path | None = None
    initial: Path | None = None
    pgm: bool = False
    backward: bool = False
    check: bool = False
    verbose: bool = False

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> JobConfig:
        return cls().merged(data)

    @classmethod
    def load(cls, path: Path) -> JobConfig:
        data = load_json(path)
        if not isinstance(data, dict):
            raise CAError(CAErrorCode.INVALID_CONFIG, f"{path}: top level must be an object")
        return cls.from_dict(data)

    def merged(self, overrides: Mapping[str, Any]) -> JobConfig:
        """Return a copy with every non-None override applied."""
        known = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise CAError(CAErrorCode.INVALID_CONFIG, f"unknown config keys: {sorted(unknown)}")
        changes: dict[str, Any] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "coeffs":
                value = normalize_coefficients(value)
            elif key == "sides":
                value = parse_sides(value)
            elif key in ("out", "initial"):
                value = Path(value)
            elif key in ("p", "m", "n", "steps", "seed"):
                value = int(value)
            elif key in _BOOL_KEYS and not isinstance(value, bool):
                raise CAError(
                    CAErrorCode.INVALID_CONFIG,
                    f"{key} must be true or false, got {value!r}",
                )
            changes[key] = value
        return dataclasses.replace(self, **changes)

    def validate(self) -> ValidatedJob:
        """Construct the field, lattice, rule and boundary; raise on the first invalid value."""
        fld = make_field(self.p)
        dims = LatticeDims(self.m, self.n)
        coeffs = RuleCoefficients.from_sequence(fld, self.coeffs)
        if self.sides is not None:
            top, bottom, left, right = (BaseBoundary.from_code_name(s) for s in self.sides)
            boundary = BoundarySpec.custom(top, bottom, left, right)
        else:
            boundary = named_spec(self.spec)
        if self.steps < 0:
            raise CAError(CAErrorCode.OUT_OF_RANGE, f"steps {self.steps} is negative")
        if self.builder not in ("resolver", "theorem"):
            raise CAError(CAErrorCode.INVALID_CONFIG, f"unknown builder {self.builder!r}")
        return ValidatedJob(self, fld, dims, coeffs, boundary)

    def to_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        out["coeffs"] = list(self.coeffs)
        for key in ("out", "initial"):
            out[key] = None if out[key] is None else str(out[key])
        return out


@dataclass(frozen=True)
class ValidatedJob:
    config: JobConfig
    field: FieldSpec
    dims: LatticeDims
    coeffs: RuleCoefficients
    boundary: BoundarySpec
