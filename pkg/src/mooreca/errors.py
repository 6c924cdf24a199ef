"""Error handling for the cellular automaton engine.

Every failure raised by the library is a :class:`CAError` carrying a
:class:`CAErrorCode`. Each code knows the process exit status the
command-line interface reports for it, so library code never has to
call ``sys.exit`` itself.
"""

from __future__ import annotations

import json
from enum import Enum
from typing import Any


class CAErrorCode(Enum):
    """Error codes with their command-line exit statuses."""

    NOT_PRIME = ("NotPrime", 2)
    OUT_OF_RANGE = ("OutOfRange", 2)
    FIELD_MISMATCH = ("FieldMismatch", 2)
    DIMENSION_MISMATCH = ("DimensionMismatch", 2)
    TOO_SMALL = ("TooSmall", 2)
    UNKNOWN_NAME = ("UnknownName", 2)
    NOT_A_FRAME_CELL = ("NotAFrameCell", 2)
    INVALID_CONFIG = ("InvalidConfig", 2)
    INVALID_FORMAT = ("InvalidFormat", 2)
    DIVISION_BY_ZERO = ("DivisionByZero", 1)
    SHAPE_MISMATCH = ("ShapeMismatch", 1)
    SINGULAR_X = ("SingularX", 1)
    SINGULAR = ("Singular", 1)
    EVEN_CHARACTERISTIC = ("EvenCharacteristic", 1)
    CASE_NOT_COVERED = ("CaseNotCovered", 1)
    BUILDER_MISMATCH = ("BuilderMismatch", 3)
    NOT_REVERSIBLE = ("NotReversible", 4)

    def __init__(self, code_name: str, exit_code: int):
        self.code_name = code_name
        self.exit_code = exit_code

    @classmethod
    def from_code_name(cls, code_name: str) -> CAErrorCode | None:
        """Get CAErrorCode from its string code name."""
        for code in cls:
            if code.code_name == code_name:
                return code
        return None


class CAError(Exception):
    """Represents a failure in the cellular automaton engine.

    Errors contain at minimum a code and message, and may carry a
    dictionary of structured details (offending values, coordinates).
    """

    def __init__(
        self,
        code: CAErrorCode,
        message: str,
        details: dict[str, Any] | None = None,
    ):
        """Initialize a CAError.

        Args:
            code: The error code
            message: Human-readable error message
            details: Optional structured details, JSON-serializable
        """
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    @property
    def exit_code(self) -> int:
        return self.code.exit_code

    def to_json(self) -> str:
        """Serialize the error to a JSON object."""
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dict(self) -> dict[str, Any]:
        """Convert error to dictionary representation."""
        return {
            "code": self.code.code_name,
            "message": self.message,
            "details": dict(self.details),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CAError:
        """Parse a CAError from its dictionary representation.

        Raises:
            ValueError: If the code is missing or unknown
        """
        code_name = data.get("code")
        code = CAErrorCode.from_code_name(code_name) if code_name else None
        if code is None:
            raise ValueError(f"unknown error code: {code_name!r}")
        return cls(code, data.get("message", ""), data.get("details"))

    def __str__(self) -> str:
        return f"[{self.code.code_name}] {self.message}"

    def __repr__(self) -> str:
        return f"CAError(code={self.code.code_name!r}, message={self.message!r})"
