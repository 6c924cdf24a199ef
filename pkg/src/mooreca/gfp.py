"""Exact arithmetic in the prime field Z_p.

Scalars are :class:`FieldElement` values tied to a :class:`FieldSpec`.
Matrices and configurations are carried as ``numpy`` integer arrays whose
entries are already reduced into ``[0, p)``; :func:`matmul_mod` and
:func:`reduce` are the array-level counterparts of the scalar operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from .errors import CAError
from .errors import CAErrorCode

MAX_MODULUS = 2**31 - 1

# Deterministic Miller-Rabin witnesses, valid for n < 3,215,031,751.
_MR_BASES = (2, 3, 5, 7)

IntArray = npt.NDArray[Any]


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n`` up to :data:`MAX_MODULUS`."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field Z_p."""

    p: int

    def __post_init__(self) -> None:
        if self.p < 2 or self.p > MAX_MODULUS:
            raise CAError(
                CAErrorCode.OUT_OF_RANGE,
                f"modulus {self.p} outside [2, {MAX_MODULUS}]",
                {"p": self.p},
            )
        if not is_prime(self.p):
            raise CAError(CAErrorCode.NOT_PRIME, f"{self.p} is not prime", {"p": self.p})

    def element(self, value: int) -> FieldElement:
        """Reduce an arbitrary integer into the field."""
        return FieldElement(int(value) % self.p, self)

    def check(self, value: int, what: str = "value") -> int:
        """Validate that ``value`` already lies in ``[0, p)``."""
        if not 0 <= value < self.p:
            raise CAError(
                CAErrorCode.OUT_OF_RANGE,
                f"{what} {value} not in [0, {self.p})",
                {"value": value, "p": self.p},
            )
        return int(value)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1 % self.p, self)

    def __str__(self) -> str:
        return f"Z_{self.p}"


@dataclass(frozen=True)
class FieldElement:
    """An element of Z_p; arithmetic across different fields is rejected."""

    value: int
    spec: FieldSpec

    def __post_init__(self) -> None:
        self.spec.check(self.value)

    def _coerce(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise CAError(
                    CAErrorCode.FIELD_MISMATCH,
                    f"cannot combine elements of {self.spec} and {other.spec}",
                )
            return other.value
        return int(other) % self.spec.p

    def __add__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement((self.value + self._coerce(other)) % self.spec.p, self.spec)

    __radd__ = __add__

    def __sub__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement((self.value - self._coerce(other)) % self.spec.p, self.spec)

    def __rsub__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement((self._coerce(other) - self.value) % self.spec.p, self.spec)

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        return FieldElement(self.value * self._coerce(other) % self.spec.p, self.spec)

    __rmul__ = __mul__

    def __neg__(self) -> FieldElement:
        return neg(self)

    def __truediv__(self, other: FieldElement | int) -> FieldElement:
        return self * inv(FieldElement(self._coerce(other), self.spec))

    def __pow__(self, exponent: int) -> FieldElement:
        if exponent < 0:
            return inv(self) ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.spec.p), self.spec)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return str(self.value)


def make_field(p: int) -> FieldSpec:
    """Validate ``p`` and return the field Z_p.

    Raises:
        CAError: ``NotPrime`` for composite ``p``; ``OutOfRange`` when
            ``p`` is below 2 or above :data:`MAX_MODULUS`.
    """
    return FieldSpec(int(p))


def inv(x: FieldElement) -> FieldElement:
    if x.value == 0:
        raise CAError(CAErrorCode.DIVISION_BY_ZERO, f"0 has no inverse in {x.spec}")
    return FieldElement(pow(x.value, -1, x.spec.p), x.spec)


def neg(x: FieldElement) -> FieldElement:
    return FieldElement(-x.value % x.spec.p, x.spec)


def inv_int(value: int, p: int) -> int:
    """Inverse of a raw residue; used inside elimination loops."""
    if value % p == 0:
        raise CAError(CAErrorCode.DIVISION_BY_ZERO, f"0 has no inverse in Z_{p}")
    return pow(int(value), -1, p)


def reduce(arr: npt.ArrayLike, p: int) -> IntArray:
    """Reduce an integer array into ``[0, p)`` as ``int64``."""
    out = np.asarray(arr)
    if out.dtype == object:
        out = np.vectorize(lambda v: int(v) % p, otypes=[np.int64])(out)
        return out
    return np.mod(out.astype(np.int64, copy=False), p)


def matmul_mod(a: IntArray, b: IntArray, p: int) -> IntArray:
    """Exact ``a @ b mod p`` for reduced operands.

    The ``int64`` product is used only while the accumulated inner
    product provably stays below 2**63; otherwise the multiplication
    runs on Python integers.
    """
    inner = a.shape[-1] if a.ndim else 1
    if (p - 1) ** 2 * max(inner, 1) < 2**63:
        return np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % p
    wide = np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    return reduce(wide, p)
