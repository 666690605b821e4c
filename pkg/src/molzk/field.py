"""Scalar-field elements of the BN128 curve (the field the circuit runs over).

The canonical wire format for a field element everywhere in this package is a
0x-prefixed 64-hex-char big-endian string; the byte form is 32 bytes
big-endian. Deserializing a value >= the modulus is an error, so every
element has exactly one encoding.
"""

from __future__ import annotations

from .bn254 import R
from .errors import DecodeError

FIELD_MODULUS = int(R)


class FieldElement:
    """Immutable element of the scalar field; all arithmetic reduces mod p."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        object.__setattr__(self, "value", int(value) % FIELD_MODULUS)

    def __setattr__(self, name, val):
        raise AttributeError("FieldElement is immutable")

    def __add__(self, other):
        return FieldElement(self.value + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - _coerce(other))

    def __rsub__(self, other):
        return FieldElement(_coerce(other) - self.value)

    def __mul__(self, other):
        return FieldElement(self.value * _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value)

    def __pow__(self, exponent: int):
        return FieldElement(pow(self.value, exponent, FIELD_MODULUS))

    def __truediv__(self, other):
        return self * FieldElement(_coerce(other)).inverse()

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(pow(self.value, FIELD_MODULUS - 2, FIELD_MODULUS))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other % FIELD_MODULUS
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value})"

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(32, "big")

    def to_hex(self) -> str:
        return "0x" + self.value.to_bytes(32, "big").hex()

    @classmethod
    def from_bytes(cls, data: bytes) -> "FieldElement":
        if len(data) != 32:
            raise DecodeError(f"field element must be 32 bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if value >= FIELD_MODULUS:
            raise DecodeError("field element value exceeds the modulus")
        return cls(value)

    @classmethod
    def from_hex(cls, text: str) -> "FieldElement":
        if not isinstance(text, str) or not text.startswith("0x") or len(text) != 66:
            raise DecodeError(f"expected 0x-prefixed 64-hex-char string, got {text!r}")
        try:
            raw = bytes.fromhex(text[2:])
        except ValueError as exc:
            raise DecodeError(f"invalid hex in field element: {text!r}") from exc
        return cls.from_bytes(raw)


def _coerce(other) -> int:
    if isinstance(other, FieldElement):
        return other.value
    if isinstance(other, int):
        return other
    raise TypeError(f"cannot operate on FieldElement and {type(other).__name__}")
