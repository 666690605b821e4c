import pytest
from hypothesis import given
from hypothesis import strategies as st

from molzk.errors import DecodeError
from molzk.field import FIELD_MODULUS, FieldElement

elements = st.integers(min_value=0, max_value=FIELD_MODULUS - 1)


def test_constructor_reduces():
    assert FieldElement(FIELD_MODULUS + 5) == FieldElement(5)
    assert FieldElement(-1) == FieldElement(FIELD_MODULUS - 1)


@given(elements, elements, elements)
def test_addition_associative(a, b, c):
    fa, fb, fc = FieldElement(a), FieldElement(b), FieldElement(c)
    assert (fa + fb) + fc == fa + (fb + fc)


@given(elements, elements)
def test_mul_commutes_and_distributes(a, b):
    fa, fb = FieldElement(a), FieldElement(b)
    assert fa * fb == fb * fa
    assert fa * (fb + 1) == fa * fb + fa


@given(elements.filter(lambda x: x != 0))
def test_inverse(a):
    fa = FieldElement(a)
    assert fa * fa.inverse() == FieldElement(1)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        FieldElement(0).inverse()


@given(elements)
def test_serialization_roundtrip(a):
    fe = FieldElement(a)
    assert FieldElement.from_bytes(fe.to_bytes()) == fe
    assert FieldElement.from_hex(fe.to_hex()) == fe


def test_hex_format():
    text = FieldElement(255).to_hex()
    assert text.startswith("0x") and len(text) == 66
    assert text == "0x" + "0" * 62 + "ff"


def test_deserialize_rejects_out_of_range():
    too_big = FIELD_MODULUS.to_bytes(32, "big")
    with pytest.raises(DecodeError):
        FieldElement.from_bytes(too_big)
    with pytest.raises(DecodeError):
        FieldElement.from_hex("0x" + "ff" * 32)


def test_deserialize_rejects_malformed():
    with pytest.raises(DecodeError):
        FieldElement.from_bytes(b"\x00" * 31)
    with pytest.raises(DecodeError):
        FieldElement.from_hex("1234")
    with pytest.raises(DecodeError):
        FieldElement.from_hex("0x" + "zz" * 32)


def test_immutability():
    fe = FieldElement(7)
    with pytest.raises(AttributeError):
        fe.value = 8
