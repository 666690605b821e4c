"""Poseidon permutation and hash over the BN128 scalar field.

Parameters (round constants and MDS matrix) are derived deterministically at
first use via the Grain-LFSR procedure published with the hash function:
a self-shrinking 80-bit LFSR seeded with the instance description emits the
round constants by rejection sampling, followed by the x/y vectors of a
Cauchy MDS matrix. Round counts target the 128-bit level for the x^5 s-box.

One fixed-width instance exists per arity: hashing k inputs (1 <= k <= 8)
uses width k+1 with the inputs in the rate slots, the capacity slot
initialized to zero, and a single permutation — not a multi-block sponge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from gmpy2 import invert, mpz

from .errors import ParameterError
from .field import FIELD_MODULUS, FieldElement

FULL_ROUNDS = 8

# Partial rounds by state width for the x^5 s-box over a 254-bit prime at
# the 128-bit security level.
PARTIAL_ROUNDS = {2: 56, 3: 57, 4: 56, 5: 60, 6: 60, 7: 63, 8: 64, 9: 63}

MAX_ARITY = 8

_P = mpz(FIELD_MODULUS)


@dataclass(frozen=True)
class PoseidonParams:
    """One Poseidon instantiation: width, schedule, constants, MDS matrix."""

    width: int
    full_rounds: int
    partial_rounds: int
    round_constants: tuple
    mds_matrix: tuple

    def __post_init__(self):
        expected = self.width * (self.full_rounds + self.partial_rounds)
        if len(self.round_constants) != expected:
            raise ParameterError(
                f"need {expected} round constants for width {self.width}, got {len(self.round_constants)}"
            )
        if len(self.mds_matrix) != self.width or any(len(row) != self.width for row in self.mds_matrix):
            raise ParameterError("MDS matrix shape must be width x width")


class _Grain:
    """Self-shrinking Grain LFSR over an 80-bit state held as an integer.

    Bit i of the specification's list layout lives at integer position
    79 - i, so the feedback taps {62, 51, 38, 23, 13, 0} become
    {17, 28, 41, 56, 66, 79}.
    """

    _MASK = (1 << 80) - 1

    def __init__(self, width: int, full_rounds: int, partial_rounds: int):
        seed = 0
        for value, size in ((1, 2), (0, 4), (254, 12), (width, 12), (full_rounds, 10), (partial_rounds, 10)):
            seed = (seed << size) | value
        seed = (seed << 30) | ((1 << 30) - 1)
        self._state = seed
        for _ in range(160):
            self._raw_bit()

    def _raw_bit(self) -> int:
        s = self._state
        new = (
            (s >> 17) ^ (s >> 28) ^ (s >> 41) ^ (s >> 56) ^ (s >> 66) ^ (s >> 79)
        ) & 1
        self._state = ((s << 1) | new) & self._MASK
        return new

    def bit(self) -> int:
        while True:
            first = self._raw_bit()
            second = self._raw_bit()
            if first:
                return second

    def field_element(self) -> int:
        while True:
            value = 0
            for _ in range(254):
                value = (value << 1) | self.bit()
            if value < FIELD_MODULUS:
                return value


@lru_cache(maxsize=None)
def generate_params(width: int) -> PoseidonParams:
    """Derive the parameter set for the given state width (2..9)."""
    if width not in PARTIAL_ROUNDS:
        raise ParameterError(f"unsupported Poseidon width {width}; expected 2..9")
    partial = PARTIAL_ROUNDS[width]
    grain = _Grain(width, FULL_ROUNDS, partial)
    constants = tuple(mpz(grain.field_element()) for _ in range((FULL_ROUNDS + partial) * width))
    while True:
        xs = [grain.field_element() for _ in range(width)]
        ys = [grain.field_element() for _ in range(width)]
        if len(set(xs)) == width and len(set(ys)) == width and all(
            (x + y) % FIELD_MODULUS != 0 for x in xs for y in ys
        ):
            break
    mds = tuple(
        tuple(invert(mpz(x + y) % _P, _P) for y in ys)
        for x in xs
    )
    return PoseidonParams(width, FULL_ROUNDS, partial, constants, mds)


def params_for_arity(arity: int) -> PoseidonParams:
    if not 1 <= arity <= MAX_ARITY:
        raise ParameterError(f"Poseidon hash arity must be 1..{MAX_ARITY}, got {arity}")
    return generate_params(arity + 1)


def _permute_ints(state, params: PoseidonParams):
    """Permutation over plain ints; the hot path for witnesses and hashing."""
    t = params.width
    constants = params.round_constants
    mds = params.mds_matrix
    half = params.full_rounds // 2
    boundary = half + params.partial_rounds
    state = [mpz(s) for s in state]
    for rnd in range(params.full_rounds + params.partial_rounds):
        offset = rnd * t
        full = rnd < half or rnd >= boundary
        for lane in range(t):
            s = (state[lane] + constants[offset + lane]) % _P
            if full or lane == 0:
                s2 = s * s % _P
                s = s2 * s2 % _P * s % _P
            state[lane] = s
        state = [
            sum(row[j] * state[j] for j in range(t)) % _P
            for row in mds
        ]
    return state


def permute(state: Sequence[FieldElement], params: PoseidonParams) -> list[FieldElement]:
    """Apply the Poseidon permutation to a full-width state."""
    if len(state) != params.width:
        raise ParameterError(f"state length {len(state)} != width {params.width}")
    out = _permute_ints([int(s) for s in state], params)
    return [FieldElement(int(v)) for v in out]


def hash_ints(inputs: Sequence[int]) -> int:
    if not 1 <= len(inputs) <= MAX_ARITY:
        raise ParameterError(f"Poseidon hash takes 1..{MAX_ARITY} inputs, got {len(inputs)}")
    params = params_for_arity(len(inputs))
    state = [0] + [int(v) % FIELD_MODULUS for v in inputs]
    return int(_permute_ints(state, params)[0])


def hash(inputs: Sequence[FieldElement]) -> FieldElement:  # noqa: A001 - spec-mandated name
    """Fixed-arity Poseidon digest of 1..8 field elements."""
    return FieldElement(hash_ints([int(v) for v in inputs]))
