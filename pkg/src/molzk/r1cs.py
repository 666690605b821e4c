"""Rank-1 constraint system container.

A constraint is a triple of linear combinations (A, B, C) over the wires,
satisfied when <A,w> * <B,w> = <C,w> mod the scalar-field modulus. Linear
combinations are plain dicts mapping wire index -> coefficient. Wire 0 is
pinned to the constant 1.

Every constraint carries a component tag, and synthesis additionally
records a coarse stage graph (one node per gadget instance) used by the
complexity analyzer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .field import FIELD_MODULUS

COMPONENT_TAGS = ("hash", "safety", "qed", "sas", "lipinski", "similarity", "validity", "glue")


@dataclass(frozen=True)
class Constraint:
    a: dict
    b: dict
    c: dict
    tag: str


@dataclass(frozen=True)
class Stage:
    """One gadget instance: a contiguous run of constraints with shared purpose."""

    name: str
    tag: str
    nonlinear: bool
    deps: tuple  # names of stages whose outputs this one consumes


@dataclass
class ConstraintSystem:
    num_wires: int
    num_public: int  # statement wires 0..num_public-1 (wire 0 is the constant)
    constraints: list
    stages: list
    layout: Optional[object] = None

    def eval_lc(self, lc: dict, witness) -> int:
        total = 0
        for wire, coeff in lc.items():
            total += witness[wire] * coeff
        return total % FIELD_MODULUS

    def is_satisfied(self, witness) -> bool:
        try:
            self.assert_satisfied(witness)
            return True
        except ValueError:
            return False

    def assert_satisfied(self, witness):
        if len(witness) != self.num_wires:
            raise ValueError(f"witness length {len(witness)} != {self.num_wires} wires")
        if witness[0] != 1:
            raise ValueError("wire 0 must carry the constant 1")
        for idx, con in enumerate(self.constraints):
            a = self.eval_lc(con.a, witness)
            b = self.eval_lc(con.b, witness)
            c = self.eval_lc(con.c, witness)
            if a * b % FIELD_MODULUS != c:
                raise ValueError(f"constraint {idx} ({con.tag}) violated: {a} * {b} != {c}")

    def is_nonlinear(self, con: Constraint) -> bool:
        # A constraint is nonlinear when both product sides involve actual
        # wires (anything beyond the constant-1 wire).
        a_live = any(w != 0 for w in con.a)
        b_live = any(w != 0 for w in con.b)
        return a_live and b_live


class Builder:
    """Accumulates wires, constraints, and the gadget stage graph."""

    def __init__(self, num_public: int):
        self.num_wires = num_public
        self.num_public = num_public
        self.constraints = []
        self.stages = []
        self._stage_name = None
        self._stage_tag = None
        self._stage_deps = None
        self._stage_nonlinear = False

    def new_wire(self) -> int:
        wire = self.num_wires
        self.num_wires += 1
        return wire

    def begin_stage(self, name: str, tag: str, deps=()):
        self._flush_stage()
        self._stage_name = name
        self._stage_tag = tag
        self._stage_deps = tuple(deps)
        self._stage_nonlinear = False

    def _flush_stage(self):
        if self._stage_name is not None:
            self.stages.append(
                Stage(self._stage_name, self._stage_tag, self._stage_nonlinear, self._stage_deps)
            )
            self._stage_name = None

    def constrain(self, a: dict, b: dict, c: dict):
        con = Constraint(dict(a), dict(b), dict(c), self._stage_tag)
        self.constraints.append(con)
        if any(w != 0 for w in con.a) and any(w != 0 for w in con.b):
            self._stage_nonlinear = True

    def finish(self, layout=None) -> ConstraintSystem:
        self._flush_stage()
        return ConstraintSystem(
            num_wires=self.num_wires,
            num_public=self.num_public,
            constraints=self.constraints,
            stages=self.stages,
            layout=layout,
        )


# Linear-combination helpers. LCs are {wire: coeff} dicts; all arithmetic
# stays reduced mod the field.

def lc(*pairs) -> dict:
    out = {}
    for coeff, wire in pairs:
        coeff = coeff % FIELD_MODULUS
        if coeff:
            out[wire] = coeff
    return out


def lc_add(*lcs) -> dict:
    out = {}
    for item in lcs:
        for wire, coeff in item.items():
            new = (out.get(wire, 0) + coeff) % FIELD_MODULUS
            if new:
                out[wire] = new
            else:
                out.pop(wire, None)
    return out


def lc_scale(item: dict, k: int) -> dict:
    k %= FIELD_MODULUS
    if not k:
        return {}
    return {wire: coeff * k % FIELD_MODULUS for wire, coeff in item.items()}


def lc_sub(a: dict, b: dict) -> dict:
    return lc_add(a, lc_scale(b, -1))


def lc_const(value: int) -> dict:
    return lc((value, 0))
