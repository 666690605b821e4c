"""The metric-threshold verification circuit.

One universal constraint system covers every task: the task selector and
all five thresholds are public input wires, so a single trusted setup
serves any threshold configuration. Private inputs are the six scaled
metrics plus a blinding salt.

Wire plan (statement wires first, normative order):
    0              constant 1
    1..6           public inputs  [t, th_safe, th_qed, th_sas, th_lip, th_sim]
    7..9           public outputs [verification_result, commitment, nullifier]
    10..16         private inputs [v_valid, v_safe, v_qed, v_sas, v_lip, v_sim, salt]
    17..           gadget internals

Gadgets, in synthesis order:
  - booleanity of v_valid and of the task selector t
  - 32-bit range decomposition of the five numeric metrics (the overflow
    defense: witnesses with any metric >= 2^32 cannot be generated)
  - greater-or-equal comparators via 33-bit decomposition of a + 2^32 - b
  - equality-with-10^6 gadget for the binary safety rule, muxed with the
    regression comparator by t
  - an AND chain collapsing the six check bits into the result wire
  - width-8 Poseidon over (metrics, salt) -> commitment wire
  - width-3 Poseidon over (commitment, t) -> nullifier wire
"""

from __future__ import annotations

from dataclasses import dataclass

from . import poseidon
from .errors import SynthesisError, WitnessError
from .field import FIELD_MODULUS, FieldElement
from .r1cs import Builder, ConstraintSystem, lc, lc_add, lc_const, lc_scale, lc_sub
from .records import RANGE_BOUND, SCALE, MetricVector, TaskType, ThresholdSet

METRIC_BITS = 32

NUM_PUBLIC_INPUTS = 6
NUM_PUBLIC_OUTPUTS = 3
NUM_PRIVATE_INPUTS = 7
NUM_STATEMENT_WIRES = 1 + NUM_PUBLIC_INPUTS + NUM_PUBLIC_OUTPUTS

WIRE_ONE = 0
WIRE_T = 1
WIRE_THETA = {"safe": 2, "qed": 3, "sas": 4, "lip": 5, "sim": 6}
WIRE_RESULT = 7
WIRE_COMMITMENT = 8
WIRE_NULLIFIER = 9
WIRE_V = {"valid": 10, "safe": 11, "qed": 12, "sas": 13, "lip": 14, "sim": 15}
WIRE_SALT = 16

COMPARED_METRICS = ("safe", "qed", "sas", "lip", "sim")

# Metrics compared as "metric <= threshold" (implemented as GEQ with the
# operands swapped); the rest are "metric >= threshold".
LEQ_METRICS = ("sas", "lip")


@dataclass
class CircuitLayout:
    """Wire indices compute_witness needs to mirror the synthesized shape."""

    range_bits: dict      # metric -> list of 32 wires
    cmp_bits: dict        # metric -> list of 33 wires
    eq_safe_inv: int
    eq_safe_out: int
    mux_prod: int
    and_wires: list       # 4 intermediate conjunction wires
    commit_sboxes: list   # (x2, x4, x5) wire triples, trace order
    null_sboxes: list


def eval_native(v: MetricVector, theta: ThresholdSet, task_type: TaskType) -> int:
    """Reference evaluation of the threshold rules on plain integers."""
    if v.v_valid != 1:
        return 0
    if task_type == TaskType.BINARY:
        if v.v_safe != SCALE:
            return 0
    elif v.v_safe < theta.theta_safe:
        return 0
    if v.v_qed < theta.theta_qed:
        return 0
    if v.v_sas > theta.theta_sas:
        return 0
    if v.v_lip > theta.theta_lip:
        return 0
    if v.v_sim < theta.theta_sim:
        return 0
    return 1


def _booleanity(bld: Builder, wire_lc: dict):
    # x * (x - 1) = 0
    bld.constrain(wire_lc, lc_sub(wire_lc, lc_const(1)), {})


def _decompose(bld: Builder, source_lc: dict, nbits: int) -> list:
    bits = [bld.new_wire() for _ in range(nbits)]
    for b in bits:
        _booleanity(bld, lc((1, b)))
    weighted = lc(*((1 << i, b) for i, b in enumerate(bits)))
    bld.constrain(weighted, lc_const(1), source_lc)
    return bits


def _geq(bld: Builder, a_lc: dict, b_lc: dict) -> tuple:
    """Constrain d = a + 2^32 - b to 33 bits; the top bit is [a >= b]."""
    d_lc = lc_add(a_lc, lc_const(RANGE_BOUND), lc_scale(b_lc, -1))
    bits = _decompose(bld, d_lc, METRIC_BITS + 1)
    return bits, bits[METRIC_BITS]


def _poseidon_gadget(bld: Builder, input_lcs: list, params) -> tuple:
    """Emit the permutation constraints; returns (state0 LC, sbox wire triples)."""
    t = params.width
    state = [lc_const(0)] + [dict(item) for item in input_lcs]
    if len(state) != t:
        raise SynthesisError(f"poseidon gadget arity {len(input_lcs)} needs width {len(input_lcs) + 1}, got {t}")
    half = params.full_rounds // 2
    boundary = half + params.partial_rounds
    sboxes = []
    for rnd in range(params.full_rounds + params.partial_rounds):
        offset = rnd * t
        full = rnd < half or rnd >= boundary
        for lane in range(t):
            state[lane] = lc_add(state[lane], lc_const(int(params.round_constants[offset + lane])))
            if full or lane == 0:
                x_lc = state[lane]
                x2, x4, x5 = bld.new_wire(), bld.new_wire(), bld.new_wire()
                bld.constrain(x_lc, x_lc, lc((1, x2)))
                bld.constrain(lc((1, x2)), lc((1, x2)), lc((1, x4)))
                bld.constrain(lc((1, x4)), x_lc, lc((1, x5)))
                sboxes.append((x2, x4, x5))
                state[lane] = lc((1, x5))
        state = [
            lc_add(*(lc_scale(state[j], int(row[j])) for j in range(t)))
            for row in params.mds_matrix
        ]
    return state[0], sboxes


def synthesize(theta: ThresholdSet, task_type: TaskType) -> ConstraintSystem:
    """Build the universal constraint system.

    The layout does not depend on the concrete threshold values or task
    type (both enter as public input wires); the arguments are validated
    so callers cannot set up a circuit they could never satisfy.
    """
    for value in theta.scaled_values():
        if not 0 <= value < RANGE_BOUND:
            raise SynthesisError(f"threshold {value} outside [0, 2^32)")
    if task_type not in (TaskType.BINARY, TaskType.REGRESSION):
        raise SynthesisError(f"unknown task type {task_type!r}")

    bld = Builder(NUM_STATEMENT_WIRES)
    # Private input wires come right after the statement wires.
    for _ in range(NUM_PRIVATE_INPUTS):
        bld.new_wire()

    bld.begin_stage("validity_boolean", "validity")
    _booleanity(bld, lc((1, WIRE_V["valid"])))
    bld.begin_stage("task_boolean", "glue")
    _booleanity(bld, lc((1, WIRE_T)))

    tag_of = {"safe": "safety", "qed": "qed", "sas": "sas", "lip": "lipinski", "sim": "similarity"}
    range_bits = {}
    cmp_bits = {}
    cmp_flag = {}
    for name in COMPARED_METRICS:
        bld.begin_stage(f"range_{name}", tag_of[name])
        range_bits[name] = _decompose(bld, lc((1, WIRE_V[name])), METRIC_BITS)
        bld.begin_stage(f"cmp_{name}", tag_of[name], deps=(f"range_{name}",))
        v_lc = lc((1, WIRE_V[name]))
        t_lc = lc((1, WIRE_THETA[name]))
        if name in LEQ_METRICS:
            bits, flag = _geq(bld, t_lc, v_lc)
        else:
            bits, flag = _geq(bld, v_lc, t_lc)
        cmp_bits[name] = bits
        cmp_flag[name] = flag

    # Binary safety rule: v_safe == 10^6, via an inverse-or-zero gadget.
    bld.begin_stage("eq_safe", "safety", deps=("range_safe",))
    diff_lc = lc((1, WIRE_V["safe"]), (-SCALE, WIRE_ONE))
    eq_inv = bld.new_wire()
    eq_out = bld.new_wire()
    bld.constrain(diff_lc, lc((1, eq_inv)), lc((1, WIRE_ONE), (-1, eq_out)))
    bld.constrain(diff_lc, lc((1, eq_out)), {})

    # check_safe = eq + t * (geq - eq): equality for binary, comparator for
    # regression.
    bld.begin_stage("safety_mux", "safety", deps=("eq_safe", "cmp_safe", "task_boolean"))
    mux_prod = bld.new_wire()
    bld.constrain(lc((1, WIRE_T)), lc((1, cmp_flag["safe"]), (-1, eq_out)), lc((1, mux_prod)))
    check_safe_lc = lc((1, eq_out), (1, mux_prod))

    bld.begin_stage(
        "conjunction",
        "glue",
        deps=("validity_boolean", "safety_mux", "cmp_qed", "cmp_sas", "cmp_lip", "cmp_sim"),
    )
    and_wires = []
    acc_lc = lc((1, WIRE_V["valid"]))
    for operand in (check_safe_lc, lc((1, cmp_flag["qed"])), lc((1, cmp_flag["sas"])), lc((1, cmp_flag["lip"]))):
        out = bld.new_wire()
        bld.constrain(acc_lc, operand, lc((1, out)))
        and_wires.append(out)
        acc_lc = lc((1, out))
    bld.constrain(acc_lc, lc((1, cmp_flag["sim"])), lc((1, WIRE_RESULT)))

    bld.begin_stage("poseidon_commitment", "hash")
    commit_inputs = [lc((1, WIRE_V[n])) for n in ("valid", "safe", "qed", "sas", "lip", "sim")]
    commit_inputs.append(lc((1, WIRE_SALT)))
    commit_lc, commit_sboxes = _poseidon_gadget(bld, commit_inputs, poseidon.params_for_arity(7))

    bld.begin_stage("bind_commitment", "glue", deps=("poseidon_commitment",))
    bld.constrain(commit_lc, lc_const(1), lc((1, WIRE_COMMITMENT)))

    bld.begin_stage("poseidon_nullifier", "hash", deps=("bind_commitment", "task_boolean"))
    null_lc, null_sboxes = _poseidon_gadget(
        bld, [lc((1, WIRE_COMMITMENT)), lc((1, WIRE_T))], poseidon.params_for_arity(2)
    )

    bld.begin_stage("bind_nullifier", "glue", deps=("poseidon_nullifier",))
    bld.constrain(null_lc, lc_const(1), lc((1, WIRE_NULLIFIER)))

    layout = CircuitLayout(
        range_bits=range_bits,
        cmp_bits=cmp_bits,
        eq_safe_inv=eq_inv,
        eq_safe_out=eq_out,
        mux_prod=mux_prod,
        and_wires=and_wires,
        commit_sboxes=commit_sboxes,
        null_sboxes=null_sboxes,
    )
    return bld.finish(layout)


class Witness:
    """Full wire assignment; exposes the statement slice in normative order."""

    __slots__ = ("values",)

    def __init__(self, values: list):
        self.values = values

    @property
    def public_values(self) -> list:
        return list(self.values[1:NUM_STATEMENT_WIRES])

    @property
    def verification_result(self) -> int:
        return self.values[WIRE_RESULT]

    @property
    def commitment(self) -> FieldElement:
        return FieldElement(self.values[WIRE_COMMITMENT])

    @property
    def nullifier(self) -> FieldElement:
        return FieldElement(self.values[WIRE_NULLIFIER])


def _fill_poseidon(values, input_ints, params, sbox_wires):
    """Run the permutation natively, assigning each s-box's wires."""
    prime = FIELD_MODULUS
    t = params.width
    state = [0] + [int(x) % prime for x in input_ints]
    half = params.full_rounds // 2
    boundary = half + params.partial_rounds
    idx = 0
    for rnd in range(params.full_rounds + params.partial_rounds):
        offset = rnd * t
        full = rnd < half or rnd >= boundary
        for lane in range(t):
            s = (state[lane] + int(params.round_constants[offset + lane])) % prime
            if full or lane == 0:
                x2 = s * s % prime
                x4 = x2 * x2 % prime
                x5 = x4 * s % prime
                w2, w4, w5 = sbox_wires[idx]
                values[w2], values[w4], values[w5] = x2, x4, x5
                idx += 1
                s = x5
            state[lane] = s
        state = [
            sum(int(row[j]) * state[j] for j in range(t)) % prime
            for row in params.mds_matrix
        ]
    return state[0]


def compute_witness(
    v: MetricVector,
    salt: FieldElement,
    theta: ThresholdSet,
    task_type: TaskType,
    cs: ConstraintSystem,
) -> Witness:
    """Assign every wire; raises WitnessError for inputs no witness can satisfy."""
    metrics = v.as_tuple()
    for name, value in zip(("v_valid", "v_safe", "v_qed", "v_sas", "v_lip", "v_sim"), metrics):
        if not isinstance(value, int) or not 0 <= value < RANGE_BOUND:
            raise WitnessError(f"{name}={value} outside [0, 2^32); range decomposition impossible")
    if v.v_valid not in (0, 1):
        raise WitnessError(f"v_valid={v.v_valid} violates its booleanity constraint")
    t = int(task_type)
    if t not in (0, 1):
        raise WitnessError(f"task type encoding {t} violates its booleanity constraint")
    for value in theta.scaled_values():
        if not 0 <= value < RANGE_BOUND:
            raise WitnessError(f"threshold {value} outside [0, 2^32)")

    layout: CircuitLayout = cs.layout
    values = [0] * cs.num_wires
    values[WIRE_ONE] = 1
    values[WIRE_T] = t
    theta_by_name = dict(zip(COMPARED_METRICS, theta.scaled_values()))
    for name, wire in WIRE_THETA.items():
        values[wire] = theta_by_name[name]
    for name, wire in WIRE_V.items():
        values[wire] = getattr(v, f"v_{name}")
    values[WIRE_SALT] = int(salt)

    def assign_bits(wires, value):
        for i, w in enumerate(wires):
            values[w] = (value >> i) & 1

    flags = {}
    for name in COMPARED_METRICS:
        metric = getattr(v, f"v_{name}")
        assign_bits(layout.range_bits[name], metric)
        if name in LEQ_METRICS:
            d = theta_by_name[name] + RANGE_BOUND - metric
        else:
            d = metric + RANGE_BOUND - theta_by_name[name]
        assign_bits(layout.cmp_bits[name], d)
        flags[name] = (d >> METRIC_BITS) & 1

    diff = (v.v_safe - SCALE) % FIELD_MODULUS
    values[layout.eq_safe_inv] = pow(diff, FIELD_MODULUS - 2, FIELD_MODULUS) if diff else 0
    eq_out = 1 if diff == 0 else 0
    values[layout.eq_safe_out] = eq_out
    values[layout.mux_prod] = t * (flags["safe"] - eq_out) % FIELD_MODULUS
    check_safe = (eq_out + values[layout.mux_prod]) % FIELD_MODULUS

    acc = v.v_valid
    for wire, operand in zip(
        layout.and_wires, (check_safe, flags["qed"], flags["sas"], flags["lip"])
    ):
        acc = acc * operand % FIELD_MODULUS
        values[wire] = acc
    values[WIRE_RESULT] = acc * flags["sim"] % FIELD_MODULUS

    commitment = _fill_poseidon(
        values,
        list(metrics) + [int(salt)],
        poseidon.params_for_arity(7),
        layout.commit_sboxes,
    )
    values[WIRE_COMMITMENT] = commitment
    values[WIRE_NULLIFIER] = _fill_poseidon(
        values, [commitment, t], poseidon.params_for_arity(2), layout.null_sboxes
    )
    return Witness(values)


def commitment(v: MetricVector, salt: FieldElement) -> FieldElement:
    """Poseidon commitment over the metric vector and salt (native path)."""
    return FieldElement(poseidon.hash_ints(list(v.as_tuple()) + [int(salt)]))


def nullifier(commit: FieldElement, task_type: TaskType) -> FieldElement:
    """Replay tag: Poseidon of the commitment and the task-type encoding."""
    return FieldElement(poseidon.hash_ints([int(commit), int(task_type)]))


@dataclass
class ConstraintReport:
    total_constraints: int
    linear_constraints: int
    nonlinear_constraints: int
    per_component: dict
    component_shares: dict
    depth: int                # longest chain of dependent nonlinear gadget stages
    sbox_chain_length: int    # longest chain of dependent multiplication constraints
    parallel_groups: int
    public_inputs: int = NUM_PUBLIC_INPUTS
    private_inputs: int = NUM_PRIVATE_INPUTS
    public_outputs: int = NUM_PUBLIC_OUTPUTS

    def to_json_dict(self) -> dict:
        return {
            "total_constraints": self.total_constraints,
            "linear_constraints": self.linear_constraints,
            "nonlinear_constraints": self.nonlinear_constraints,
            "per_component": dict(self.per_component),
            "component_shares": {k: round(s, 4) for k, s in self.component_shares.items()},
            "depth": self.depth,
            "sbox_chain_length": self.sbox_chain_length,
            "parallel_groups": self.parallel_groups,
            "public_inputs": self.public_inputs,
            "private_inputs": self.private_inputs,
            "public_outputs": self.public_outputs,
        }


def analyze(cs: ConstraintSystem) -> ConstraintReport:
    """Complexity report: component shares, stage depth, parallelization proxy.

    Depth counts gadget stages along the longest dependency chain,
    restricted to stages containing nonlinear constraints (linear glue is
    free for a SNARK prover). sbox_chain_length is the raw longest chain of
    dependent multiplications, dominated by the sequential Poseidon rounds.
    parallel_groups counts connected gadget groups after removing the glue
    stages that join them.
    """
    per_component = {}
    nonlinear = 0
    for con in cs.constraints:
        per_component[con.tag] = per_component.get(con.tag, 0) + 1
        if cs.is_nonlinear(con):
            nonlinear += 1
    total = len(cs.constraints)
    shares = {tag: count / total for tag, count in per_component.items()} if total else {}

    by_name = {stage.name: stage for stage in cs.stages}
    depth_memo = {}

    def stage_depth(name):
        if name in depth_memo:
            return depth_memo[name]
        stage = by_name[name]
        best = max((stage_depth(d) for d in stage.deps), default=0)
        depth_memo[name] = best + (1 if stage.nonlinear else 0)
        return depth_memo[name]

    depth = max((stage_depth(s.name) for s in cs.stages), default=0)

    # Union-find over non-glue stages connected by direct dependencies.
    parent = {s.name: s.name for s in cs.stages if s.tag != "glue"}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for stage in cs.stages:
        if stage.tag == "glue":
            continue
        for dep in stage.deps:
            if dep in parent:
                parent[find(stage.name)] = find(dep)
    groups = len({find(name) for name in parent}) if parent else 0

    # Longest multiplication chain via one forward pass over the wires.
    wire_depth = [0] * cs.num_wires
    chain = 0
    for con in cs.constraints:
        operand_depth = 0
        for side in (con.a, con.b):
            for wire in side:
                if wire_depth[wire] > operand_depth:
                    operand_depth = wire_depth[wire]
        level = operand_depth + (1 if cs.is_nonlinear(con) else 0)
        chain = max(chain, level)
        for wire in con.c:
            if wire_depth[wire] < level:
                wire_depth[wire] = level

    return ConstraintReport(
        total_constraints=total,
        linear_constraints=total - nonlinear,
        nonlinear_constraints=nonlinear,
        per_component=per_component,
        component_shares=shares,
        depth=depth,
        sbox_chain_length=chain,
        parallel_groups=groups,
    )
