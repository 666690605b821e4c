import random

import pytest

from reference_eval import table_checker

from molzk import circuit as circuit_mod
from molzk.circuit import (
    WIRE_COMMITMENT,
    WIRE_NULLIFIER,
    WIRE_RESULT,
    analyze,
    commitment,
    compute_witness,
    eval_native,
    nullifier,
    synthesize,
)
from molzk.errors import SynthesisError, WitnessError
from molzk.field import FieldElement
from molzk.r1cs import ConstraintSystem
from molzk.records import SCALE, MetricVector, TaskType, ThresholdSet

RNG_BOUNDS = dict(
    v_valid=(0, 1),
    v_safe=(0, SCALE),
    v_qed=(0, SCALE),
    v_sas=(SCALE, 10 * SCALE),
    v_lip=(0, 4),
    v_sim=(0, SCALE),
)


def random_vector(rng):
    return MetricVector(
        v_valid=rng.randint(*RNG_BOUNDS["v_valid"]),
        v_safe=rng.randint(*RNG_BOUNDS["v_safe"]),
        v_qed=rng.randint(*RNG_BOUNDS["v_qed"]),
        v_sas=rng.randint(*RNG_BOUNDS["v_sas"]),
        v_lip=rng.randint(*RNG_BOUNDS["v_lip"]) * SCALE,
        v_sim=rng.randint(*RNG_BOUNDS["v_sim"]),
    )


def check_against_reference(v, theta, task_type):
    return table_checker(
        *v.as_tuple(),
        theta.theta_safe,
        theta.theta_qed,
        theta.theta_sas,
        theta.theta_lip,
        theta.theta_sim,
        task_type == TaskType.REGRESSION,
    )


PASSING = MetricVector(1, SCALE, 700_000, 3 * SCALE, 0, 600_000)


def test_eval_native_best_vector(theta_binary):
    v = MetricVector(1, SCALE, SCALE, SCALE, 0, SCALE)
    assert eval_native(v, theta_binary, TaskType.BINARY) == 1


def test_eval_native_qed_boundary(theta_binary):
    at = MetricVector(1, SCALE, 500_000, 3 * SCALE, 0, 600_000)
    below = MetricVector(1, SCALE, 499_999, 3 * SCALE, 0, 600_000)
    assert eval_native(at, theta_binary, TaskType.BINARY) == 1
    assert eval_native(below, theta_binary, TaskType.BINARY) == 0


def test_eval_native_matches_brute_force(theta_binary, theta_regression):
    rng = random.Random(21)
    for _ in range(2000):
        v = random_vector(rng)
        for theta, task in ((theta_binary, TaskType.BINARY), (theta_regression, TaskType.REGRESSION)):
            assert eval_native(v, theta, task) == check_against_reference(v, theta, task)


def test_synthesize_deterministic(theta_binary):
    first = synthesize(theta_binary, TaskType.BINARY)
    second = synthesize(theta_binary, TaskType.BINARY)
    assert first.num_wires == second.num_wires
    assert first.constraints == second.constraints


def test_synthesize_rejects_oversized_threshold():
    theta = ThresholdSet.defaults(TaskType.BINARY)
    object.__setattr__(theta, "theta_sas", 1 << 33)
    with pytest.raises(SynthesisError):
        synthesize(theta, TaskType.BINARY)


def test_witness_satisfies_and_matches_native(cs, theta_binary):
    rng = random.Random(22)
    salt = FieldElement(rng.randrange(2**250))
    witness = compute_witness(PASSING, salt, theta_binary, TaskType.BINARY, cs)
    cs.assert_satisfied(witness.values)
    assert witness.verification_result == 1
    assert witness.public_values[6] == 1
    assert int(witness.commitment) == int(commitment(PASSING, salt))
    assert int(witness.nullifier) == int(nullifier(witness.commitment, TaskType.BINARY))


def test_failing_vector_still_satisfiable(cs, theta_binary):
    v = MetricVector(1, 0, 700_000, 3 * SCALE, 0, 600_000)
    witness = compute_witness(v, FieldElement(5), theta_binary, TaskType.BINARY, cs)
    cs.assert_satisfied(witness.values)
    assert witness.verification_result == 0


def test_random_vectors_satisfiable_and_agree(cs, theta_binary, theta_regression):
    rng = random.Random(23)
    for i in range(300):
        v = random_vector(rng)
        task = TaskType.BINARY if i % 2 else TaskType.REGRESSION
        theta = theta_binary if task == TaskType.BINARY else theta_regression
        witness = compute_witness(v, FieldElement(rng.randrange(2**250)), theta, task, cs)
        assert witness.verification_result == eval_native(v, theta, task)
        if i % 25 == 0:
            cs.assert_satisfied(witness.values)


def test_boundary_grid(cs, theta_binary, theta_regression):
    rng = random.Random(24)
    for theta, task in ((theta_binary, TaskType.BINARY), (theta_regression, TaskType.REGRESSION)):
        base = dict(
            v_valid=1,
            v_safe=SCALE if task == TaskType.BINARY else theta.theta_safe,
            v_qed=theta.theta_qed,
            v_sas=theta.theta_sas,
            v_lip=theta.theta_lip,
            v_sim=theta.theta_sim,
        )
        for name in ("v_safe", "v_qed", "v_sas", "v_lip", "v_sim"):
            for delta in (-1, 0, 1):
                fields = dict(base)
                fields[name] += delta
                if fields[name] < 0:
                    continue
                v = MetricVector(**fields)
                witness = compute_witness(v, FieldElement(rng.randrange(2**250)), theta, task, cs)
                expected = eval_native(v, theta, task)
                assert witness.verification_result == expected
                assert expected == check_against_reference(v, theta, task)
                cs.assert_satisfied(witness.values)


def test_commitment_determinism_and_salt_sensitivity():
    rng = random.Random(25)
    salt = FieldElement(rng.randrange(2**250))
    assert commitment(PASSING, salt) == commitment(PASSING, salt)
    for _ in range(200):
        s1 = FieldElement(rng.randrange(2**250))
        s2 = FieldElement(rng.randrange(2**250))
        if s1 != s2:
            assert commitment(PASSING, s1) != commitment(PASSING, s2)


def test_nullifier_task_sensitivity():
    rng = random.Random(26)
    for _ in range(100):
        c = FieldElement(rng.randrange(2**250))
        assert nullifier(c, TaskType.BINARY) != nullifier(c, TaskType.REGRESSION)
        assert nullifier(c, TaskType.BINARY) == nullifier(c, TaskType.BINARY)


def test_flipped_result_wire_unsatisfiable(cs, theta_binary):
    for vector in (PASSING, MetricVector(1, 0, 700_000, 3 * SCALE, 0, 600_000)):
        witness = compute_witness(vector, FieldElement(9), theta_binary, TaskType.BINARY, cs)
        witness.values[WIRE_RESULT] = 1 - witness.values[WIRE_RESULT]
        assert not cs.is_satisfied(witness.values)


def test_tampered_output_wires_unsatisfiable(cs, theta_binary):
    witness = compute_witness(PASSING, FieldElement(10), theta_binary, TaskType.BINARY, cs)
    for wire in (WIRE_COMMITMENT, WIRE_NULLIFIER):
        tampered = list(witness.values)
        tampered[wire] = (tampered[wire] + 1) % circuit_mod.FIELD_MODULUS
        assert not cs.is_satisfied(tampered)


def test_witness_overflow_rejected(cs, theta_binary):
    for name in ("v_safe", "v_qed", "v_sas", "v_lip", "v_sim"):
        fields = dict(zip(("v_valid", "v_safe", "v_qed", "v_sas", "v_lip", "v_sim"), PASSING.as_tuple()))
        fields[name] = 1 << 32
        with pytest.raises(WitnessError):
            compute_witness(MetricVector(**fields), FieldElement(1), theta_binary, TaskType.BINARY, cs)


def test_witness_rejects_non_boolean_inputs(cs, theta_binary):
    bad_valid = MetricVector(2, SCALE, 700_000, 3 * SCALE, 0, 600_000)
    with pytest.raises(WitnessError):
        compute_witness(bad_valid, FieldElement(1), theta_binary, TaskType.BINARY, cs)
    with pytest.raises(WitnessError):
        compute_witness(PASSING, FieldElement(1), theta_binary, 2, cs)


def test_analyze_report(cs):
    report = analyze(cs)
    assert report.total_constraints == len(cs.constraints)
    assert report.linear_constraints + report.nonlinear_constraints == report.total_constraints
    assert set(report.per_component) == {
        "hash", "safety", "qed", "sas", "lipinski", "similarity", "validity", "glue",
    }
    assert sum(report.per_component.values()) == report.total_constraints
    assert report.component_shares["hash"] >= 0.40
    assert report.depth <= 32
    assert report.depth >= 1
    assert report.sbox_chain_length > 100  # sequential Poseidon rounds
    assert report.parallel_groups >= 2
    assert (report.public_inputs, report.private_inputs, report.public_outputs) == (6, 7, 3)


def test_analyze_empty_system():
    empty = ConstraintSystem(num_wires=1, num_public=1, constraints=[], stages=[])
    report = analyze(empty)
    assert report.total_constraints == 0
    assert report.depth == 0
    assert report.per_component == {}


def test_public_input_ordering(cs, theta_binary):
    # normative order: [t, th_safe, th_qed, th_sas, th_lip, th_sim, result, commitment, nullifier]
    witness = compute_witness(PASSING, FieldElement(77), theta_binary, TaskType.BINARY, cs)
    publics = witness.public_values
    assert publics[0] == 0  # binary task encoding
    assert publics[1:6] == theta_binary.scaled_values()
    assert publics[6] == witness.verification_result
    assert publics[7] == int(witness.commitment)
    assert publics[8] == int(witness.nullifier)
