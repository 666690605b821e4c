"""End-to-end runtime pipeline and the measurement harnesses built on it.

One molecule flows: normalize -> precheck -> fresh salt -> witness ->
prove -> verify -> nullifier check. The nullifier is recorded only after
the proof verifies (an unverifiable submission cannot burn a nullifier),
and it is recorded for result-0 molecules too: failing a threshold still
consumes the molecule's single verification slot.

Batch runs can parallelize the prover across worker processes; proof
verification and the registry's check-and-insert stay serialized in the
parent so replay decisions are strictly ordered.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from random import Random, SystemRandom
from typing import Optional

from . import circuit as circuit_mod
from . import groth16
from .errors import ConfigError, MolzkError
from .field import FIELD_MODULUS, FieldElement
from .groth16 import ProofBundle, ProvingKey, VerifyingKey
from .records import SCALE, EvaluationRecord, MetricVector, TaskType, ThresholdSet, normalize, precheck
from .registry import NullifierSet, NullifierStatus

try:
    import resource

    def _peak_memory_mb() -> Optional[float]:
        return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0

except ImportError:  # platform without a resource API

    def _peak_memory_mb() -> Optional[float]:
        return None


class PipelineError(MolzkError):
    """A pipeline phase failed; .phase names which one."""

    def __init__(self, phase: str, message: str):
        super().__init__(f"[{phase}] {message}")
        self.phase = phase


def sample_salt(rng=None) -> FieldElement:
    """Uniform field element via rejection sampling from 32-byte draws."""
    rng = rng or SystemRandom()
    while True:
        value = int.from_bytes(rng.randbytes(32), "big")
        if value < FIELD_MODULUS:
            return FieldElement(value)


@dataclass
class RunOutcome:
    accepted: bool
    bundle: Optional[ProofBundle]
    verification_result: Optional[int]
    nullifier_status: Optional[NullifierStatus]
    timings: dict
    error: Optional[str] = None
    error_phase: Optional[str] = None


def _build_bundle(record, theta, cs, pk, salt, rng, timings):
    t0 = time.perf_counter()
    try:
        vector = normalize(record)
    except MolzkError as exc:
        timings["normalize"] = time.perf_counter() - t0
        raise PipelineError("normalize", str(exc)) from exc
    report = precheck(vector, record.task_type)
    timings["normalize"] = time.perf_counter() - t0
    if not report.ok:
        bad = "; ".join(f"{c.name}: {c.message}" for c in report.checks if not c.passed)
        raise PipelineError("precheck", bad)

    t0 = time.perf_counter()
    try:
        witness = circuit_mod.compute_witness(vector, salt, theta, record.task_type, cs)
    except MolzkError as exc:
        raise PipelineError("witness", str(exc)) from exc
    timings["witness"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        proof = groth16.prove(pk, witness, rng)
    except MolzkError as exc:
        raise PipelineError("prove", str(exc)) from exc
    timings["prove"] = time.perf_counter() - t0

    bundle = ProofBundle(
        proof=proof,
        public_values=[FieldElement(v) for v in witness.public_values],
        molecule_id=record.molecule_id,
        task_id=record.task_id,
    )
    return bundle, witness.verification_result


def run_single(
    record: EvaluationRecord,
    pk: ProvingKey,
    vk: VerifyingKey,
    theta: ThresholdSet,
    registry: NullifierSet,
    rng=None,
) -> RunOutcome:
    """Run one molecule through the full pipeline against a live registry."""
    rng = rng or SystemRandom()
    timings = {}
    try:
        salt = sample_salt(rng)
        bundle, result = _build_bundle(
            record, theta, pk.constraint_system, pk, salt, rng, timings
        )
    except PipelineError as exc:
        return RunOutcome(False, None, None, None, timings, error=str(exc), error_phase=exc.phase)

    t0 = time.perf_counter()
    try:
        valid = groth16.verify(vk, bundle.public_values, bundle.proof)
    except MolzkError as exc:
        return RunOutcome(False, bundle, result, None, timings, error=str(exc), error_phase="verify")
    timings["verify"] = time.perf_counter() - t0

    if not valid:
        return RunOutcome(False, bundle, result, None, timings, error="proof failed verification", error_phase="verify")

    t0 = time.perf_counter()
    status = registry.check_and_insert(bundle.nullifier)
    timings["nullifier"] = time.perf_counter() - t0

    accepted = status is NullifierStatus.FRESH and result == 1
    return RunOutcome(accepted, bundle, result, status, timings)


@dataclass
class MoleculeRow:
    molecule_id: str
    task_id: str
    accepted: bool
    verification_result: Optional[int]
    nullifier_status: Optional[str]
    timings: dict
    error: Optional[str] = None
    error_phase: Optional[str] = None


@dataclass
class RunReport:
    rows: list
    attempted: int
    succeeded: int
    failed: int
    rejected: int
    total_time_s: float
    time_per_molecule_s: float
    throughput_mol_per_s: float
    success_rate: float
    phase_means_s: dict
    peak_memory_mb: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "rows": [
                {
                    "molecule_id": r.molecule_id,
                    "task_id": r.task_id,
                    "accepted": r.accepted,
                    "verification_result": r.verification_result,
                    "nullifier_status": r.nullifier_status,
                    "timings_s": {k: round(v, 6) for k, v in r.timings.items()},
                    "error": r.error,
                    "error_phase": r.error_phase,
                }
                for r in self.rows
            ],
            "attempted": self.attempted,
            "succeeded": self.succeeded,
            "failed": self.failed,
            "rejected": self.rejected,
            "total_time_s": round(self.total_time_s, 6),
            "time_per_molecule_s": round(self.time_per_molecule_s, 6),
            "throughput_mol_per_s": round(self.throughput_mol_per_s, 4),
            "success_rate": round(self.success_rate, 6),
            "phase_means_s": {k: round(v, 6) for k, v in self.phase_means_s.items()},
            "peak_memory_mb": self.peak_memory_mb,
        }


_WORKER_STATE = {}


def _batch_worker_init(pk, theta):
    _WORKER_STATE["pk"] = pk
    _WORKER_STATE["theta"] = theta


def _batch_worker(args):
    idx, record = args
    pk = _WORKER_STATE["pk"]
    theta = _WORKER_STATE["theta"]
    timings = {}
    rng = SystemRandom()
    try:
        bundle, result = _build_bundle(
            record, theta, pk.constraint_system, pk, sample_salt(rng), rng, timings
        )
        return (idx, bundle.to_json_dict(), result, timings, None, None)
    except PipelineError as exc:
        return (idx, None, None, timings, str(exc), exc.phase)


def run_batch(
    records,
    pk: ProvingKey,
    vk: VerifyingKey,
    theta: ThresholdSet,
    registry: NullifierSet,
    workers: int = 1,
    rng=None,
    collect_bundles: bool = False,
):
    """Process a batch; returns a RunReport (plus bundles when requested)."""
    records = list(records)
    if not records:
        raise ConfigError("run_batch needs at least one record")
    rng = rng or SystemRandom()
    start = time.perf_counter()
    staged = [None] * len(records)

    if workers <= 1:
        for idx, record in enumerate(records):
            timings = {}
            try:
                bundle, result = _build_bundle(
                    record, theta, pk.constraint_system, pk, sample_salt(rng), rng, timings
                )
                staged[idx] = (bundle, result, timings, None, None)
            except PipelineError as exc:
                staged[idx] = (None, None, timings, str(exc), exc.phase)
    else:
        with Pool(workers, initializer=_batch_worker_init, initargs=(pk, theta)) as pool:
            for idx, bundle_json, result, timings, err, phase in pool.imap_unordered(
                _batch_worker, list(enumerate(records))
            ):
                bundle = ProofBundle.from_json_dict(bundle_json) if bundle_json else None
                staged[idx] = (bundle, result, timings, err, phase)

    rows = []
    bundles = []
    succeeded = failed = rejected = 0
    for record, item in zip(records, staged):
        bundle, result, timings, err, phase = item
        if bundle is None:
            rejected += 1
            rows.append(
                MoleculeRow(record.molecule_id, record.task_id, False, None, None, timings, err, phase)
            )
            bundles.append(None)
            continue
        t0 = time.perf_counter()
        valid = groth16.verify(vk, bundle.public_values, bundle.proof)
        timings["verify"] = time.perf_counter() - t0
        status = None
        if valid:
            t0 = time.perf_counter()
            status = registry.check_and_insert(bundle.nullifier)
            timings["nullifier"] = time.perf_counter() - t0
        accepted = valid and status is NullifierStatus.FRESH and result == 1
        if accepted:
            succeeded += 1
        else:
            failed += 1
        rows.append(
            MoleculeRow(
                record.molecule_id,
                record.task_id,
                accepted,
                result,
                status.value if status else None,
                timings,
                None if valid else "proof failed verification",
                None if valid else "verify",
            )
        )
        bundles.append(bundle)

    total_time = time.perf_counter() - start
    attempted = len(records)
    phase_means = {}
    for phase_name in ("normalize", "witness", "prove", "verify", "nullifier"):
        values = [r.timings[phase_name] for r in rows if phase_name in r.timings]
        if values:
            phase_means[phase_name] = sum(values) / len(values)
    report = RunReport(
        rows=rows,
        attempted=attempted,
        succeeded=succeeded,
        failed=failed,
        rejected=rejected,
        total_time_s=total_time,
        time_per_molecule_s=total_time / attempted,
        throughput_mol_per_s=attempted / total_time if total_time > 0 else float("inf"),
        success_rate=succeeded / attempted,
        phase_means_s=phase_means,
        peak_memory_mb=_peak_memory_mb(),
    )
    if collect_bundles:
        return report, bundles
    return report


# ---------------------------------------------------------------------------
# Synthetic corpus
# ---------------------------------------------------------------------------

VALID_SMILES = (
    "CCO",
    "CC(=O)O",
    "c1ccccc1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "CN1C=NC2=C1C(=O)N(C)C(=O)N2C",
    "C1CCCCC1",
    "OC(=O)c1ccccc1O",
    "CCN(CC)CC",
    "CC(N)C(=O)O",
    "Clc1ccccc1",
)

INVALID_SMILES = (
    "C1CC",          # unmatched ring closure
    "CC(",           # unclosed branch
    "C)(C",          # branch close before open
    "C==O",          # doubled bond symbol
    "=CC",           # bond at start
    "CC.",           # trailing dot
    "C((C))",        # branch open after branch open
    "C%1O",          # percent ring closure needs two digits
    "C1CC1C2CC",     # second ring never closes
    "CC-",           # dangling bond
)


@dataclass
class Corpus:
    passing: list
    failing: list
    invalid_smiles: list

    def all_records(self) -> list:
        return list(self.passing) + list(self.failing) + list(self.invalid_smiles)


def _passing_metrics(rng: Random, task_type: TaskType, theta: ThresholdSet, boundary: bool):
    if boundary:
        # sit exactly on every threshold: GEQ/LEQ comparisons pass at equality
        qed = theta.theta_qed / SCALE
        sas = theta.theta_sas / SCALE
        lip = theta.theta_lip // SCALE
        sim = theta.theta_sim / SCALE
        safety = "non-toxic" if task_type == TaskType.BINARY else theta.theta_safe / SCALE
    else:
        qed = rng.uniform(theta.theta_qed / SCALE, 1.0)
        sas = rng.uniform(1.0, theta.theta_sas / SCALE)
        lip = rng.randint(0, theta.theta_lip // SCALE)
        sim = rng.uniform(theta.theta_sim / SCALE, 1.0)
        safety = "non-toxic" if task_type == TaskType.BINARY else rng.uniform(theta.theta_safe / SCALE, 1.0)
    return safety, qed, sas, lip, sim


def make_corpus(
    n_passing: int = 50,
    n_failing: int = 30,
    n_invalid: int = 30,
    task_type: TaskType = TaskType.BINARY,
    theta: Optional[ThresholdSet] = None,
    seed: int = 2024,
) -> Corpus:
    """Deterministic synthetic evaluation records following the threshold table.

    Passing records satisfy every rule (a fifth of them sit exactly on the
    thresholds), failing records are chemically well-formed but violate at
    least one rule, and invalid records carry malformed SMILES with
    fail-closed metric defaults.
    """
    theta = theta or ThresholdSet.defaults(task_type)
    rng = Random(seed)
    task_id = "tox-binary" if task_type == TaskType.BINARY else "tox-regression"

    passing = []
    for i in range(n_passing):
        safety, qed, sas, lip, sim = _passing_metrics(rng, task_type, theta, boundary=(i % 5 == 4))
        passing.append(
            EvaluationRecord(
                molecule_id=f"pass-{i:04d}",
                task_id=task_id,
                task_type=task_type,
                safety_raw=safety,
                qed=round(qed, 6),
                sas=round(sas, 6),
                lipinski_violations=lip,
                similarity=round(sim, 6),
                smiles=VALID_SMILES[i % len(VALID_SMILES)],
                validity_flag=True,
            )
        )

    failing = []
    for i in range(n_failing):
        safety, qed, sas, lip, sim = _passing_metrics(rng, task_type, theta, boundary=False)
        modes = rng.sample(("safety", "qed", "sas", "lip", "sim"), k=rng.randint(1, 3))
        if "safety" in modes:
            safety = "toxic" if task_type == TaskType.BINARY else rng.uniform(0.0, max(theta.theta_safe / SCALE - 1e-6, 0.0))
        if "qed" in modes:
            qed = rng.uniform(0.0, max(theta.theta_qed / SCALE - 1e-6, 0.0))
        if "sas" in modes:
            sas = rng.uniform(min(theta.theta_sas / SCALE + 1e-6, 10.0), 10.0)
        if "lip" in modes:
            lip = rng.randint(theta.theta_lip // SCALE + 1, theta.theta_lip // SCALE + 4)
        if "sim" in modes:
            sim = rng.uniform(0.0, max(theta.theta_sim / SCALE - 1e-6, 0.0))
        failing.append(
            EvaluationRecord(
                molecule_id=f"fail-{i:04d}",
                task_id=task_id,
                task_type=task_type,
                safety_raw=safety,
                qed=round(qed, 6),
                sas=round(sas, 6),
                lipinski_violations=lip,
                similarity=round(sim, 6),
                smiles=VALID_SMILES[(i + 3) % len(VALID_SMILES)],
                validity_flag=True,
            )
        )

    invalid = []
    for i in range(n_invalid):
        invalid.append(
            EvaluationRecord(
                molecule_id=f"invalid-{i:04d}",
                task_id=task_id,
                task_type=task_type,
                safety_raw="toxic",
                qed=0.0,
                sas=10.0,
                lipinski_violations=99,
                similarity=0.0,
                smiles=INVALID_SMILES[i % len(INVALID_SMILES)],
                validity_flag=None,  # let the syntactic validator decide
            )
        )
    return Corpus(passing, failing, invalid)


def corpus_to_jsonl(corpus: Corpus) -> str:
    """Serialize a corpus in the pipeline's JSON Lines input schema."""
    import json

    lines = []
    for record in corpus.all_records():
        entry = {
            "molecule_id": record.molecule_id,
            "task_id": record.task_id,
            "task_type": "binary" if record.task_type == TaskType.BINARY else "regression",
            "safety": record.safety_raw,
            "qed": record.qed,
            "sas": record.sas,
            "lipinski_violations": record.lipinski_violations,
            "similarity": record.similarity,
        }
        if record.smiles is not None:
            entry["smiles"] = record.smiles
        if record.validity_flag is not None:
            entry["valid"] = record.validity_flag
        lines.append(json.dumps(entry))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------

@dataclass
class BenchRow:
    molecules: int
    avg_total_time_s: float
    std_total_time_s: float
    time_per_molecule_s: float
    std_time_per_molecule_s: float
    throughput_mol_per_s: float
    std_throughput: float
    peak_memory_mb: Optional[float]
    success_rate_pct: float
    cv_total_time: float


@dataclass
class BenchReport:
    rows: list
    repeats: int
    phase_means_s: dict

    def to_json_dict(self) -> dict:
        return {
            "repeats": self.repeats,
            "phase_means_s": {k: round(v, 6) for k, v in self.phase_means_s.items()},
            "rows": [
                {
                    "molecules": r.molecules,
                    "avg_total_time_s": round(r.avg_total_time_s, 4),
                    "std_total_time_s": round(r.std_total_time_s, 4),
                    "time_per_molecule_s": round(r.time_per_molecule_s, 5),
                    "std_time_per_molecule_s": round(r.std_time_per_molecule_s, 5),
                    "throughput_mol_per_s": round(r.throughput_mol_per_s, 3),
                    "std_throughput": round(r.std_throughput, 3),
                    "peak_memory_mb": r.peak_memory_mb,
                    "success_rate_pct": round(r.success_rate_pct, 2),
                    "cv_total_time": round(r.cv_total_time, 4),
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        header = (
            "molecules,avg_total_time_s,std_total_time_s,time_per_molecule_s,"
            "std_time_per_molecule_s,throughput_mol_per_s,std_throughput,"
            "peak_memory_mb,success_rate_pct"
        )
        lines = [header]
        for r in self.rows:
            mem = f"{r.peak_memory_mb:.1f}" if r.peak_memory_mb is not None else ""
            lines.append(
                f"{r.molecules},{r.avg_total_time_s:.4f},{r.std_total_time_s:.4f},"
                f"{r.time_per_molecule_s:.5f},{r.std_time_per_molecule_s:.5f},"
                f"{r.throughput_mol_per_s:.3f},{r.std_throughput:.3f},{mem},"
                f"{r.success_rate_pct:.1f}"
            )
        return "\n".join(lines) + "\n"


def bench(
    pk: ProvingKey,
    vk: VerifyingKey,
    sizes,
    repeats: int = 3,
    theta: Optional[ThresholdSet] = None,
    task_type: TaskType = TaskType.BINARY,
    corpus=None,
    workers: int = 1,
    registry_dir: Optional[str] = None,
    seed: int = 7,
) -> BenchReport:
    """Scalability harness: run each input size `repeats` times on a passing corpus."""
    import os
    import tempfile

    sizes = list(sizes)
    if not sizes or min(sizes) < 1:
        raise ConfigError("bench needs positive sizes")
    if repeats < 1:
        raise ConfigError("bench needs at least one repeat")
    theta = theta or ThresholdSet.defaults(task_type)
    if corpus is None:
        corpus = make_corpus(
            n_passing=max(sizes), n_failing=0, n_invalid=0, task_type=task_type, theta=theta, seed=seed
        ).passing
    corpus = list(corpus)
    if len(corpus) < max(sizes):
        raise ConfigError(f"corpus has {len(corpus)} records, largest size is {max(sizes)}")

    rows = []
    phase_sums = {}
    phase_counts = {}
    with tempfile.TemporaryDirectory(dir=registry_dir) as tmp:
        run_idx = 0
        for size in sizes:
            totals, per_mol, throughputs, rates = [], [], [], []
            mems = []
            for _ in range(repeats):
                registry = NullifierSet.open(os.path.join(tmp, f"bench-{run_idx}.log"))
                run_idx += 1
                report = run_batch(corpus[:size], pk, vk, theta, registry, workers=workers)
                registry.close()
                totals.append(report.total_time_s)
                per_mol.append(report.time_per_molecule_s)
                throughputs.append(report.throughput_mol_per_s)
                rates.append(report.success_rate)
                if report.peak_memory_mb is not None:
                    mems.append(report.peak_memory_mb)
                for phase, mean in report.phase_means_s.items():
                    phase_sums[phase] = phase_sums.get(phase, 0.0) + mean
                    phase_counts[phase] = phase_counts.get(phase, 0) + 1
            std_total = statistics.stdev(totals) if len(totals) > 1 else 0.0
            rows.append(
                BenchRow(
                    molecules=size,
                    avg_total_time_s=statistics.mean(totals),
                    std_total_time_s=std_total,
                    time_per_molecule_s=statistics.mean(per_mol),
                    std_time_per_molecule_s=statistics.stdev(per_mol) if len(per_mol) > 1 else 0.0,
                    throughput_mol_per_s=statistics.mean(throughputs),
                    std_throughput=statistics.stdev(throughputs) if len(throughputs) > 1 else 0.0,
                    peak_memory_mb=max(mems) if mems else None,
                    success_rate_pct=100.0 * statistics.mean(rates),
                    cv_total_time=std_total / statistics.mean(totals) if statistics.mean(totals) else 0.0,
                )
            )
    phase_means = {k: phase_sums[k] / phase_counts[k] for k in phase_sums}
    return BenchReport(rows=rows, repeats=repeats, phase_means_s=phase_means)


# ---------------------------------------------------------------------------
# Security suite
# ---------------------------------------------------------------------------

@dataclass
class SecurityReport:
    completeness: tuple          # (passed, total)
    soundness: tuple             # (rejected, total)
    forged_witness: tuple        # (rejected, total)
    zero_knowledge: dict         # samples, mean_bit_entropy, leakage_findings
    attack_resistance: dict      # scenario -> bool

    @property
    def all_passed(self) -> bool:
        return (
            self.completeness[0] == self.completeness[1]
            and self.soundness[0] == self.soundness[1]
            and self.forged_witness[0] == self.forged_witness[1]
            and not self.zero_knowledge["leakage_findings"]
            and all(self.attack_resistance.values())
        )

    def to_json_dict(self) -> dict:
        return {
            "completeness": {"passed": self.completeness[0], "total": self.completeness[1]},
            "soundness": {"rejected": self.soundness[0], "total": self.soundness[1]},
            "forged_witness": {"rejected": self.forged_witness[0], "total": self.forged_witness[1]},
            "zero_knowledge": dict(self.zero_knowledge),
            "attack_resistance": dict(self.attack_resistance),
            "all_passed": self.all_passed,
        }


def _mean_bit_entropy(values, bits: int = 254) -> float:
    """Mean per-bit Shannon entropy across bit positions of the samples."""
    n = len(values)
    if n == 0:
        return 0.0
    total = 0.0
    for position in range(bits):
        ones = sum((v >> position) & 1 for v in values)
        p = ones / n
        if 0 < p < 1:
            total += -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
    return total / bits


def _leakage_scan(metric_values, salts, commitments, nullifiers) -> list:
    """Look for direct or affine relations exposing private inputs."""
    findings = []
    public = set(commitments) | set(nullifiers)
    for name, value in metric_values.items():
        if value in public:
            findings.append(f"metric {name} appears verbatim in a public output")
    # Affine probe: with v fixed, commitment as a + b*salt would leak the salt
    # (and with it, eventually, the metrics). Fit on two samples, test the rest.
    if len(salts) >= 3:
        s1, s2 = salts[0], salts[1]
        c1, c2 = commitments[0], commitments[1]
        ds = (s1 - s2) % FIELD_MODULUS
        if ds:
            slope = (c1 - c2) * pow(ds, FIELD_MODULUS - 2, FIELD_MODULUS) % FIELD_MODULUS
            intercept = (c1 - slope * s1) % FIELD_MODULUS
            if all(
                (slope * s + intercept) % FIELD_MODULUS == c
                for s, c in zip(salts[2:], commitments[2:])
            ):
                findings.append("commitment is an affine function of the salt")
    return findings


def security_suite(
    corpus: Corpus,
    pk: ProvingKey,
    vk: VerifyingKey,
    theta: Optional[ThresholdSet] = None,
    task_type: TaskType = TaskType.BINARY,
    registry_path: Optional[str] = None,
    zk_samples: int = 20,
    forgery_attempts: int = 20,
    workers: int = 1,
    rng=None,
) -> SecurityReport:
    """Formal checks: completeness, soundness, zero-knowledge, attack scenarios."""
    import os
    import tempfile

    theta = theta or ThresholdSet.defaults(task_type)
    rng = rng or SystemRandom()
    cs = pk.constraint_system
    invalid_records = list(corpus.invalid_smiles)
    failing_records = list(corpus.failing)
    passing_records = list(corpus.passing)
    if len(passing_records) < 50 or len(failing_records) + len(invalid_records) < 60:
        raise ConfigError(
            "security suite needs >= 50 passing and >= 60 failing/invalid records"
        )

    with tempfile.TemporaryDirectory() as tmp:
        path = registry_path or os.path.join(tmp, "suite.log")

        # Completeness: every conforming molecule yields an accepted bundle.
        registry = NullifierSet.open(path)
        report = run_batch(passing_records, pk, vk, theta, registry, workers=workers)
        completeness = (report.succeeded, len(passing_records))

        # Soundness: non-conforming inputs are rejected — either a verified
        # bundle whose result slot is 0, or an ingestion-level reject.
        sound_total = len(failing_records) + len(invalid_records)
        sound_report = run_batch(
            failing_records + invalid_records, pk, vk, theta, registry, workers=workers
        )
        sound_rejected = sum(
            1
            for row in sound_report.rows
            if (row.verification_result == 0) or (row.error is not None and row.verification_result is None)
        )
        registry.close()
        soundness = (sound_rejected, sound_total)

        # Forged witnesses: flip the result wire, the prover must refuse.
        forged_rejected = 0
        forgery_pool = (failing_records * ((forgery_attempts // max(len(failing_records), 1)) + 1))[:forgery_attempts]
        for record in forgery_pool:
            vector = normalize(record)
            witness = circuit_mod.compute_witness(vector, sample_salt(rng), theta, record.task_type, cs)
            witness.values[circuit_mod.WIRE_RESULT] = 1 - witness.values[circuit_mod.WIRE_RESULT]
            try:
                groth16.prove(pk, witness, rng)
            except groth16.ProverError:
                forged_rejected += 1
        forged = (forged_rejected, len(forgery_pool))

        # Zero-knowledge: fixed metric vector, fresh salts; inspect outputs.
        zk_record = passing_records[0]
        vector = normalize(zk_record)
        salts, commitments, nullifiers = [], [], []
        for _ in range(zk_samples):
            salt = sample_salt(rng)
            commit = circuit_mod.commitment(vector, salt)
            salts.append(int(salt))
            commitments.append(int(commit))
            nullifiers.append(int(circuit_mod.nullifier(commit, zk_record.task_type)))
        metric_values = dict(zip(("v_valid", "v_safe", "v_qed", "v_sas", "v_lip", "v_sim"), vector.as_tuple()))
        findings = _leakage_scan(metric_values, salts, commitments, nullifiers)
        if len(set(commitments)) != len(commitments):
            findings.append("commitment collision across salts")
        zero_knowledge = {
            "samples": zk_samples,
            "mean_bit_entropy": round(_mean_bit_entropy(commitments), 4),
            "leakage_findings": findings,
        }

        attack = {}

        # Boundary probing: each metric at threshold-1 / threshold / threshold+1
        # must match the reference evaluator exactly.
        boundary_ok = True
        base = MetricVector(1, SCALE if task_type == TaskType.BINARY else theta.theta_safe,
                            theta.theta_qed, theta.theta_sas, theta.theta_lip, theta.theta_sim)
        for name in ("v_safe", "v_qed", "v_sas", "v_lip", "v_sim"):
            for delta in (-1, 0, 1):
                fields = dict(zip(("v_valid", "v_safe", "v_qed", "v_sas", "v_lip", "v_sim"), base.as_tuple()))
                fields[name] = fields[name] + delta
                if fields[name] < 0:
                    continue
                probe = MetricVector(**fields)
                witness = circuit_mod.compute_witness(probe, sample_salt(rng), theta, task_type, cs)
                if witness.verification_result != circuit_mod.eval_native(probe, theta, task_type):
                    boundary_ok = False
        attack["boundary"] = boundary_ok

        # Type confusion: a task selector outside {0, 1} cannot reach a witness.
        try:
            circuit_mod.compute_witness(vector, sample_salt(rng), theta, 2, cs)
            attack["type_confusion"] = False
        except MolzkError:
            attack["type_confusion"] = True

        # Overflow injection: any metric >= 2^32 must fail witness generation.
        overflow_ok = True
        for name in ("v_safe", "v_qed", "v_sas", "v_lip", "v_sim"):
            fields = dict(zip(("v_valid", "v_safe", "v_qed", "v_sas", "v_lip", "v_sim"), vector.as_tuple()))
            fields[name] = 1 << 32
            try:
                circuit_mod.compute_witness(MetricVector(**fields), sample_salt(rng), theta, task_type, cs)
                overflow_ok = False
            except MolzkError:
                pass
        attack["overflow_injection"] = overflow_ok

        # Replay: resubmitting a verified molecule must be rejected.
        replay_registry = NullifierSet.open(os.path.join(tmp, "replay.log"))
        first = run_single(passing_records[1], pk, vk, theta, replay_registry, rng)
        second_status = replay_registry.check_and_insert(first.bundle.nullifier)
        attack["replay"] = (
            first.accepted
            and first.nullifier_status is NullifierStatus.FRESH
            and second_status is NullifierStatus.REPLAY
        )
        replay_registry.close()

    return SecurityReport(
        completeness=completeness,
        soundness=soundness,
        forged_witness=forged,
        zero_knowledge=zero_knowledge,
        attack_resistance=attack,
    )
