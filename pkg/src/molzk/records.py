"""Evaluation-record ingestion and fixed-point normalization.

Records arrive as JSON Lines, one molecule per line, carrying precomputed
evaluation metrics (the upstream toxicity model and cheminformatics scores
are not recomputed here). All real-valued metrics are scaled by 10^6 and
rounded to integers so the circuit can compare them exactly; the Lipinski
violation count is scaled by the same factor to keep one uniform comparator
width.

Ingestion is fault-tolerant: malformed lines become rejects, missing
optional fields get fail-closed defaults (absent evidence must not produce
a passing proof), and duplicate (molecule_id, task_id) pairs are rejected.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Optional, Union

from . import smiles as smiles_mod
from .errors import DataError, EmptyInputError, MetricOverflowError

SCALE = 10**6

RANGE_BOUND = 1 << 32

# Fail-closed defaults for absent optional metric fields.
DEFAULTS = {
    "safety": "toxic",
    "qed": 0.0,
    "sas": 10.0,
    "lipinski_violations": 99,
    "similarity": 0.0,
}


class TaskType(IntEnum):
    BINARY = 0
    REGRESSION = 1

    @classmethod
    def parse(cls, text: str) -> "TaskType":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise DataError(f"unknown task type {text!r}; expected 'binary' or 'regression'") from None


class Direction(Enum):
    GEQ = "geq"
    LEQ = "leq"
    EQ = "eq"


METRIC_NAMES = ("safe", "qed", "sas", "lip", "sim")


@dataclass(frozen=True)
class ThresholdSet:
    """Public thresholds, scaled by 10^6, plus comparison direction per metric."""

    theta_safe: int
    theta_qed: int
    theta_sas: int
    theta_lip: int
    theta_sim: int
    directions: dict = field(
        default_factory=lambda: {
            "safe": Direction.EQ,
            "qed": Direction.GEQ,
            "sas": Direction.LEQ,
            "lip": Direction.LEQ,
            "sim": Direction.GEQ,
        }
    )

    def __post_init__(self):
        for name, value in zip(METRIC_NAMES, self.scaled_values()):
            if not 0 <= value < RANGE_BOUND:
                raise DataError(f"threshold {name}={value} outside [0, 2^32)")

    @classmethod
    def defaults(cls, task_type: TaskType) -> "ThresholdSet":
        if task_type == TaskType.BINARY:
            safe, safe_dir = SCALE, Direction.EQ
        else:
            safe, safe_dir = SCALE // 2, Direction.GEQ
        return cls(
            theta_safe=safe,
            theta_qed=SCALE // 2,
            theta_sas=6 * SCALE,
            theta_lip=1 * SCALE,
            theta_sim=2 * SCALE // 5,
            directions={
                "safe": safe_dir,
                "qed": Direction.GEQ,
                "sas": Direction.LEQ,
                "lip": Direction.LEQ,
                "sim": Direction.GEQ,
            },
        )

    def scaled_values(self) -> list[int]:
        return [self.theta_safe, self.theta_qed, self.theta_sas, self.theta_lip, self.theta_sim]

    def to_json_dict(self) -> dict:
        data = {f"theta_{n}": v for n, v in zip(METRIC_NAMES, self.scaled_values())}
        data["directions"] = {n: d.value for n, d in self.directions.items()}
        return data

    @classmethod
    def from_json_dict(cls, data: dict, task_type: TaskType = TaskType.BINARY) -> "ThresholdSet":
        base = cls.defaults(task_type)
        values = {n: getattr(base, f"theta_{n}") for n in METRIC_NAMES}
        for name in METRIC_NAMES:
            if f"theta_{name}" in data:
                values[name] = int(data[f"theta_{name}"])
        directions = dict(base.directions)
        for name, d in data.get("directions", {}).items():
            if name not in directions:
                raise DataError(f"unknown metric {name!r} in thresholds")
            directions[name] = Direction(d)
        return cls(**{f"theta_{n}": v for n, v in values.items()}, directions=directions)


@dataclass
class EvaluationRecord:
    """One molecule's raw evaluation results, as delivered by upstream scoring."""

    molecule_id: str
    task_id: str
    task_type: TaskType
    safety_raw: Union[str, float]
    qed: float
    sas: float
    lipinski_violations: int
    similarity: float
    smiles: Optional[str] = None
    validity_flag: Optional[bool] = None


@dataclass(frozen=True)
class MetricVector:
    """Scaled integer metrics, ready to become circuit private inputs."""

    v_valid: int
    v_safe: int
    v_qed: int
    v_sas: int
    v_lip: int
    v_sim: int

    def as_tuple(self) -> tuple:
        return (self.v_valid, self.v_safe, self.v_qed, self.v_sas, self.v_lip, self.v_sim)


@dataclass
class RejectedLine:
    line_number: int
    reason: str


@dataclass
class LoadResult:
    records: list
    rejects: list
    warnings: list  # (line_number, message)


def _validate_ranges(data: dict, line_no: int):
    qed = data["qed"]
    if not 0.0 <= qed <= 1.0:
        raise DataError(f"qed={qed} outside [0, 1]")
    sas = data["sas"]
    if not 1.0 <= sas <= 10.0:
        raise DataError(f"sas={sas} outside [1, 10]")
    sim = data["similarity"]
    if not 0.0 <= sim <= 1.0:
        raise DataError(f"similarity={sim} outside [0, 1]")
    lip = data["lipinski_violations"]
    if not isinstance(lip, int) or isinstance(lip, bool) or lip < 0:
        raise DataError(f"lipinski_violations={lip!r} must be a non-negative integer")
    safety = data["safety"]
    if isinstance(safety, str):
        if safety not in ("toxic", "non-toxic"):
            raise DataError(f"safety label {safety!r} not in {{toxic, non-toxic}}")
    elif isinstance(safety, (int, float)) and not isinstance(safety, bool):
        if not 0.0 <= float(safety) <= 1.0:
            raise DataError(f"safety score {safety} outside [0, 1]")
    else:
        raise DataError(f"safety must be a label or a score, got {type(safety).__name__}")


def _parse_line(raw: str, line_no: int, warnings: list) -> EvaluationRecord:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DataError("record must be a JSON object")
    for key in ("molecule_id", "task_id", "task_type"):
        if key not in data:
            raise DataError(f"missing required field {key!r}")
    task_type = TaskType.parse(str(data["task_type"]))
    for key, default in DEFAULTS.items():
        if key not in data or data[key] is None:
            data[key] = default
            warnings.append((line_no, f"{key} missing; defaulted to {default!r}"))
    for key in ("qed", "sas", "similarity"):
        if not isinstance(data[key], (int, float)) or isinstance(data[key], bool) or not math.isfinite(data[key]):
            raise DataError(f"{key} must be a finite number, got {data[key]!r}")
        data[key] = float(data[key])
    _validate_ranges(data, line_no)
    return EvaluationRecord(
        molecule_id=str(data["molecule_id"]),
        task_id=str(data["task_id"]),
        task_type=task_type,
        safety_raw=data["safety"],
        qed=data["qed"],
        sas=data["sas"],
        lipinski_violations=data["lipinski_violations"],
        similarity=data["similarity"],
        smiles=data.get("smiles"),
        validity_flag=data.get("valid"),
    )


def load_records(source) -> LoadResult:
    """Parse JSON Lines evaluation results.

    `source` may be a path, bytes, or a file-like object. Malformed lines
    are collected as rejects rather than raised; an input with zero
    parsable records raises EmptyInputError.
    """
    if isinstance(source, bytes):
        stream = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        stream = open(source, "r", encoding="utf-8")
    elif hasattr(source, "read"):
        data = source.read()
        stream = io.StringIO(data.decode("utf-8") if isinstance(data, bytes) else data)
    else:
        raise DataError(f"unsupported record source {type(source).__name__}")

    records, rejects, warnings = [], [], []
    seen = set()
    try:
        for line_no, raw in enumerate(stream, start=1):
            raw = raw.strip()
            if not raw:
                rejects.append(RejectedLine(line_no, "blank line"))
                continue
            try:
                record = _parse_line(raw, line_no, warnings)
            except DataError as exc:
                rejects.append(RejectedLine(line_no, str(exc)))
                continue
            key = (record.molecule_id, record.task_id)
            if key in seen:
                rejects.append(RejectedLine(line_no, f"duplicate molecule_id/task_id {key}"))
                continue
            seen.add(key)
            records.append(record)
    finally:
        if isinstance(source, str):
            stream.close()

    if not records:
        raise EmptyInputError("no parsable records in input")
    return LoadResult(records, rejects, warnings)


def _scale_value(raw: float, name: str) -> int:
    scaled = round(raw * SCALE)
    if scaled >= RANGE_BOUND:
        raise MetricOverflowError(f"{name}={raw} scales to {scaled} >= 2^32")
    return scaled


def normalize(record: EvaluationRecord) -> MetricVector:
    """Map a raw record onto the scaled integer metric vector."""
    if record.validity_flag is not None:
        v_valid = 1 if record.validity_flag else 0
    elif record.smiles is not None:
        v_valid = 1 if smiles_mod.validate(record.smiles).valid else 0
    else:
        v_valid = 0

    safety = record.safety_raw
    if isinstance(safety, str):
        v_safe = SCALE if safety == "non-toxic" else 0
    elif record.task_type == TaskType.BINARY:
        v_safe = SCALE if float(safety) == 1.0 else 0
    else:
        v_safe = _scale_value(float(safety), "safety")

    v_lip = record.lipinski_violations * SCALE
    if v_lip >= RANGE_BOUND:
        raise MetricOverflowError(
            f"lipinski_violations={record.lipinski_violations} scales to {v_lip} >= 2^32"
        )
    return MetricVector(
        v_valid=v_valid,
        v_safe=v_safe,
        v_qed=_scale_value(record.qed, "qed"),
        v_sas=_scale_value(record.sas, "sas"),
        v_lip=v_lip,
        v_sim=_scale_value(record.similarity, "similarity"),
    )


@dataclass
class CheckResult:
    name: str
    passed: bool
    message: str = ""


@dataclass
class PrecheckReport:
    checks: list
    warnings: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def precheck(v: MetricVector, task_type: TaskType) -> PrecheckReport:
    """Range and consistency screening before witness generation."""
    checks = []
    warnings = []

    def check(name, passed, message=""):
        checks.append(CheckResult(name, passed, message))

    check("valid_boolean", v.v_valid in (0, 1), f"v_valid={v.v_valid}")
    check("safe_range", 0 <= v.v_safe <= SCALE, f"v_safe={v.v_safe}")
    check("qed_range", 0 <= v.v_qed <= SCALE, f"v_qed={v.v_qed}")
    check("sas_range", SCALE <= v.v_sas <= 10 * SCALE, f"v_sas={v.v_sas}")
    check(
        "lip_range",
        0 <= v.v_lip < RANGE_BOUND and v.v_lip % SCALE == 0,
        f"v_lip={v.v_lip}",
    )
    check("sim_range", 0 <= v.v_sim <= SCALE, f"v_sim={v.v_sim}")
    check(
        "word_size",
        all(0 <= x < RANGE_BOUND for x in v.as_tuple()),
        "all metrics must fit 32 bits",
    )
    if v.v_valid == 0 and any(x > 0 for x in (v.v_safe, v.v_qed, v.v_sim)):
        warnings.append(
            "v_valid=0 with nonzero downstream metrics; invalid molecules are not normally scored"
        )
    return PrecheckReport(checks, warnings)
