"""molzk: zero-knowledge threshold verification for molecular evaluation metrics.

A prover holding a repaired molecule's six-metric evaluation vector can
demonstrate — without revealing any metric or the structure — that the
vector clears a public threshold set, producing a Groth16 proof over
BN128, a Poseidon commitment binding the private inputs, and a nullifier
that lets verifiers reject resubmissions of the same molecule.
"""

from .circuit import (
    ConstraintReport,
    Witness,
    analyze,
    commitment,
    compute_witness,
    eval_native,
    nullifier,
    synthesize,
)
from .errors import (
    ConfigError,
    DataError,
    DecodeError,
    EmptyInputError,
    MetricOverflowError,
    MolzkError,
    ParameterError,
    ProverError,
    RegistryCorruptError,
    RegistryError,
    SetupError,
    SynthesisError,
    WitnessError,
)
from .field import FIELD_MODULUS, FieldElement
from .groth16 import Proof, ProofBundle, ProvingKey, VerifyingKey, prove, setup, verify
from .pipeline import (
    BenchReport,
    Corpus,
    PipelineError,
    RunOutcome,
    RunReport,
    SecurityReport,
    bench,
    make_corpus,
    run_batch,
    run_single,
    sample_salt,
    security_suite,
)
from .poseidon import PoseidonParams, generate_params, params_for_arity, permute
from .poseidon import hash as poseidon_hash
from .records import (
    Direction,
    EvaluationRecord,
    LoadResult,
    MetricVector,
    PrecheckReport,
    TaskType,
    ThresholdSet,
    load_records,
    normalize,
    precheck,
)
from .registry import NullifierSet, NullifierStatus
from .smiles import SmilesToken, TokenKind, ValidationReport, tokenize, validate

__version__ = "0.1.0"

__all__ = [
    "FIELD_MODULUS",
    "FieldElement",
    "PoseidonParams",
    "generate_params",
    "params_for_arity",
    "permute",
    "poseidon_hash",
    "SmilesToken",
    "TokenKind",
    "ValidationReport",
    "tokenize",
    "validate",
    "Direction",
    "EvaluationRecord",
    "LoadResult",
    "MetricVector",
    "PrecheckReport",
    "TaskType",
    "ThresholdSet",
    "load_records",
    "normalize",
    "precheck",
    "ConstraintReport",
    "Witness",
    "analyze",
    "commitment",
    "compute_witness",
    "eval_native",
    "nullifier",
    "synthesize",
    "Proof",
    "ProofBundle",
    "ProvingKey",
    "VerifyingKey",
    "setup",
    "prove",
    "verify",
    "NullifierSet",
    "NullifierStatus",
    "BenchReport",
    "Corpus",
    "PipelineError",
    "RunOutcome",
    "RunReport",
    "SecurityReport",
    "bench",
    "make_corpus",
    "run_batch",
    "run_single",
    "sample_salt",
    "security_suite",
    "MolzkError",
    "ParameterError",
    "DecodeError",
    "DataError",
    "EmptyInputError",
    "MetricOverflowError",
    "SynthesisError",
    "WitnessError",
    "SetupError",
    "ProverError",
    "RegistryError",
    "RegistryCorruptError",
    "ConfigError",
]
