"""Command-line interface.

Subcommands: setup, prove, verify, batch, bench, analyze, security-suite,
validate-smiles, nullifiers. Exit codes: 0 success, 1 verification
failure or replay, 2 usage error, 3 data error, 4 crypto/decode error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from random import SystemRandom

from . import circuit as circuit_mod
from . import groth16, pipeline, smiles
from .errors import (
    ConfigError,
    DataError,
    DecodeError,
    MolzkError,
    ParameterError,
    ProverError,
    RegistryError,
    SetupError,
)
from .records import TaskType, ThresholdSet, load_records
from .registry import NullifierSet, NullifierStatus

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CRYPTO = 4


def _emit(data: dict, out_path):
    text = json.dumps(data, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _theta_from_args(args) -> tuple:
    task_type = TaskType.parse(args.tasktype)
    if args.thresholds:
        raw = args.thresholds
        data = json.loads(open(raw).read() if os.path.exists(raw) else raw)
        theta = ThresholdSet.from_json_dict(data, task_type)
    else:
        theta = ThresholdSet.defaults(task_type)
    return theta, task_type


def _load_pk(path: str) -> groth16.ProvingKey:
    return groth16.pk_from_json_dict(groth16.load_json(path))


def _load_vk(path: str) -> groth16.VerifyingKey:
    return groth16.vk_from_json_dict(groth16.load_json(path))


def _cmd_setup(args) -> int:
    theta, task_type = _theta_from_args(args)
    cs = circuit_mod.synthesize(theta, task_type)
    pk, vk = groth16.setup(cs, SystemRandom())
    os.makedirs(args.out_dir, exist_ok=True)
    pk_path = os.path.join(args.out_dir, "pk.json")
    vk_path = os.path.join(args.out_dir, "vk.json")
    groth16.save_json(groth16.pk_to_json_dict(pk), pk_path)
    groth16.save_json(groth16.vk_to_json_dict(vk), vk_path)
    report = circuit_mod.analyze(cs)
    print(
        json.dumps(
            {
                "proving_key": pk_path,
                "verifying_key": vk_path,
                "constraints": report.total_constraints,
                "circuit_digest": pk.circuit_digest,
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_prove(args) -> int:
    theta, _ = _theta_from_args(args)
    pk = _load_pk(args.pk)
    result = load_records(args.records)
    os.makedirs(args.out_dir, exist_ok=True)
    rng = SystemRandom()
    written = []
    for record in result.records:
        timings = {}
        bundle, _ = pipeline._build_bundle(
            record, theta, pk.constraint_system, pk, pipeline.sample_salt(rng), rng, timings
        )
        path = os.path.join(args.out_dir, f"{record.molecule_id}.bundle.json")
        groth16.save_json(bundle.to_json_dict(), path)
        written.append(path)
    print(json.dumps({"bundles": written, "rejects": len(result.rejects)}, indent=2))
    return EXIT_OK


def _cmd_verify(args) -> int:
    vk = _load_vk(args.vk)
    bundle = groth16.ProofBundle.from_json_dict(groth16.load_json(args.bundle))
    valid = groth16.verify(vk, bundle.public_values, bundle.proof)
    status = None
    if valid and args.registry:
        with NullifierSet.open(args.registry) as registry:
            status = registry.check_and_insert(bundle.nullifier)
    accepted = valid and bundle.verification_result == 1 and status is not NullifierStatus.REPLAY
    print(
        json.dumps(
            {
                "molecule_id": bundle.molecule_id,
                "proof_valid": valid,
                "verification_result": bundle.verification_result,
                "nullifier_status": status.value if status else None,
                "accepted": accepted,
            },
            indent=2,
        )
    )
    return EXIT_OK if accepted else EXIT_REJECTED


def _cmd_batch(args) -> int:
    theta, _ = _theta_from_args(args)
    pk = _load_pk(args.pk)
    vk = _load_vk(args.vk)
    result = load_records(args.records)
    with NullifierSet.open(args.registry) as registry:
        report = pipeline.run_batch(
            result.records, pk, vk, theta, registry, workers=args.workers
        )
    data = report.to_json_dict()
    data["ingestion_rejects"] = [
        {"line": r.line_number, "reason": r.reason} for r in result.rejects
    ]
    data["ingestion_warnings"] = [{"line": n, "message": m} for n, m in result.warnings]
    _emit(data, args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    theta, task_type = _theta_from_args(args)
    pk = _load_pk(args.pk)
    vk = _load_vk(args.vk)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = pipeline.bench(
        pk,
        vk,
        sizes,
        repeats=args.repeats,
        theta=theta,
        task_type=task_type,
        workers=args.workers,
    )
    _emit(report.to_json_dict(), args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    return EXIT_OK


def _cmd_analyze(args) -> int:
    if args.pk:
        cs = _load_pk(args.pk).constraint_system
    else:
        theta, task_type = _theta_from_args(args)
        cs = circuit_mod.synthesize(theta, task_type)
    _emit(circuit_mod.analyze(cs).to_json_dict(), args.out)
    return EXIT_OK


def _cmd_security_suite(args) -> int:
    theta, task_type = _theta_from_args(args)
    pk = _load_pk(args.pk)
    vk = _load_vk(args.vk)
    corpus = pipeline.make_corpus(
        n_passing=args.passing,
        n_failing=args.failing,
        n_invalid=args.invalid,
        task_type=task_type,
        theta=theta,
        seed=args.seed,
    )
    report = pipeline.security_suite(
        corpus, pk, vk, theta=theta, task_type=task_type, workers=args.workers
    )
    _emit(report.to_json_dict(), args.out)
    return EXIT_OK if report.all_passed else EXIT_REJECTED


def _cmd_validate_smiles(args) -> int:
    report = smiles.validate(args.smiles)
    for position, message in report.errors:
        print(f"error at {position}: {message}", file=sys.stderr)
    for position, message in report.warnings:
        print(f"warning at {position}: {message}", file=sys.stderr)
    print("valid" if report.valid else "invalid")
    return EXIT_OK if report.valid else EXIT_REJECTED


def _cmd_nullifiers(args) -> int:
    with NullifierSet.open(args.path) as registry:
        if args.action == "count":
            print(len(registry))
        else:
            for entry in registry.entries():
                print(entry.to_hex())
    return EXIT_OK


def _add_threshold_args(parser):
    parser.add_argument("--tasktype", default="binary", choices=("binary", "regression"))
    parser.add_argument(
        "--thresholds",
        default=None,
        help="threshold overrides: inline JSON or a path to a JSON file (scaled integers)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molzk",
        description="Zero-knowledge threshold verification for molecular evaluation metrics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="run the trusted setup, writing pk.json and vk.json")
    _add_threshold_args(p)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_setup)

    p = sub.add_parser("prove", help="build proof bundles for evaluation records")
    _add_threshold_args(p)
    p.add_argument("--pk", required=True)
    p.add_argument("--records", required=True, help="JSON Lines evaluation records")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("verify", help="verify one proof bundle")
    p.add_argument("--vk", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--registry", default=None, help="nullifier log; enables replay detection")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("batch", help="prove+verify a record file against a registry")
    _add_threshold_args(p)
    p.add_argument("--pk", required=True)
    p.add_argument("--vk", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--registry", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("bench", help="scalability benchmark on a synthetic passing corpus")
    _add_threshold_args(p)
    p.add_argument("--pk", required=True)
    p.add_argument("--vk", required=True)
    p.add_argument("--sizes", default="10,50,100")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("analyze", help="constraint-system complexity report")
    _add_threshold_args(p)
    p.add_argument("--pk", default=None, help="analyze the circuit embedded in a proving key")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("security-suite", help="completeness/soundness/ZK/attack checks")
    _add_threshold_args(p)
    p.add_argument("--pk", required=True)
    p.add_argument("--vk", required=True)
    p.add_argument("--passing", type=int, default=50)
    p.add_argument("--failing", type=int, default=30)
    p.add_argument("--invalid", type=int, default=30)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_security_suite)

    p = sub.add_parser("validate-smiles", help="grammar-level SMILES validation")
    p.add_argument("smiles")
    p.set_defaults(func=_cmd_validate_smiles)

    p = sub.add_parser("nullifiers", help="inspect a nullifier log")
    p.add_argument("action", choices=("list", "count"))
    p.add_argument("path")
    p.set_defaults(func=_cmd_nullifiers)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, RegistryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DecodeError, SetupError, ProverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except MolzkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
