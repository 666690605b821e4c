import json

import pytest

from molzk import groth16
from molzk.cli import main
from molzk.pipeline import corpus_to_jsonl, make_corpus


@pytest.fixture(scope="module")
def key_files(pk, vk, tmp_path_factory):
    tmp = tmp_path_factory.mktemp("keys")
    pk_path = tmp / "pk.json"
    vk_path = tmp / "vk.json"
    groth16.save_json(groth16.pk_to_json_dict(pk), str(pk_path))
    groth16.save_json(groth16.vk_to_json_dict(vk), str(vk_path))
    return str(pk_path), str(vk_path)


@pytest.fixture(scope="module")
def records_file(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("records")
    corpus = make_corpus(n_passing=2, n_failing=1, n_invalid=1, seed=3)
    path = tmp / "records.jsonl"
    path.write_text(corpus_to_jsonl(corpus))
    return str(path)


def test_validate_smiles_exit_codes(capsys):
    assert main(["validate-smiles", "CCO"]) == 0
    assert capsys.readouterr().out.strip() == "valid"
    assert main(["validate-smiles", "C1CC"]) == 1
    assert capsys.readouterr().out.strip() == "invalid"


def test_nullifiers_count_and_list(tmp_path, capsys):
    from molzk.field import FieldElement
    from molzk.registry import NullifierSet

    log = tmp_path / "n.log"
    with NullifierSet.open(str(log)) as registry:
        registry.check_and_insert(FieldElement(7))
        registry.check_and_insert(FieldElement(8))
    assert main(["nullifiers", "count", str(log)]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert main(["nullifiers", "list", str(log)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and all(line.startswith("0x") for line in lines)


def test_analyze_outputs_report(key_files, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["analyze", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert 500 <= report["total_constraints"] <= 20_000
    assert report["component_shares"]["hash"] >= 0.40
    assert (report["public_inputs"], report["private_inputs"], report["public_outputs"]) == (6, 7, 3)


def test_prove_verify_and_replay_flow(key_files, records_file, tmp_path, capsys):
    pk_path, vk_path = key_files
    out_dir = tmp_path / "bundles"
    assert main(["prove", "--pk", pk_path, "--records", records_file, "--out-dir", str(out_dir)]) == 0
    listing = json.loads(capsys.readouterr().out)
    assert len(listing["bundles"]) == 4

    bundle_path = str(out_dir / "pass-0000.bundle.json")
    registry_path = str(tmp_path / "cli.log")
    assert main(["verify", "--vk", vk_path, "--bundle", bundle_path, "--registry", registry_path]) == 0
    first = json.loads(capsys.readouterr().out)
    assert first["accepted"] and first["nullifier_status"] == "fresh"

    # resubmitting the same bundle is a replay -> exit 1
    assert main(["verify", "--vk", vk_path, "--bundle", bundle_path, "--registry", registry_path]) == 1
    second = json.loads(capsys.readouterr().out)
    assert second["proof_valid"] and second["nullifier_status"] == "replay"

    # a failing molecule's bundle verifies but exits 1 on its result slot
    fail_bundle = str(out_dir / "fail-0000.bundle.json")
    assert main(["verify", "--vk", vk_path, "--bundle", fail_bundle]) == 1
    failing = json.loads(capsys.readouterr().out)
    assert failing["proof_valid"] and failing["verification_result"] == 0


def test_verify_decode_error_exit_4(key_files, tmp_path, capsys):
    _, vk_path = key_files
    bad = tmp_path / "bad.bundle.json"
    bad.write_text("{\"molecule_id\": \"x\"")
    assert main(["verify", "--vk", vk_path, "--bundle", str(bad)]) == 4


def test_batch_with_malformed_line(key_files, records_file, tmp_path, capsys):
    pk_path, vk_path = key_files
    mixed = tmp_path / "mixed.jsonl"
    mixed.write_text(open(records_file).read() + "this is not json\n")
    out = tmp_path / "batch.json"
    code = main([
        "batch",
        "--pk", pk_path,
        "--vk", vk_path,
        "--records", str(mixed),
        "--registry", str(tmp_path / "batch.log"),
        "--out", str(out),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["attempted"] == 4
    assert report["succeeded"] == 2
    assert len(report["ingestion_rejects"]) == 1


def test_empty_records_exit_3(key_files, tmp_path):
    pk_path, _ = key_files
    empty = tmp_path / "empty.jsonl"
    empty.write_text("not json\n")
    assert main(["prove", "--pk", pk_path, "--records", str(empty), "--out-dir", str(tmp_path)]) == 3


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["verify"])  # missing required flags
    assert info.value.code == 2
