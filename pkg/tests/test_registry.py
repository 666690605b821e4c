import threading

import pytest

from molzk.errors import RegistryCorruptError
from molzk.field import FieldElement
from molzk.registry import NullifierSet, NullifierStatus


def test_absent_file_gives_empty_set(tmp_path):
    with NullifierSet.open(str(tmp_path / "new.log")) as registry:
        assert len(registry) == 0


def test_existing_entries_loaded(tmp_path):
    path = tmp_path / "seed.log"
    values = [FieldElement(v) for v in (1, 2, 3)]
    path.write_text("".join(v.to_hex() + "\n" for v in values))
    with NullifierSet.open(str(path)) as registry:
        assert len(registry) == 3
        assert all(v in registry for v in values)


def test_check_and_insert_fresh_then_replay(tmp_path):
    with NullifierSet.open(str(tmp_path / "r.log")) as registry:
        n = FieldElement(777)
        assert registry.check_and_insert(n) is NullifierStatus.FRESH
        assert registry.check_and_insert(n) is NullifierStatus.REPLAY
        assert len(registry) == 1


def test_idempotent_replay(tmp_path):
    with NullifierSet.open(str(tmp_path / "k.log")) as registry:
        n = FieldElement(31415)
        outcomes = [registry.check_and_insert(n) for _ in range(7)]
    assert outcomes.count(NullifierStatus.FRESH) == 1
    assert outcomes.count(NullifierStatus.REPLAY) == 6


def test_durability_roundtrip(tmp_path):
    path = str(tmp_path / "durable.log")
    inserted = [FieldElement(1000 + i) for i in range(25)]
    with NullifierSet.open(path) as registry:
        for n in inserted:
            registry.check_and_insert(n)
    with NullifierSet.open(path) as registry:
        assert len(registry) == 25
        assert registry.entries() == inserted  # already in ascending order
        assert all(registry.check_and_insert(n) is NullifierStatus.REPLAY for n in inserted)


def test_corrupt_line_named(tmp_path):
    path = tmp_path / "bad.log"
    path.write_text(FieldElement(5).to_hex() + "\nnot-a-nullifier\n")
    with pytest.raises(RegistryCorruptError) as info:
        NullifierSet.open(str(path))
    assert "line 2" in str(info.value)


def test_torn_final_line_truncated(tmp_path):
    path = tmp_path / "torn.log"
    path.write_text(FieldElement(5).to_hex() + "\n" + FieldElement(6).to_hex()[:30])
    with NullifierSet.open(str(path)) as registry:
        assert len(registry) == 1
        # the torn tail is gone; a rewrite of entry 6 is fresh again
        assert registry.check_and_insert(FieldElement(6)) is NullifierStatus.FRESH
    with NullifierSet.open(str(path)) as registry:
        assert len(registry) == 2


def test_concurrent_distinct_inserts_each_fresh_once(tmp_path):
    registry = NullifierSet.open(str(tmp_path / "conc.log"))
    fresh_counts = {}
    lock = threading.Lock()

    def worker(base):
        for i in range(100):
            value = base * 1000 + (i % 50)  # heavy cross-thread overlap
            status = registry.check_and_insert(FieldElement(value))
            if status is NullifierStatus.FRESH:
                with lock:
                    fresh_counts[value] = fresh_counts.get(value, 0) + 1

    threads = [threading.Thread(target=worker, args=(b,)) for b in range(1, 11)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    registry.close()
    assert all(count == 1 for count in fresh_counts.values())
    assert sum(fresh_counts.values()) == 10 * 50


def test_same_nullifier_concurrent_single_fresh(tmp_path):
    registry = NullifierSet.open(str(tmp_path / "race.log"))
    target = FieldElement(999_999)
    results = []
    lock = threading.Lock()

    def worker():
        status = registry.check_and_insert(target)
        with lock:
            results.append(status)

    threads = [threading.Thread(target=worker) for _ in range(50)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    registry.close()
    assert results.count(NullifierStatus.FRESH) == 1
    assert results.count(NullifierStatus.REPLAY) == 49
