import json
import math

import numpy as np
import pytest

from carbonpairs import (
    PriorSpec,
    StoreCorruptionError,
    Triplet,
    TripletStore,
    posterior_from_dataset,
    posterior_from_prior,
    posterior_update,
    read_triplet_log,
)

from conftest import random_triplets


def flat_prior(m=3, sigma_p_sq=10.0, sigma_n_sq=1.0) -> PriorSpec:
    return PriorSpec(mean=np.zeros(m), sigma_p_sq=sigma_p_sq, sigma_n_sq=sigma_n_sq)


def test_first_append_gets_seq_one(tmp_path):
    with TripletStore(tmp_path / "t.log") as store:
        record = store.append_triplet("s1", 1, 2, 2.5)
    assert record.seq == 1
    assert record.i == 1 and record.j == 2 and record.y == 2.5


def test_append_then_load_roundtrip(tmp_path):
    with TripletStore(tmp_path / "t.log") as store:
        store.append_triplet("s1", 1, 2, 2.5)
        last = store.append_triplet("s1", 2, 3, math.pi)
        records = store.load_all()
    assert [r.seq for r in records] == [1, 2]
    assert records[-1] == last
    assert records[-1].y == math.pi  # full round-trip precision


def test_acknowledged_record_is_visible_to_fresh_reader(tmp_path):
    path = tmp_path / "t.log"
    store = TripletStore(path)
    store.append_triplet("s1", 3, 9, 0.125)
    # never closed: simulates the process dying right after the ack
    records = read_triplet_log(path)
    assert len(records) == 1
    assert records[0].i == 3 and records[0].j == 9 and records[0].y == 0.125


def test_non_canonical_orientation_rejected(tmp_path):
    with TripletStore(tmp_path / "t.log") as store:
        with pytest.raises(ValueError, match="i < j"):
            store.append_triplet("s1", 2, 1, 2.0)
        with pytest.raises(ValueError, match="i < j"):
            store.append_triplet("s1", 2, 2, 2.0)
        with pytest.raises(ValueError, match="positive"):
            store.append_triplet("s1", 1, 2, 0.0)


def test_empty_store_loads_empty(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        assert store.load_all() == []
    assert read_triplet_log(path) == []


def test_fresh_path_starts_empty(tmp_path):
    store = TripletStore(tmp_path / "fresh.log")
    assert store.load_all() == []
    store.close()


def test_torn_trailing_line_skipped_with_warning(tmp_path, caplog):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
        store.append_triplet("s1", 1, 3, 3.0)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write('{"seq":3,"session_id":"s1","ts":"2024-01-01T00:00:00+00:00","i":1,"j"')
    with caplog.at_level("WARNING"):
        records = read_triplet_log(path)
    assert len(records) == 2
    assert "torn trailing line" in caplog.text


def test_reopened_store_truncates_torn_tail_and_appends_cleanly(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write('{"seq":2,"session_id":"s1","ts":"2024-01-01T00:00:00+00:00","i":1')
    with TripletStore(path) as store:
        record = store.append_triplet("s1", 1, 3, 3.0)
    assert record.seq == 2
    records = read_triplet_log(path)  # no torn line left behind
    assert [(r.seq, r.i, r.j) for r in records] == [(1, 1, 2), (2, 1, 3)]


def test_reopened_store_restores_missing_final_newline(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
        store.append_triplet("s1", 1, 3, 3.0)
    raw = path.read_bytes()
    path.write_bytes(raw.rstrip(b"\n"))  # crash after the bytes, before the terminator
    with TripletStore(path) as store:
        store.append_triplet("s1", 2, 3, 4.0)
    assert [r.seq for r in read_triplet_log(path)] == [1, 2, 3]


def test_malformed_middle_line_is_corruption(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
        store.append_triplet("s1", 1, 3, 3.0)
    lines = path.read_text().splitlines()
    lines[0] = lines[0][:-5]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(StoreCorruptionError):
        read_triplet_log(path)


def test_seq_gap_is_corruption(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
        store.append_triplet("s1", 1, 3, 3.0)
        store.append_triplet("s1", 2, 3, 4.0)
    lines = path.read_text().splitlines()
    path.write_text("\n".join([lines[0], lines[2]]) + "\n")
    with pytest.raises(StoreCorruptionError, match="gapless"):
        read_triplet_log(path)


def test_non_canonical_stored_line_is_corruption(tmp_path):
    path = tmp_path / "t.log"
    line = {"seq": 1, "session_id": "s", "ts": "2024-01-01T00:00:00+00:00", "i": 5, "j": 2, "y": 2.0}
    path.write_text(json.dumps(line) + "\n" + json.dumps({**line, "seq": 2}) + "\n")
    with pytest.raises(StoreCorruptionError, match="canonical"):
        read_triplet_log(path)


def test_reopening_continues_the_sequence(tmp_path):
    path = tmp_path / "t.log"
    with TripletStore(path) as store:
        store.append_triplet("s1", 1, 2, 2.0)
    with TripletStore(path) as store:
        record = store.append_triplet("s2", 1, 3, 5.0)
    assert record.seq == 2
    assert [r.seq for r in read_triplet_log(path)] == [1, 2]


def test_rebuild_posterior_empty_store_is_prior(tmp_path):
    prior = flat_prior()
    with TripletStore(tmp_path / "t.log") as store:
        rebuilt = store.rebuild_posterior(prior)
    direct = posterior_from_prior(prior)
    assert np.array_equal(rebuilt.mean, direct.mean)
    assert np.array_equal(rebuilt.covariance, direct.covariance)


def test_rebuild_posterior_single_triplet_fixture(tmp_path):
    prior = flat_prior()
    with TripletStore(tmp_path / "t.log") as store:
        store.append_triplet("s1", 1, 2, math.e)
        rebuilt = store.rebuild_posterior(prior)
    assert rebuilt.mean == pytest.approx([10 / 21, -10 / 21, 0.0], abs=1e-12)
    assert rebuilt.covariance[0, 0] == pytest.approx(110 / 21, abs=1e-12)


def test_rebuild_matches_incrementally_built_posterior(tmp_path):
    rng = np.random.default_rng(41)
    prior = flat_prior(m=6)
    live = posterior_from_prior(prior)
    with TripletStore(tmp_path / "t.log") as store:
        for i, j, y in random_triplets(rng, 6, 80):
            a, b = (i, j) if i < j else (j, i)
            ratio = y if i < j else 1.0 / y
            store.append_triplet("s1", a, b, ratio)
            live = posterior_update(live, Triplet(a, b, ratio), prior)
        rebuilt = store.rebuild_posterior(prior)
    assert np.max(np.abs(rebuilt.mean - live.mean)) < 1e-8
    assert np.max(np.abs(rebuilt.covariance - live.covariance)) < 1e-8


def test_replay_is_deterministic(tmp_path):
    rng = np.random.default_rng(43)
    prior = flat_prior(m=5)
    with TripletStore(tmp_path / "t.log") as store:
        for i, j, y in random_triplets(rng, 5, 30):
            a, b = sorted((i, j))
            store.append_triplet("s1", a, b, y)
    first = TripletStore(tmp_path / "t.log").rebuild_posterior(prior)
    second = TripletStore(tmp_path / "t.log").rebuild_posterior(prior)
    assert np.array_equal(first.mean, second.mean)
    assert np.array_equal(first.covariance, second.covariance)
