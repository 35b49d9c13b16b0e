import copy
import json
import random

import pytest

from conftest import random_stream
from keytrie import EngineConfig, Message, PredictionEngine, load_snapshot, save_snapshot
from keytrie.snapshot import SnapshotError, engine_from_dict, engine_to_dict


def trained_engine(**kwargs):
    engine = PredictionEngine(EngineConfig(**kwargs))
    engine.accelerate([Message(100, "dog dog dot"), Message(50000, "cat car")])
    return engine


def test_roundtrip_preserves_structure(tmp_path):
    engine = trained_engine(partitions=4, word_budget=50)
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    loaded = load_snapshot(path)
    assert engine_to_dict(loaded) == engine_to_dict(engine)
    for trie in loaded.tries:
        trie.validate()


def test_roundtrip_preserves_counts(tmp_path):
    engine = trained_engine()
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    loaded = load_snapshot(path)
    assert loaded.words_learned() == engine.words_learned()
    assert [t.node_count for t in loaded.tries] == [t.node_count for t in engine.tries]


def test_dynamic_state_not_persisted(tmp_path):
    engine = trained_engine(diff=1)
    engine.handle_keystroke("d", 60000)
    engine.handle_keystroke("x", 60001, feedback=True)
    assert engine.idle and engine.n_t == 4
    engine.handle_keystroke(" ", 60002)
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    loaded = load_snapshot(path)
    assert loaded.n_t == loaded.config.n_initial
    assert loaded.idle is False
    assert loaded.feedback_streak == 0
    assert len(loaded.last_prediction) == 0


def test_future_predictions_identical_from_word_boundary(tmp_path):
    # huge conf/diff and no feedback keep session dynamics at their defaults,
    # so the loaded engine and the uninterrupted one must agree keystroke by
    # keystroke on any continuation stream.
    engine = PredictionEngine(EngineConfig(partitions=2, conf=10**9, diff=10**9,
                                           n_initial=4))
    engine.accelerate([Message(i * 40, t) for i, t in
                       enumerate(["dog dig dug", "cat cot", "dog cat", "mud mad"])])
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    rng = random.Random(17)
    for _ in range(40):
        uninterrupted = copy.deepcopy(engine)
        loaded = load_snapshot(path)
        for ch, ts, _ in random_stream(rng, 80, alphabet="dogcatimu", start_ts=10**6):
            a = uninterrupted.handle_keystroke(ch, ts)
            b = loaded.handle_keystroke(ch, ts)
            assert a.entries == b.entries


def test_rejects_wrong_version(tmp_path):
    engine = trained_engine()
    data = engine_to_dict(engine)
    data["format_version"] = 99
    path = tmp_path / "s.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(SnapshotError):
        load_snapshot(path)


def test_rejects_partition_mismatch():
    engine = trained_engine(partitions=2)
    data = engine_to_dict(engine)
    data["tries"] = data["tries"][:1]
    with pytest.raises(SnapshotError):
        engine_from_dict(data)


def test_rejects_garbage_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text("{nope", encoding="utf-8")
    with pytest.raises(SnapshotError):
        load_snapshot(path)


def test_config_separators_roundtrip(tmp_path):
    config = EngineConfig(word_separators=frozenset(" .,"), word_budget=7,
                          tz_offset=7200)
    engine = PredictionEngine(config)
    engine.accelerate([Message(10, "a.b c")])
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    loaded = load_snapshot(path)
    assert loaded.config == config
    assert loaded.words_learned() == 3


def test_lru_survives_roundtrip(tmp_path):
    engine = PredictionEngine(EngineConfig(word_budget=2))
    engine.accelerate([Message(1, "old"), Message(2, "mid"), Message(3, "new")])
    path = tmp_path / "s.json"
    save_snapshot(engine, path)
    loaded = load_snapshot(path)
    # completing one more word must evict the least recent of the stored ones
    loaded.handle_keystroke("x", 10)
    loaded.handle_keystroke(" ", 11)
    words = {w for w, _, _ in loaded.tries[0].iter_words()}
    assert "mid" not in words  # "old" was already evicted pre-save
    assert words == {"new", "x"}
