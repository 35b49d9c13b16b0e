import numpy as np
import pytest

from keytrie import EngineConfig, Variant
from keytrie.accel import NUMBA_ENABLED, py_func
from keytrie import kernels
from keytrie.simulate import SimulationPlan, run_simulation
from keytrie.synth import session_corpus


def test_build_vocab_sorted_by_code_point():
    msgs = session_corpus(5, vocab_size=10, seed=0)
    vocab, index = kernels.build_vocab(msgs, ["zz"], [" "])
    assert vocab == sorted(vocab)
    assert [index[ch] for ch in vocab] == list(range(len(vocab)))
    assert "z" in index and " " in index


def test_encode_messages_roundtrip():
    msgs = session_corpus(8, vocab_size=10, seed=1)
    vocab, index = kernels.build_vocab(msgs, [], [" "])
    chars, off, ts = kernels.encode_messages(msgs, index)
    assert off[-1] == sum(len(m.text) for m in msgs)
    rebuilt = "".join(vocab[i] for i in chars[off[3]:off[4]])
    assert rebuilt == msgs[3].text
    assert list(ts) == [m.ts for m in msgs]


def test_encode_words():
    chars, off = kernels.encode_words(["ab", "c"], {"a": 0, "b": 1, "c": 2})
    assert list(chars) == [0, 1, 2]
    assert list(off) == [0, 2, 3]


def test_partition_kernel_matches_engine():
    from keytrie import partition_of
    part = py_func(kernels._partition)
    for ts in (0, 3600, 43199, 43200, 86399, 86400 * 3 + 7):
        for T in (1, 2, 7, 24):
            assert part(ts, T, 0) == partition_of(ts, T)
            assert part(ts, T, 3600) == partition_of(ts, T, tz_offset=3600)


@pytest.mark.skipif(not NUMBA_ENABLED, reason="numba disabled; default path already interpreted")
def test_interpreted_row_matches_jitted():
    # the pure fallback (py_func) must produce identical results to the jit path
    msgs = session_corpus(40, vocab_size=12, seed=7)
    cfg = EngineConfig(partitions=2, word_budget=15)
    _, index = kernels.build_vocab(msgs, [], [cfg.separator_char])
    chars, msg_off, msg_ts = kernels.encode_messages(msgs, index)
    is_sep = np.zeros(len(index), dtype=np.bool_)
    for ch, i in index.items():
        is_sep[i] = cfg.is_separator(ch)
    pre_chars, pre_off = kernels.encode_words([], index)
    n_chars = int(msg_off[-1])
    args = (chars, msg_off, msg_ts, 0, 25, 25, 40, is_sep,
            index[cfg.separator_char], cfg.partitions, cfg.conf, cfg.diff,
            cfg.n_initial, cfg.n_min, 15, 0, pre_chars, pre_off, 0, True,
            cfg.partitions + n_chars + 1, n_chars + 50)
    assert kernels.run_row(*args) == py_func(kernels.run_row)(*args)


def test_env_flag_selects_python_backend(monkeypatch):
    msgs = session_corpus(30, vocab_size=10, seed=8)
    plan = SimulationPlan(train_max=0, train_step=50, test_size=20,
                          variants=(Variant("v"),))
    baseline = run_simulation(msgs, plan, backend="python").to_csv()
    monkeypatch.setenv("KEYTRIE_SIM_BACKEND", "python")
    assert run_simulation(msgs, plan).to_csv() == baseline
    monkeypatch.setenv("KEYTRIE_SIM_BACKEND", "auto")
    assert run_simulation(msgs, plan).to_csv() == baseline
