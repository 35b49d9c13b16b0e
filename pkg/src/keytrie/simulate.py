"""Deterministic typing-replay simulator.

For each engine variant and each training-set size on a grid, a fresh engine
is trained on the first ``train_size`` messages and then evaluated by
replaying the next ``test_size`` messages keystroke by keystroke. Every
non-separator keystroke is scored with the hit ratio 1/|G| (0 on a miss or
when the prediction set is empty), and a miss with a non-empty prediction set
fires the simulated bad-prediction feedback.

Two interchangeable backends produce byte-identical reports: "python" drives
the object engine, "kernel" runs the flat-array kernels (the default when
numba is available). Select via the ``backend`` argument or the
``KEYTRIE_SIM_BACKEND`` environment variable.
"""

from __future__ import annotations

import io
import os
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .accel import NUMBA_ENABLED
from .corpus import Message
from .engine import EngineConfig, PredictionEngine
from .trie import PredictionSet

CSV_HEADER = "variant,train_size,mean_precision,words_learned,prediction_events,empty_prediction_events"


@dataclass(frozen=True)
class Variant:
    """One engine configuration to simulate, optionally dictionary-preloaded."""

    name: str
    config: EngineConfig = EngineConfig()
    wordlist: Optional[tuple[str, ...]] = None
    auto_feedback: bool = True

    def __post_init__(self):
        if self.wordlist is not None:
            object.__setattr__(self, "wordlist", tuple(self.wordlist))


@dataclass(frozen=True)
class SimulationPlan:
    train_max: int = 1500
    train_step: int = 50
    test_size: int = 500
    variants: tuple[Variant, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.train_step < 1 or self.test_size < 1 or self.train_max < 0:
            raise ValueError("need train_step >= 1, test_size >= 1, train_max >= 0")
        object.__setattr__(self, "variants", tuple(self.variants))

    def train_sizes(self) -> list[int]:
        return list(range(0, self.train_max + 1, self.train_step))


@dataclass(frozen=True)
class ReportRow:
    variant: str
    train_size: int
    mean_precision: float
    words_learned: int
    prediction_events: int
    empty_prediction_events: int


@dataclass(frozen=True)
class SimulationReport:
    rows: tuple[ReportRow, ...]

    def row(self, variant: str, train_size: int) -> ReportRow:
        for r in self.rows:
            if r.variant == variant and r.train_size == train_size:
                return r
        raise KeyError((variant, train_size))

    def variant_rows(self, variant: str) -> list[ReportRow]:
        return [r for r in self.rows if r.variant == variant]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(f"{r.variant},{r.train_size},{r.mean_precision:.6f},"
                      f"{r.words_learned},{r.prediction_events},{r.empty_prediction_events}\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def precision_score(prediction: PredictionSet, actual: str) -> float:
    """Hit ratio for one event: 1/|G| when the typed character is in the set,
    0 on a miss or an empty set."""
    if len(prediction) > 0 and actual in prediction:
        return 1.0 / len(prediction)
    return 0.0


def replay_message(engine: PredictionEngine, message: Message,
                   auto_feedback: bool = True) -> list[tuple[PredictionSet, str]]:
    """Type one message through the engine, recording (set shown, key typed).

    A synthetic trailing separator closes the message's last word; its pair is
    recorded but treated as unscorable by the aggregation (like any separator
    event). Feedback fires for a keystroke outside a non-empty shown set.
    """
    pairs = []
    for ch in message.text + engine.config.separator_char:
        shown = engine.last_prediction
        pairs.append((shown, ch))
        feedback = auto_feedback and len(shown) > 0 and ch not in shown
        engine.handle_keystroke(ch, message.ts, feedback=feedback)
    return pairs


def _resolve_backend(backend: Optional[str]) -> str:
    if backend is None:
        backend = os.environ.get("KEYTRIE_SIM_BACKEND", "auto")
    if backend == "auto":
        return "kernel" if NUMBA_ENABLED else "python"
    if backend not in ("kernel", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _fit_plan(plan: SimulationPlan, n_messages: int) -> SimulationPlan:
    if n_messages >= plan.train_max + plan.test_size:
        return plan
    fit_train = max(0, n_messages - plan.test_size)
    fit_train = (fit_train // plan.train_step) * plan.train_step
    test_size = min(plan.test_size, n_messages)
    warnings.warn(
        f"corpus has {n_messages} messages, short of train_max+test_size="
        f"{plan.train_max + plan.test_size}; truncating to train_max={fit_train}, "
        f"test_size={test_size}", stacklevel=3)
    return SimulationPlan(train_max=fit_train, train_step=plan.train_step,
                          test_size=test_size, variants=plan.variants)


def _run_row_python(messages, variant, train_size, test_size):
    """One row on the object engine; the streaming twin of replay_message."""
    engine = PredictionEngine(variant.config)
    if variant.wordlist:
        engine.preload(variant.wordlist, now=0)
    engine.accelerate(messages[:train_size])
    words_learned = engine.words_learned()
    sep = variant.config.separator_char
    is_sep = variant.config.is_separator
    score_sum = 0.0
    scored = 0
    empty = 0
    for msg in messages[train_size:train_size + test_size]:
        for ch in msg.text + sep:
            shown = engine.last_prediction
            hit = ch in shown
            if not is_sep(ch):
                scored += 1
                if len(shown) == 0:
                    empty += 1
                elif hit:
                    score_sum += 1.0 / len(shown)
            feedback = variant.auto_feedback and len(shown) > 0 and not hit
            engine.handle_keystroke(ch, msg.ts, feedback=feedback)
    return score_sum, scored, empty, words_learned


def _run_variant_kernel(messages, variant, plan, enc):
    chars, msg_off, msg_ts, index = enc
    cfg = variant.config
    vocab_size = len(index)
    is_sep = np.zeros(vocab_size, dtype=np.bool_)
    for ch, i in index.items():
        is_sep[i] = cfg.is_separator(ch)
    sep_id = index[cfg.separator_char]
    words = variant.wordlist or ()
    pre_chars, pre_off = kernels.encode_words(list(words), index)
    budget = cfg.word_budget if cfg.word_budget is not None else -1
    rows = []
    for train_size in plan.train_sizes():
        test_lo = train_size
        test_hi = train_size + plan.test_size
        slice_chars = int(msg_off[train_size] - msg_off[0]) + int(msg_off[test_hi] - msg_off[test_lo])
        node_cap = cfg.partitions * (1 + len(pre_chars)) + slice_chars + 1
        word_cap = len(words) + train_size + test_hi - test_lo + slice_chars + 1
        score_sum, scored, empty, words_learned = kernels.run_row(
            chars, msg_off, msg_ts,
            0, train_size, test_lo, test_hi,
            is_sep, sep_id,
            cfg.partitions, cfg.conf, cfg.diff, cfg.n_initial, cfg.n_min,
            budget, cfg.tz_offset,
            pre_chars, pre_off, 0,
            variant.auto_feedback,
            node_cap, word_cap)
        rows.append(_make_row(variant.name, train_size, float(score_sum),
                              int(scored), int(empty), int(words_learned)))
    return rows


def _make_row(name, train_size, score_sum, scored, empty, words_learned):
    mean = score_sum / scored if scored else 0.0
    return ReportRow(name, train_size, mean, words_learned, scored, empty)


def run_simulation(messages: Sequence[Message], plan: SimulationPlan,
                   backend: Optional[str] = None) -> SimulationReport:
    """Run every (variant, train_size) row and assemble the report.

    Messages must be sorted by timestamp ascending (load_corpus output is).
    Each row gets a fresh engine; rows are deterministic functions of the
    inputs, so repeated runs produce byte-identical CSV.
    """
    if not messages:
        raise ValueError("empty message list")
    if not plan.variants:
        raise ValueError("plan has no variants")
    backend = _resolve_backend(backend)
    plan = _fit_plan(plan, len(messages))

    rows = []
    if backend == "kernel":
        all_words = [w for v in plan.variants if v.wordlist for w in v.wordlist]
        sep_chars = {v.config.separator_char for v in plan.variants}
        _, index = kernels.build_vocab(messages, all_words, sep_chars)
        chars, msg_off, msg_ts = kernels.encode_messages(messages, index)
        enc = (chars, msg_off, msg_ts, index)
        for variant in plan.variants:
            rows.extend(_run_variant_kernel(messages, variant, plan, enc))
    else:
        for variant in plan.variants:
            for train_size in plan.train_sizes():
                score_sum, scored, empty, words_learned = _run_row_python(
                    messages, variant, train_size, plan.test_size)
                rows.append(_make_row(variant.name, train_size, score_sum,
                                      scored, empty, words_learned))
    return SimulationReport(tuple(rows))
