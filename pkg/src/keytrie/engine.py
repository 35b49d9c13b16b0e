"""Adaptive next-character prediction over time-partitioned weighted tries.

One engine instance serves one language/user. Each keystroke is learned into
the trie of the day partition that was active when the current word started,
and answered with a ranked set of at most ``n_t`` candidate next characters.
``n_t`` shrinks after ``conf`` consecutive successful predictions and grows
after ``diff`` consecutive bad-prediction feedbacks. Feedback also idles the
engine: it keeps learning but returns empty predictions until the next word
separator.

All operations must be externally serialized; there is no internal locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .trie import Cursor, PredictionSet, WeightedTrie

SECONDS_PER_DAY = 86400


class StreamOrderError(ValueError):
    """Keystroke timestamps must be non-decreasing within an engine's life."""


def partition_of(now: float, partitions: int, tz_offset: int = 0) -> int:
    """Index of the equal day-partition containing ``now``.

    ``now`` is epoch seconds; days start at midnight UTC shifted by
    ``tz_offset`` seconds. With ``partitions=1`` everything maps to 0.
    """
    if partitions < 1:
        raise ValueError("partitions must be >= 1")
    secs = math.floor(now + tz_offset) % SECONDS_PER_DAY
    idx = (secs * partitions) // SECONDS_PER_DAY
    return min(idx, partitions - 1)


@dataclass(frozen=True)
class EngineConfig:
    """Static engine parameters.

    ``word_separators`` of None means any Unicode whitespace. ``word_budget``
    of None disables LRU pruning. ``alphabet_cap`` is documentation only: the
    alphabet stays open, any non-separator character typed becomes a key.
    """

    partitions: int = 1
    conf: int = 5
    diff: int = 2
    n_initial: int = 3
    n_min: int = 1
    word_separators: Optional[frozenset[str]] = None
    word_budget: Optional[int] = None
    alphabet_cap: Optional[int] = None
    tz_offset: int = 0

    def __post_init__(self):
        if self.partitions < 1:
            raise ValueError("partitions must be >= 1")
        if self.conf < 1 or self.diff < 1:
            raise ValueError("conf and diff must be >= 1")
        if not (1 <= self.n_min <= self.n_initial):
            raise ValueError("need 1 <= n_min <= n_initial")
        if self.word_budget is not None and self.word_budget < 1:
            raise ValueError("word_budget must be >= 1 when set")
        if self.word_separators is not None:
            if not self.word_separators:
                raise ValueError("explicit separator set must be non-empty")
            object.__setattr__(self, "word_separators", frozenset(self.word_separators))

    def is_separator(self, ch: str) -> bool:
        if self.word_separators is None:
            return ch.isspace()
        return ch in self.word_separators

    @property
    def separator_char(self) -> str:
        """Canonical separator used for synthetic word boundaries."""
        if self.word_separators is None or " " in self.word_separators:
            return " "
        return min(self.word_separators)


class PredictionEngine:
    """The keystroke-in, prediction-set-out state machine.

    Learning never stops: every keystroke updates the active trie even while
    idle. Prediction cost per keystroke is bounded by the child list of a
    single node, independent of trie size.
    """

    def __init__(self, config: EngineConfig = EngineConfig()):
        self.config = config
        self.tries = [WeightedTrie() for _ in range(config.partitions)]
        self.active_partition = 0
        self.cursor: Cursor = self.tries[0].root_cursor()
        self.idle = False
        self.n_t = config.n_initial
        self.success_streak = 0
        self.feedback_streak = 0
        self.last_prediction = PredictionSet([], config.n_initial)
        self.event_index = 0
        self.last_ts: Optional[float] = None

    # -- the per-keystroke contract -------------------------------------------

    def handle_keystroke(self, ch: str, now: float, feedback: bool = False,
                         _training: bool = False) -> PredictionSet:
        """Learn one keystroke and return the prediction set for the next one.

        ``feedback`` marks this event as carrying the UI's bad-prediction
        signal. Timestamps must be non-decreasing; a step back raises
        StreamOrderError. With ``_training`` the streak/bound accounting is
        frozen and no prediction is computed (accelerators are training, not
        interaction).
        """
        if len(ch) != 1:
            raise ValueError(f"expected a single character, got {ch!r}")
        if self.last_ts is not None and now < self.last_ts:
            raise StreamOrderError(f"timestamp {now} precedes {self.last_ts}")
        self.last_ts = now
        self.event_index += 1

        if not _training:
            if feedback:
                self._feedback_event()
            else:
                self._success_event(ch)

        if self.cursor.at_root():
            # Partition is latched at word start and held for the whole word,
            # so a word straddling a boundary keeps a valid cursor.
            self.active_partition = partition_of(now, self.config.partitions,
                                                 self.config.tz_offset)
            self.cursor = self.tries[self.active_partition].root_cursor()
        trie = self.tries[self.active_partition]

        if self.config.is_separator(ch):
            self.cursor = trie.end_word(self.cursor, now)
            if self.config.word_budget is not None:
                trie.prune_to_budget(self.config.word_budget)
            self.idle = False  # a separator always re-enables prediction
            if _training:
                pred = PredictionSet([], self.n_t)
            else:
                pred = trie.predict_at(self.cursor, self.n_t)
        else:
            self.cursor = trie.descend_or_create(self.cursor, ch)
            if _training or self.idle:
                pred = PredictionSet([], self.n_t)
            else:
                pred = trie.predict_at(self.cursor, self.n_t)

        self.last_prediction = pred
        return pred

    def _success_event(self, ch: str) -> None:
        if ch in self.last_prediction:
            self.success_streak += 1
            self.feedback_streak = 0  # a success interrupts the diffidence streak
            if self.success_streak >= self.config.conf:
                self.n_t = max(self.config.n_min, self.n_t - 1)
                self.success_streak = 0
        else:
            # A plain miss resets confidence but neither counts toward nor
            # interrupts diffidence; that is tied strictly to explicit feedback.
            self.success_streak = 0

    def _feedback_event(self) -> None:
        self.idle = True
        self.feedback_streak += 1
        if self.feedback_streak >= self.config.diff:
            self.n_t += 1
            self.feedback_streak = 0
        self.success_streak = 0

    def send_feedback(self) -> None:
        """Apply a bad-prediction signal immediately.

        Equivalent to passing ``feedback=True`` with the next keystroke; the
        service uses this form so the UI sees the idle state right away.
        """
        self._feedback_event()
        self.last_prediction = PredictionSet([], self.n_t)

    # -- training ---------------------------------------------------------------

    def accelerate(self, messages: Iterable) -> None:
        """Replay past messages as training keystrokes.

        Messages must be sorted by timestamp ascending. Each message gets a
        synthetic trailing separator so no word is left in progress. Streaks
        and ``n_t`` are untouched; predictions are not computed.
        """
        sep = self.config.separator_char
        prev = None
        for msg in messages:
            if prev is not None and msg.ts < prev:
                raise ValueError("messages are not sorted by timestamp")
            prev = msg.ts
            for ch in msg.text:
                self.handle_keystroke(ch, msg.ts, _training=True)
            self.handle_keystroke(sep, msg.ts, _training=True)

    def preload(self, words: Iterable[str], now: float = 0) -> None:
        """Seed every partition trie with a dictionary, one insertion per word."""
        for trie in self.tries:
            for word in words:
                trie.preload_word(word, now, self.config.is_separator)

    # -- auxiliary surface -------------------------------------------------------

    def reset_cursor(self) -> None:
        """Abandon the word in progress (UI hide); learned weights remain."""
        self.cursor = self.tries[self.active_partition].root_cursor()
        self.last_prediction = PredictionSet([], self.n_t)

    def words_learned(self) -> int:
        """Total word-end markers summed across partitions."""
        return sum(t.word_count for t in self.tries)

    def stats(self) -> dict:
        cfg = self.config
        return {
            "partitions": cfg.partitions,
            "conf": cfg.conf,
            "diff": cfg.diff,
            "n_initial": cfg.n_initial,
            "n_min": cfg.n_min,
            "word_budget": cfg.word_budget,
            "tz_offset": cfg.tz_offset,
            "n_t": self.n_t,
            "idle": self.idle,
            "event_index": self.event_index,
            "words_per_partition": [t.word_count for t in self.tries],
            "nodes_per_partition": [t.node_count for t in self.tries],
            "total_words": self.words_learned(),
            "total_nodes": sum(t.node_count for t in self.tries),
        }
