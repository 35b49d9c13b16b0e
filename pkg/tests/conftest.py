"""Shared helpers: tiny trie builders, random keystroke streams, and a
bare-trie reference pipeline used for the T=1 degeneracy checks."""

from __future__ import annotations

import random

from keytrie import EngineConfig, PredictionSet, WeightedTrie


def type_word(trie: WeightedTrie, word: str, now: float):
    """Type one word and complete it."""
    cursor = trie.root_cursor()
    for ch in word:
        cursor = trie.descend_or_create(cursor, ch)
    return trie.end_word(cursor, now)


def type_words(trie: WeightedTrie, words, start_ts: int = 0, spacing: int = 1):
    for i, word in enumerate(words):
        type_word(trie, word, start_ts + i * spacing)


def random_stream(rng: random.Random, length: int, alphabet: str = "abcdefghij",
                  sep_prob: float = 0.18, feedback_prob: float = 0.0,
                  start_ts: int = 1_000_000, max_dt: int = 30):
    """Random (ch, ts, feedback) events with non-decreasing timestamps."""
    events = []
    ts = start_ts
    for _ in range(length):
        ts += rng.randrange(0, max_dt)
        if rng.random() < sep_prob:
            ch = " "
        else:
            ch = rng.choice(alphabet)
        feedback = rng.random() < feedback_prob
        events.append((ch, ts, feedback))
    return events


class BareTriePipeline:
    """A single weighted trie driven by the keystroke state machine directly,
    with no time partitioning. The T=1 engine must behave identically."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.trie = WeightedTrie()
        self.cursor = self.trie.root_cursor()
        self.idle = False
        self.n_t = config.n_initial
        self.success_streak = 0
        self.feedback_streak = 0
        self.last_prediction = PredictionSet([], config.n_initial)

    def handle_keystroke(self, ch, now, feedback=False):
        if feedback:
            self.idle = True
            self.feedback_streak += 1
            if self.feedback_streak >= self.config.diff:
                self.n_t += 1
                self.feedback_streak = 0
            self.success_streak = 0
        else:
            if ch in self.last_prediction:
                self.success_streak += 1
                self.feedback_streak = 0
                if self.success_streak >= self.config.conf:
                    self.n_t = max(self.config.n_min, self.n_t - 1)
                    self.success_streak = 0
            else:
                self.success_streak = 0
        if self.config.is_separator(ch):
            self.cursor = self.trie.end_word(self.cursor, now)
            if self.config.word_budget is not None:
                self.trie.prune_to_budget(self.config.word_budget)
            self.idle = False
            pred = self.trie.predict_at(self.cursor, self.n_t)
        else:
            self.cursor = self.trie.descend_or_create(self.cursor, ch)
            if self.idle:
                pred = PredictionSet([], self.n_t)
            else:
                pred = self.trie.predict_at(self.cursor, self.n_t)
        self.last_prediction = pred
        return pred
