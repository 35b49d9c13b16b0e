"""Synthetic message corpora with controlled temporal structure.

The original evaluation corpus is not redistributable, so directional
experiments (time partitioning, pruning, dictionary preload) run on generated
corpora whose structure makes the expected effect explicit: disjoint
morning/evening vocabularies, per-hour vocabularies, drifting vocabularies,
and a stable idiosyncratic user vocabulary. All generators are seeded and
deterministic.
"""

from __future__ import annotations

import string

import numpy as np

from .corpus import Message

ALPHABET = string.ascii_lowercase
DAY = 86400


def _distinct_words(rng, count, taken, min_len=3, max_len=8):
    words = []
    while len(words) < count:
        length = int(rng.integers(min_len, max_len + 1))
        word = "".join(ALPHABET[i] for i in rng.integers(0, len(ALPHABET), length))
        if word not in taken:
            taken.add(word)
            words.append(word)
    return words


def _zipf_weights(n):
    w = 1.0 / np.arange(1, n + 1)
    return w / w.sum()


def _sample_text(rng, vocab, weights, n_words):
    picks = rng.choice(len(vocab), size=n_words, p=weights)
    return " ".join(vocab[i] for i in picks)


def session_corpus(n_messages: int, vocab_size: int = 200, msgs_per_day: int = 20,
                   seed: int = 0) -> list[Message]:
    """Morning (00:00-11:59) and evening (12:00-23:59) messages with disjoint
    vocabularies of ``vocab_size`` words each."""
    rng = np.random.default_rng(seed)
    taken = set()
    morning = _distinct_words(rng, vocab_size, taken)
    evening = _distinct_words(rng, vocab_size, taken)
    weights = _zipf_weights(vocab_size)
    half = msgs_per_day // 2
    messages = []
    for i in range(n_messages):
        day, slot = divmod(i, msgs_per_day)
        if slot < half:
            vocab = morning
            ts = day * DAY + (slot * (DAY // 2)) // half
        else:
            vocab = evening
            ts = day * DAY + DAY // 2 + ((slot - half) * (DAY // 2)) // half
        text = _sample_text(rng, vocab, weights, int(rng.integers(5, 10)))
        messages.append(Message(ts, text))
    return messages


def hourly_corpus(n_messages: int, words_per_hour: int = 60, msgs_per_day: int = 24,
                  seed: int = 1) -> list[Message]:
    """One disjoint vocabulary per hour of the day; messages cycle the hours."""
    rng = np.random.default_rng(seed)
    taken = set()
    vocabs = [_distinct_words(rng, words_per_hour, taken) for _ in range(24)]
    weights = _zipf_weights(words_per_hour)
    messages = []
    for i in range(n_messages):
        day, slot = divmod(i, msgs_per_day)
        hour = (slot * 24) // msgs_per_day
        ts = day * DAY + hour * 3600 + 1800
        text = _sample_text(rng, vocabs[hour], weights, int(rng.integers(5, 10)))
        messages.append(Message(ts, text))
    return messages


def drifting_corpus(n_messages: int, drift_every: int = 500, vocab_size: int = 150,
                    seed: int = 2) -> list[Message]:
    """Recency-skewed corpus: a fresh disjoint vocabulary every ``drift_every``
    messages, so old words stop being typed."""
    rng = np.random.default_rng(seed)
    taken = set()
    n_blocks = (n_messages + drift_every - 1) // drift_every
    vocabs = [_distinct_words(rng, vocab_size, taken) for _ in range(n_blocks)]
    weights = _zipf_weights(vocab_size)
    messages = []
    for i in range(n_messages):
        vocab = vocabs[i // drift_every]
        text = _sample_text(rng, vocab, weights, int(rng.integers(5, 10)))
        messages.append(Message(i * 60, text))
    return messages


def user_corpus(n_messages: int, vocab_size: int = 300,
                seed: int = 3) -> tuple[list[Message], list[str]]:
    """A user with a stable idiosyncratic vocabulary; returns (messages, vocab)."""
    rng = np.random.default_rng(seed)
    vocab = _distinct_words(rng, vocab_size, set())
    weights = _zipf_weights(vocab_size)
    messages = []
    for i in range(n_messages):
        text = _sample_text(rng, vocab, weights, int(rng.integers(5, 10)))
        messages.append(Message(i * 60, text))
    return messages, vocab


def preload_wordlist(user_vocab: list[str], total: int = 5000,
                     overlap_fraction: float = 0.5, seed: int = 4) -> list[str]:
    """A dictionary word list covering ``overlap_fraction`` of the user's
    vocabulary and padded with words the user never types."""
    rng = np.random.default_rng(seed)
    n_overlap = int(len(user_vocab) * overlap_fraction)
    overlap = [user_vocab[i] for i in rng.permutation(len(user_vocab))[:n_overlap]]
    fillers = _distinct_words(rng, total - len(overlap), set(user_vocab))
    return overlap + fillers
