"""Message ingestion: JSON Lines corpora and newline-delimited word lists.

Filtering mirrors how typed text differs from posted text: retweet-style
reposts are dropped whole ("RT @" prefix) and URL tokens are removed, since
neither was actually typed character by character. @mentions and hashtags are
kept verbatim. Messages are returned sorted by timestamp (stable, so
equal-timestamp messages keep file order).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable


class CorpusFormatError(ValueError):
    """A corpus line that does not parse; carries the 1-based line number."""

    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno


@dataclass(frozen=True)
class Message:
    """One timestamped text unit (epoch seconds UTC, normalized text)."""

    ts: int
    text: str


@dataclass
class CorpusStats:
    total: int = 0
    kept: int = 0
    dropped_retweets: int = 0
    stripped_links: int = 0


def _is_url_token(token: str) -> bool:
    return token.startswith("http://") or token.startswith("https://")


def normalize_text(text: str) -> tuple[str | None, int]:
    """Apply the keep/drop rules to one message text.

    Returns (normalized text, number of URL tokens removed); the text is None
    when the whole message is dropped (retweet, or empty once normalized).
    Kept tokens are never altered; they are re-joined with single spaces.
    """
    if text.lstrip().startswith("RT @"):
        return None, 0
    tokens = text.split()
    kept = [t for t in tokens if not _is_url_token(t)]
    stripped = len(tokens) - len(kept)
    if not kept:
        return None, stripped
    return " ".join(kept), stripped


def _coerce_ts(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError("ts must be a number")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("ts must be integer epoch seconds")
        value = int(value)
    if value < 0:
        raise ValueError("ts must be >= 0")
    return value


def load_corpus(path, format: str = "jsonl") -> tuple[list[Message], CorpusStats]:
    """Read, filter and chronologically sort a message corpus.

    Only the ``jsonl`` format is defined: one ``{"ts": int, "text": str}``
    object per line, UTF-8. Malformed lines raise CorpusFormatError naming the
    line; out-of-order timestamps in the file are fine (sorting fixes them).
    """
    if format != "jsonl":
        raise ValueError(f"unknown corpus format: {format!r}")
    messages = []
    stats = CorpusStats()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            stats.total += 1
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(lineno, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(lineno, "expected a JSON object")
            try:
                ts = _coerce_ts(obj["ts"])
                raw = obj["text"]
            except KeyError as exc:
                raise CorpusFormatError(lineno, f"missing field {exc.args[0]!r}") from exc
            except ValueError as exc:
                raise CorpusFormatError(lineno, str(exc)) from exc
            if not isinstance(raw, str):
                raise CorpusFormatError(lineno, "text must be a string")
            if raw.lstrip().startswith("RT @"):
                stats.dropped_retweets += 1
                continue
            text, stripped = normalize_text(raw)
            stats.stripped_links += stripped
            if text is None:
                continue
            stats.kept += 1
            messages.append(Message(ts, text))
    messages.sort(key=lambda m: m.ts)  # stable: equal ts keeps file order
    return messages, stats


def save_corpus(messages: Iterable[Message], path) -> None:
    """Write messages back out as JSON Lines (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for msg in messages:
            fh.write(json.dumps({"ts": msg.ts, "text": msg.text}, ensure_ascii=False))
            fh.write("\n")


def load_wordlist(path) -> list[str]:
    """Read a newline-delimited word list: trimmed, blanks skipped, deduplicated
    with order preserved."""
    words = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and word not in seen:
                seen.add(word)
                words.append(word)
    return words
