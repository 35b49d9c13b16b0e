"""Versioned JSON persistence for an engine's learned dictionary.

Only the durable part is saved: the config and the weighted tries (nested
nodes with key, weight, word-end marker, children). Session dynamics (n_t,
streaks, idle flag, cursor) are deliberately not persisted; confidence is a
property of a live session, not of the dictionary. Loading therefore yields
an engine that predicts identically from the next word boundary on.
"""

from __future__ import annotations

import heapq
import json

from .engine import EngineConfig, PredictionEngine
from .trie import TrieNode, WeightedTrie, WordEndMarker

FORMAT_VERSION = 1


class SnapshotError(ValueError):
    pass


def _node_to_dict(node: TrieNode) -> dict:
    out = {"key": node.key, "weight": node.weight}
    if node.word_end is not None:
        out["word_end"] = {"count": node.word_end.count,
                           "last_used": node.word_end.last_used}
    else:
        out["word_end"] = None
    out["children"] = [_node_to_dict(node.children[ch]) for ch in sorted(node.children)]
    return out


def _node_from_dict(data: dict, trie: WeightedTrie, prefix: str) -> TrieNode:
    node = TrieNode(data["key"])
    node.weight = data["weight"]
    marker = data.get("word_end")
    if marker is not None:
        node.word_end = WordEndMarker(marker["count"], marker["last_used"])
        trie.word_count += 1
        trie._lru[prefix + node.key] = marker["last_used"]
    for child_data in data["children"]:
        child = _node_from_dict(child_data, trie, prefix + node.key)
        node.children[child.key] = child
        trie.node_count += 1
    return node


def _trie_from_dict(data: dict) -> WeightedTrie:
    trie = WeightedTrie()
    for child_data in data["children"]:
        child = _node_from_dict(child_data, trie, "")
        trie.root.children[child.key] = child
        trie.node_count += 1
    trie._lru_heap = [(ts, word) for word, ts in trie._lru.items()]
    heapq.heapify(trie._lru_heap)
    return trie


def config_to_dict(config: EngineConfig) -> dict:
    seps = config.word_separators
    return {
        "partitions": config.partitions,
        "conf": config.conf,
        "diff": config.diff,
        "n_initial": config.n_initial,
        "n_min": config.n_min,
        "word_separators": "".join(sorted(seps)) if seps is not None else None,
        "word_budget": config.word_budget,
        "tz_offset": config.tz_offset,
    }


def config_from_dict(data: dict) -> EngineConfig:
    seps = data.get("word_separators")
    return EngineConfig(
        partitions=data["partitions"],
        conf=data["conf"],
        diff=data["diff"],
        n_initial=data["n_initial"],
        n_min=data["n_min"],
        word_separators=frozenset(seps) if seps is not None else None,
        word_budget=data.get("word_budget"),
        tz_offset=data.get("tz_offset", 0),
    )


def engine_to_dict(engine: PredictionEngine) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "config": config_to_dict(engine.config),
        "tries": [_node_to_dict(trie.root) for trie in engine.tries],
    }


def engine_from_dict(data: dict) -> PredictionEngine:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise SnapshotError(f"unsupported snapshot format_version: {version!r}")
    config = config_from_dict(data["config"])
    engine = PredictionEngine(config)
    tries = [_trie_from_dict(t) for t in data["tries"]]
    if len(tries) != config.partitions:
        raise SnapshotError(
            f"snapshot has {len(tries)} tries for {config.partitions} partitions")
    engine.tries = tries
    engine.cursor = engine.tries[0].root_cursor()
    return engine


def save_snapshot(engine: PredictionEngine, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(engine_to_dict(engine), fh, ensure_ascii=False)
        fh.write("\n")


def load_snapshot(path) -> PredictionEngine:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"snapshot is not valid JSON: {exc.msg}") from exc
    return engine_from_dict(data)
