"""Weighted prefix tree with per-node traversal counts and LRU word eviction.

Every keystroke descends one level from a cursor; node weights count how many
times the user's typing traversed that path. Word completions stamp the final
node with a marker (completion count + last-used timestamp), which is what the
LRU pruner evicts when the vocabulary exceeds its budget.

Per-keystroke operations touch a bounded number of nodes (the cursor's child
list at most), so prediction cost is independent of trie size.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterator, Optional


def _default_is_separator(ch: str) -> bool:
    return ch.isspace()


class WordEndMarker:
    """Completion record attached to the last node of a finished word."""

    __slots__ = ("count", "last_used")

    def __init__(self, count: int, last_used: float):
        self.count = count
        self.last_used = last_used

    def __repr__(self):
        return f"WordEndMarker(count={self.count}, last_used={self.last_used})"


class TrieNode:
    """One character of a typed path.

    ``weight`` counts cursor traversals through this node; it is always at
    least the sum of the children's weights. The slack equals this node's own
    completion count once no word is in progress below it.
    """

    __slots__ = ("key", "weight", "children", "word_end")

    def __init__(self, key: str):
        self.key = key
        self.weight = 0
        self.children: dict[str, TrieNode] = {}
        self.word_end: Optional[WordEndMarker] = None

    def __repr__(self):
        return f"TrieNode({self.key!r}, weight={self.weight}, children={len(self.children)})"


@dataclass
class Cursor:
    """Current position in a trie; the root means a word boundary.

    ``prefix`` is the word typed since the last separator. It is carried here
    so completing a word never has to walk the tree upward.
    """

    node: TrieNode
    prefix: str = ""

    def at_root(self) -> bool:
        return self.prefix == ""


class PredictionSet:
    """Ranked candidate next characters with conditional probabilities.

    Entries are sorted by probability descending, ties by ascending code
    point, and truncated to at most ``bound`` entries.
    """

    __slots__ = ("entries", "bound")

    def __init__(self, entries: list[tuple[str, float]], bound: int):
        self.entries = entries
        self.bound = bound

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __contains__(self, ch: str) -> bool:
        for k, _ in self.entries:
            if k == ch:
                return True
        return False

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, PredictionSet) and self.entries == other.entries

    def chars(self) -> list[str]:
        return [k for k, _ in self.entries]

    def __repr__(self):
        return f"PredictionSet({self.entries!r}, bound={self.bound})"


class WeightedTrie:
    """The weighted trie plus the LRU bookkeeping over completed words.

    Not safe for concurrent mutation; callers serialize access.
    ``visited_nodes`` counts node touches by the per-keystroke operations
    (descend / word end / predict) and is the locality instrumentation used
    to check the constant-cost claim. Pruning is not included in it.
    """

    def __init__(self):
        self.root = TrieNode("")  # sentinel key, never matched
        self.word_count = 0
        self.node_count = 0
        self.visited_nodes = 0
        # word -> last_used; the heap holds (last_used, word) with stale
        # entries dropped lazily when a word is re-completed.
        self._lru: dict[str, float] = {}
        self._lru_heap: list[tuple[float, str]] = []

    # -- per-keystroke operations -------------------------------------------

    def root_cursor(self) -> Cursor:
        return Cursor(self.root, "")

    def descend_or_create(self, cursor: Cursor, ch: str) -> Cursor:
        """Move the cursor down one level, creating the child if unseen.

        The traversed child's weight is incremented. ``ch`` must be a single
        non-separator character; the engine enforces the separator rule.
        """
        node = cursor.node
        child = node.children.get(ch)
        if child is None:
            child = TrieNode(ch)
            node.children[ch] = child
            self.node_count += 1
        child.weight += 1
        self.visited_nodes += 1
        return Cursor(child, cursor.prefix + ch)

    def end_word(self, cursor: Cursor, now: float) -> Cursor:
        """Complete the word at the cursor and return a root cursor.

        A no-op when the cursor is already at the root (consecutive
        separators).
        """
        node = cursor.node
        if node is self.root:
            return self.root_cursor()
        marker = node.word_end
        if marker is None:
            node.word_end = WordEndMarker(1, now)
            self.word_count += 1
        else:
            marker.count += 1
            marker.last_used = now
        word = cursor.prefix
        self._lru[word] = now
        heapq.heappush(self._lru_heap, (now, word))
        self.visited_nodes += 1
        return self.root_cursor()

    def predict_at(self, cursor: Cursor, n: int) -> PredictionSet:
        """Top-``n`` next characters at the cursor, by conditional probability.

        Probabilities are child weight over the sum of all child weights of
        the cursor node (they sum to 1 before truncation). Only the cursor
        node's child list is inspected.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        self.visited_nodes += 1
        children = cursor.node.children
        if not children:
            return PredictionSet([], n)
        total = 0
        for child in children.values():
            total += child.weight
        ranked = sorted(children.items(), key=lambda kv: (-kv[1].weight, kv[0]))
        entries = [(ch, child.weight / total) for ch, child in ranked[:n]]
        return PredictionSet(entries, n)

    # -- bulk operations ------------------------------------------------------

    def preload_word(self, word: str, now: float,
                     is_separator: Callable[[str], bool] = _default_is_separator) -> None:
        """Insert a word as if it had been typed once and completed at ``now``."""
        if not word:
            raise ValueError("cannot preload an empty word")
        for ch in word:
            if is_separator(ch):
                raise ValueError(f"word contains a separator: {word!r}")
        cursor = self.root_cursor()
        for ch in word:
            cursor = self.descend_or_create(cursor, ch)
        self.end_word(cursor, now)

    def prune_to_budget(self, word_budget: int) -> list[str]:
        """Evict least-recently-used words until ``word_count <= word_budget``.

        Ties on last_used break by ascending word. Path nodes serving no other
        word are deleted; weights along the retained shared prefix drop by the
        evicted marker's count. Returns the removed words in eviction order.

        Must be called at a word boundary: evicting a path that holds a live
        mid-word cursor would invalidate it.
        """
        if word_budget < 1:
            raise ValueError("word_budget must be >= 1")
        removed = []
        while self.word_count > word_budget:
            word = self._pop_lru()
            self._evict(word)
            removed.append(word)
        return removed

    def _pop_lru(self) -> str:
        while True:
            last_used, word = heapq.heappop(self._lru_heap)
            if self._lru.get(word) == last_used:
                return word
            # stale: the word was completed again after this entry was pushed

    def _evict(self, word: str) -> None:
        path = []  # (parent, node) pairs from root down
        node = self.root
        for ch in word:
            child = node.children[ch]
            path.append((node, child))
            node = child
        marker = node.word_end
        count = marker.count
        node.word_end = None
        self.word_count -= 1
        del self._lru[word]
        for _, n in path:
            n.weight -= count
        for parent, n in reversed(path):
            if n.children or n.word_end is not None:
                break
            del parent.children[n.key]
            self.node_count -= 1

    # -- inspection -----------------------------------------------------------

    def iter_words(self) -> Iterator[tuple[str, int, float]]:
        """Yield (word, completion count, last_used) for every stored word."""
        stack = [(self.root, "")]
        while stack:
            node, prefix = stack.pop()
            if node.word_end is not None:
                yield prefix, node.word_end.count, node.word_end.last_used
            for ch in sorted(node.children, reverse=True):
                stack.append((node.children[ch], prefix + ch))

    def validate(self, at_word_boundary: bool = True) -> None:
        """Check structural invariants, raising ValueError on violation.

        With ``at_word_boundary`` the stricter flushed-stream conditions are
        checked too: weight slack equals the node's own completion count and
        every leaf carries a marker. Mid-word those do not hold for the path
        under the cursor.
        """
        seen_nodes = 0
        seen_words = 0
        lru_words = {}
        stack = [(self.root, "")]
        while stack:
            node, prefix = stack.pop()
            child_sum = 0
            for ch, child in node.children.items():
                if child.key != ch:
                    raise ValueError(f"child key mismatch at {prefix!r}: {ch!r}")
                child_sum += child.weight
                stack.append((child, prefix + ch))
            if node is self.root:
                continue
            seen_nodes += 1
            if node.weight < 1:
                raise ValueError(f"node {prefix!r} has weight {node.weight}")
            if node.weight < child_sum:
                raise ValueError(f"node {prefix!r} lighter than its children")
            marker = node.word_end
            if marker is not None:
                if marker.count < 1:
                    raise ValueError(f"word {prefix!r} has count {marker.count}")
                seen_words += 1
                lru_words[prefix] = marker.last_used
            if at_word_boundary:
                own = marker.count if marker is not None else 0
                if node.weight != child_sum + own:
                    raise ValueError(
                        f"node {prefix!r}: weight {node.weight} != children {child_sum} + own {own}")
                if not node.children and marker is None:
                    raise ValueError(f"markerless leaf at {prefix!r}")
        if seen_nodes != self.node_count:
            raise ValueError(f"node_count {self.node_count} != reachable {seen_nodes}")
        if seen_words != self.word_count:
            raise ValueError(f"word_count {self.word_count} != markers {seen_words}")
        if lru_words != self._lru:
            raise ValueError("LRU index out of sync with word-end markers")
