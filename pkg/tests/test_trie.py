import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_stream, type_word, type_words
from keytrie import FlatWordOracle, WeightedTrie


def test_descend_creates_from_empty():
    trie = WeightedTrie()
    cursor = trie.descend_or_create(trie.root_cursor(), "d")
    assert cursor.node.key == "d"
    assert cursor.node.weight == 1
    assert cursor.prefix == "d"
    assert trie.node_count == 1


def test_descend_counts_traversals():
    trie = WeightedTrie()
    type_words(trie, ["dog", "dog"])
    cursor = trie.descend_or_create(trie.root_cursor(), "d")
    assert cursor.node.weight == 3  # two trained traversals plus this one


def test_descend_from_inner_node():
    trie = WeightedTrie()
    type_words(trie, ["dog", "dot"])
    cursor = trie.root_cursor()
    for ch in "do":
        cursor = trie.descend_or_create(cursor, ch)
    before = trie.node_count
    cursor = trie.descend_or_create(cursor, "g")
    assert cursor.prefix == "dog"
    assert cursor.node.weight == 2  # trained once, traversed again now
    assert trie.node_count == before


def test_end_word_first_completion():
    trie = WeightedTrie()
    cursor = trie.root_cursor()
    for ch in "dog":
        cursor = trie.descend_or_create(cursor, ch)
    node = cursor.node
    cursor = trie.end_word(cursor, 42)
    assert node.word_end.count == 1
    assert node.word_end.last_used == 42
    assert cursor.at_root()
    assert trie.word_count == 1


def test_end_word_noop_at_root():
    trie = WeightedTrie()
    cursor = trie.end_word(trie.root_cursor(), 1)
    assert cursor.at_root()
    assert trie.word_count == 0
    assert trie.node_count == 0


def test_end_word_updates_marker():
    trie = WeightedTrie()
    type_word(trie, "dog", 10)
    type_word(trie, "dog", 20)
    node = trie.root.children["d"].children["o"].children["g"]
    assert node.word_end.count == 2
    assert node.word_end.last_used == 20


def test_predict_at_leaf_is_empty():
    trie = WeightedTrie()
    type_word(trie, "dog", 0)
    cursor = trie.root_cursor()
    for ch in "dog":
        cursor = trie.descend_or_create(cursor, ch)
    assert trie.predict_at(cursor, 3).entries == []


def test_predict_probabilities():
    trie = WeightedTrie()
    type_words(trie, ["dog", "dog", "dot"])
    cursor = trie.root_cursor()
    for ch in "do":
        cursor = trie.descend_or_create(cursor, ch)
    pred = trie.predict_at(cursor, 3)
    assert pred.chars() == ["g", "t"]
    assert pred.entries[0][1] == pytest.approx(2 / 3, abs=1e-12)
    assert pred.entries[1][1] == pytest.approx(1 / 3, abs=1e-12)


def test_predict_tiebreak_by_code_point():
    trie = WeightedTrie()
    type_words(trie, ["xc", "xb", "xa"])
    cursor = trie.descend_or_create(trie.root_cursor(), "x")
    pred = trie.predict_at(cursor, 2)
    assert pred.chars() == ["a", "b"]
    assert [p for _, p in pred.entries] == pytest.approx([1 / 3, 1 / 3])


def test_predict_requires_positive_n():
    trie = WeightedTrie()
    with pytest.raises(ValueError):
        trie.predict_at(trie.root_cursor(), 0)


def test_full_child_probabilities_sum_to_one():
    trie = WeightedTrie()
    rng = random.Random(7)
    type_words(trie, ["".join(rng.choice("abcd") for _ in range(rng.randrange(1, 6)))
                      for _ in range(200)])
    pred = trie.predict_at(trie.root_cursor(), 100)
    assert sum(p for _, p in pred.entries) == pytest.approx(1.0, abs=1e-12)


def test_prune_keeps_shared_prefix():
    trie = WeightedTrie()
    type_word(trie, "cat", 1)
    type_word(trie, "car", 2)
    type_word(trie, "dog", 3)
    removed = trie.prune_to_budget(2)
    assert removed == ["cat"]
    assert trie.word_count == 2
    # c and a are shared with "car"; only cat's final t is gone
    assert "c" in trie.root.children
    assert "a" in trie.root.children["c"].children
    assert "t" not in trie.root.children["c"].children["a"].children
    trie.validate()


def test_prune_under_budget_is_noop():
    trie = WeightedTrie()
    type_words(trie, ["cat", "dog"])
    assert trie.prune_to_budget(5) == []
    assert trie.word_count == 2


def test_prune_removes_whole_unshared_path():
    trie = WeightedTrie()
    type_word(trie, "dog", 1)
    trie.prune_to_budget(1)
    assert trie.word_count == 1
    type_word(trie, "cat", 2)
    removed = trie.prune_to_budget(1)
    assert removed == ["dog"]
    assert trie.word_count == 1
    assert trie.node_count == 3  # all three dog nodes deleted
    assert set(trie.root.children) == {"c"}
    trie.validate()


def test_prune_decrements_shared_weights():
    trie = WeightedTrie()
    type_word(trie, "do", 1)
    type_word(trie, "dog", 2)
    type_word(trie, "dog", 3)
    trie.prune_to_budget(1)  # evicts "do" (older)
    d = trie.root.children["d"]
    assert d.weight == 2
    assert d.children["o"].weight == 2
    assert d.children["o"].children["g"].word_end.count == 2
    trie.validate()


def test_prune_lru_tie_breaks_by_word():
    trie = WeightedTrie()
    type_word(trie, "bb", 5)
    type_word(trie, "aa", 5)
    removed = trie.prune_to_budget(1)
    assert removed == ["aa"]


def test_preload_single():
    trie = WeightedTrie()
    trie.preload_word("the", 9)
    node = trie.root.children["t"].children["h"].children["e"]
    assert node.weight == 1
    assert node.word_end.count == 1
    assert trie.root.children["t"].weight == 1
    trie.validate()


def test_preload_twice_accumulates():
    trie = WeightedTrie()
    trie.preload_word("the", 1)
    trie.preload_word("the", 2)
    assert trie.root.children["t"].weight == 2
    assert trie.root.children["t"].children["h"].children["e"].word_end.count == 2


def test_preload_rejects_bad_words():
    trie = WeightedTrie()
    with pytest.raises(ValueError):
        trie.preload_word("a b", 0)
    with pytest.raises(ValueError):
        trie.preload_word("", 0)


def test_predict_locality_counter():
    small = WeightedTrie()
    big = WeightedTrie()
    type_words(small, ["dog"])
    rng = random.Random(3)
    type_words(big, ["".join(rng.choice("abcdefgh") for _ in range(6)) for _ in range(3000)])
    for trie in (small, big):
        trie.visited_nodes = 0
        trie.predict_at(trie.root_cursor(), 5)
        assert trie.visited_nodes == 1


def test_iter_words():
    trie = WeightedTrie()
    type_word(trie, "dog", 1)
    type_word(trie, "do", 2)
    type_word(trie, "cat", 3)
    words = {w: (c, ts) for w, c, ts in trie.iter_words()}
    assert words == {"dog": (1, 1), "do": (1, 2), "cat": (1, 3)}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.text(alphabet="abcd", min_size=1, max_size=5),
                          st.integers(0, 1000)), min_size=1, max_size=60),
       st.integers(1, 8))
def test_prune_lru_property(words_with_times, budget):
    trie = WeightedTrie()
    latest = {}
    ts = 0
    for word, dt in words_with_times:
        ts += dt
        type_word(trie, word, ts)
        latest[word] = ts
    removed = trie.prune_to_budget(budget)
    kept = {w for w, _, _ in trie.iter_words()}
    assert trie.word_count == len(kept) <= max(budget, len(latest))
    for gone in removed:
        for stay in kept:
            assert latest[gone] <= latest[stay]
    trie.validate()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from("abc "), min_size=1, max_size=200))
def test_stream_invariants_at_boundaries(chars):
    trie = WeightedTrie()
    cursor = trie.root_cursor()
    ts = 0
    for ch in chars:
        ts += 1
        if ch == " ":
            cursor = trie.end_word(cursor, ts)
        else:
            cursor = trie.descend_or_create(cursor, ch)
    trie.end_word(cursor, ts + 1)  # flush
    trie.validate(at_word_boundary=True)


def test_oracle_equivalence_small_streams():
    # predict_at must match the flat-list scan oracle over a long random stream
    rng = random.Random(123)
    trie = WeightedTrie()
    oracle = FlatWordOracle()
    cursor = trie.root_cursor()
    events = random_stream(rng, 10_000, alphabet="abcdefghij", sep_prob=0.16)
    for ch, ts, _ in events:
        if ch == " ":
            if not cursor.at_root():
                oracle.add_word(cursor.prefix)
            cursor = trie.end_word(cursor, ts)
        else:
            cursor = trie.descend_or_create(cursor, ch)
        expected = oracle.predict(cursor.prefix)
        got = trie.predict_at(cursor, 10).entries
        assert [c for c, _ in got] == [c for c, _ in expected]
        for (_, p_got), (_, p_exp) in zip(got, expected):
            assert p_got == pytest.approx(p_exp, abs=1e-12)
