"""Flat-array replay kernels for bulk simulation.

A simulation row replays up to millions of keystrokes, which is where the
object engine's per-keystroke Python cost adds up. These kernels run the
identical state machine over a structure-of-arrays trie arena: int-encoded
characters, sibling chains kept in code-point order, word-end markers and
LRU eviction in flat arrays. One kernel call executes a whole (variant,
train_size) row.

Semantics must stay in lockstep with ``engine.PredictionEngine``; the test
suite asserts byte-identical simulation reports from both paths. Kernels are
jitted when numba is available (KEYTRIE_NUMBA=0 forces the interpreted path,
same code, much slower).

Node ids 0..T-1 are the partition roots; a cursor value below T means "at a
word boundary". Characters are dense ids assigned in code-point order, so id
comparisons reproduce code-point tie-breaking exactly.
"""

from __future__ import annotations

import numpy as np

from .accel import maybe_njit

NO_NODE = -1
SECONDS_PER_DAY = 86400


# -- encoding (plain Python, done once per simulation) ------------------------

def build_vocab(messages, extra_words=(), extra_chars=()) -> tuple[list[str], dict[str, int]]:
    """Dense char ids in code-point order over everything a run can type."""
    charset = set(extra_chars)
    for msg in messages:
        charset.update(msg.text)
    for word in extra_words:
        charset.update(word)
    vocab = sorted(charset)
    return vocab, {ch: i for i, ch in enumerate(vocab)}


def encode_messages(messages, index):
    """Concatenate message texts into one id stream with per-message offsets."""
    msg_off = np.zeros(len(messages) + 1, dtype=np.int64)
    msg_ts = np.zeros(len(messages), dtype=np.int64)
    total = 0
    for i, msg in enumerate(messages):
        total += len(msg.text)
        msg_off[i + 1] = total
        msg_ts[i] = msg.ts
    chars = np.zeros(total, dtype=np.int32)
    pos = 0
    for msg in messages:
        for ch in msg.text:
            chars[pos] = index[ch]
            pos += 1
    return chars, msg_off, msg_ts


def encode_words(words, index):
    chars = np.zeros(sum(len(w) for w in words), dtype=np.int32)
    off = np.zeros(len(words) + 1, dtype=np.int64)
    pos = 0
    for i, word in enumerate(words):
        for ch in word:
            chars[pos] = index[ch]
            pos += 1
        off[i + 1] = pos
    return chars, off


# -- jitted trie primitives ----------------------------------------------------

@maybe_njit(cache=True)
def _partition(ts, T, tz_off):
    secs = (ts + tz_off) % SECONDS_PER_DAY
    idx = (secs * T) // SECONDS_PER_DAY
    if idx > T - 1:
        idx = T - 1
    return idx


@maybe_njit(cache=True)
def _child(node, ch, key, weight, first_child, next_sib, parent, n_nodes):
    """Descend to (or create) the child with key ``ch``; weight +1.

    Sibling chains stay sorted by key so enumeration order matches the
    code-point tie-break. Returns (child, new node count).
    """
    prev = NO_NODE
    cur = first_child[node]
    while cur != NO_NODE and key[cur] < ch:
        prev = cur
        cur = next_sib[cur]
    if cur != NO_NODE and key[cur] == ch:
        weight[cur] += 1
        return cur, n_nodes
    new = n_nodes
    key[new] = ch
    weight[new] = 1
    parent[new] = node
    next_sib[new] = cur
    if prev == NO_NODE:
        first_child[node] = new
    else:
        next_sib[prev] = new
    return new, n_nodes + 1


@maybe_njit(cache=True)
def _end_word(node, t, now, we_count, we_last, we_pos, we_list, word_count):
    if we_count[node] == 0:
        pos = word_count[t]
        we_list[t, pos] = node
        we_pos[node] = pos
        word_count[t] = pos + 1
    we_count[node] += 1
    we_last[node] = now


@maybe_njit(cache=True)
def _top_children(node, n, key, weight, first_child, next_sib, cand_key, cand_w, out):
    """Top-n children by weight (ties: smaller key). Fills ``out``, returns count."""
    m = 0
    cur = first_child[node]
    while cur != NO_NODE:
        cand_key[m] = key[cur]
        cand_w[m] = weight[cur]
        m += 1
        cur = next_sib[cur]
    k = n if n < m else m
    for j in range(k):
        best = 0
        bw = np.int64(-1)
        for i in range(m):
            if cand_w[i] > bw:  # first max wins; candidates are key-ascending
                bw = cand_w[i]
                best = i
        out[j] = cand_key[best]
        cand_w[best] = -1
    return k


@maybe_njit(cache=True)
def _contains(arr, m, v):
    for i in range(m):
        if arr[i] == v:
            return True
    return False


@maybe_njit(cache=True)
def _word_less(a, b, key, parent, T):
    """Lexicographic order of the words ending at nodes a and b."""
    da = 0
    n = a
    while n >= T:
        da += 1
        n = parent[n]
    db = 0
    n = b
    while n >= T:
        db += 1
        n = parent[n]
    pa = np.empty(da, np.int32)
    n = a
    for i in range(da - 1, -1, -1):
        pa[i] = key[n]
        n = parent[n]
    pb = np.empty(db, np.int32)
    n = b
    for i in range(db - 1, -1, -1):
        pb[i] = key[n]
        n = parent[n]
    m = da if da < db else db
    for i in range(m):
        if pa[i] != pb[i]:
            return pa[i] < pb[i]
    return da < db


@maybe_njit(cache=True)
def _prune(t, budget, T, key, weight, first_child, next_sib, parent,
           we_count, we_last, we_pos, we_list, word_count):
    """Evict LRU words (ties: lexicographic) until trie t is within budget."""
    while word_count[t] > budget:
        m = word_count[t]
        victim = we_list[t, 0]
        for i in range(1, m):
            u = we_list[t, i]
            if we_last[u] < we_last[victim] or (
                    we_last[u] == we_last[victim] and _word_less(u, victim, key, parent, T)):
                victim = u
        c = we_count[victim]
        we_count[victim] = 0
        pos = we_pos[victim]
        moved = we_list[t, m - 1]
        we_list[t, pos] = moved
        we_pos[moved] = pos
        we_pos[victim] = NO_NODE
        word_count[t] = m - 1
        n = victim
        while n >= T:
            weight[n] -= c
            n = parent[n]
        n = victim
        while n >= T and first_child[n] == NO_NODE and we_count[n] == 0:
            p = parent[n]
            cur = first_child[p]
            prev = NO_NODE
            while cur != n:
                prev = cur
                cur = next_sib[cur]
            if prev == NO_NODE:
                first_child[p] = next_sib[n]
            else:
                next_sib[prev] = next_sib[n]
            n = p


# -- the whole-row kernel --------------------------------------------------------

@maybe_njit(cache=True)
def run_row(chars, msg_off, msg_ts,
            train_lo, train_hi, test_lo, test_hi,
            is_sep, sep_id,
            T, conf, diff, n_init, n_min, budget, tz_off,
            pre_chars, pre_off, pre_ts,
            auto_feedback,
            node_cap, word_cap):
    """Train on messages[train_lo:train_hi], score messages[test_lo:test_hi].

    budget < 0 disables pruning. Returns (score_sum, scored_events,
    empty_prediction_events, words_learned). Floating-point accumulation is
    per scored event in stream order, matching the object-engine path bit for
    bit.
    """
    K = is_sep.shape[0]
    key = np.full(node_cap, NO_NODE, np.int32)
    weight = np.zeros(node_cap, np.int64)
    first_child = np.full(node_cap, NO_NODE, np.int32)
    next_sib = np.full(node_cap, NO_NODE, np.int32)
    parent = np.full(node_cap, NO_NODE, np.int32)
    we_count = np.zeros(node_cap, np.int64)
    we_last = np.zeros(node_cap, np.int64)
    we_pos = np.full(node_cap, NO_NODE, np.int32)
    we_list = np.zeros((T, word_cap), np.int32)
    word_count = np.zeros(T, np.int64)
    n_nodes = T

    n_pre = pre_off.shape[0] - 1
    for t in range(T):
        for w in range(n_pre):
            node = t
            for i in range(pre_off[w], pre_off[w + 1]):
                node, n_nodes = _child(node, pre_chars[i], key, weight,
                                       first_child, next_sib, parent, n_nodes)
            _end_word(node, t, pre_ts, we_count, we_last, we_pos, we_list, word_count)

    active_t = 0
    cursor = 0
    idle = False
    n_t = n_init
    s_streak = 0
    f_streak = 0
    lp = np.empty(K, np.int32)
    lp_len = 0
    cand_key = np.empty(K, np.int32)
    cand_w = np.empty(K, np.int64)

    # training: learning only; streaks frozen, no predictions
    for mi in range(train_lo, train_hi):
        ts = msg_ts[mi]
        lo = msg_off[mi]
        hi = msg_off[mi + 1]
        for pos in range(lo, hi + 1):
            ch = chars[pos] if pos < hi else sep_id  # synthetic boundary
            if cursor < T:
                active_t = _partition(ts, T, tz_off)
                cursor = active_t
            if is_sep[ch]:
                if cursor >= T:
                    _end_word(cursor, active_t, ts, we_count, we_last, we_pos,
                              we_list, word_count)
                    if budget >= 0:
                        _prune(active_t, budget, T, key, weight, first_child,
                               next_sib, parent, we_count, we_last, we_pos,
                               we_list, word_count)
                cursor = active_t
            else:
                cursor, n_nodes = _child(cursor, ch, key, weight, first_child,
                                         next_sib, parent, n_nodes)

    words_learned = np.int64(0)
    for t in range(T):
        words_learned += word_count[t]

    # evaluation: full interaction semantics, auto-feedback on misses
    score_sum = 0.0
    scored = np.int64(0)
    empty_events = np.int64(0)
    for mi in range(test_lo, test_hi):
        ts = msg_ts[mi]
        lo = msg_off[mi]
        hi = msg_off[mi + 1]
        for pos in range(lo, hi + 1):
            ch = chars[pos] if pos < hi else sep_id
            in_lp = _contains(lp, lp_len, ch)
            fb = auto_feedback and lp_len > 0 and not in_lp
            if not is_sep[ch]:
                scored += 1
                if lp_len == 0:
                    empty_events += 1
                elif in_lp:
                    score_sum += 1.0 / lp_len
            if fb:
                idle = True
                f_streak += 1
                if f_streak >= diff:
                    n_t += 1
                    f_streak = 0
                s_streak = 0
            else:
                if in_lp:
                    s_streak += 1
                    f_streak = 0  # a success interrupts the diffidence streak
                    if s_streak >= conf:
                        n_t = n_t - 1 if n_t - 1 > n_min else n_min
                        s_streak = 0
                else:
                    s_streak = 0
            if cursor < T:
                active_t = _partition(ts, T, tz_off)
                cursor = active_t
            if is_sep[ch]:
                if cursor >= T:
                    _end_word(cursor, active_t, ts, we_count, we_last, we_pos,
                              we_list, word_count)
                    if budget >= 0:
                        _prune(active_t, budget, T, key, weight, first_child,
                               next_sib, parent, we_count, we_last, we_pos,
                               we_list, word_count)
                cursor = active_t
                idle = False
                lp_len = _top_children(cursor, n_t, key, weight, first_child,
                                       next_sib, cand_key, cand_w, lp)
            else:
                cursor, n_nodes = _child(cursor, ch, key, weight, first_child,
                                         next_sib, parent, n_nodes)
                if idle:
                    lp_len = 0
                else:
                    lp_len = _top_children(cursor, n_t, key, weight, first_child,
                                           next_sib, cand_key, cand_w, lp)
    return score_sum, scored, empty_events, words_learned
