"""Brute-force next-character reference model.

Stores every completed word in a flat array and derives next-character
frequencies for a prefix by scanning the whole list. Deliberately structure-
free so it can cross-check the weighted trie: same ranked candidates, same
probabilities, no shared code path.

The scan is the hot loop; it runs under numba when available, with a
vectorized numpy fallback (KEYTRIE_NUMBA=0 forces it).
"""

from __future__ import annotations

import numpy as np

from .accel import NUMBA_ENABLED, maybe_njit

_PAD = -1


@maybe_njit(cache=True)
def _scan_next_codes(mat, lens, n_words, prefix, out):
    """Collect the code point following ``prefix`` in each matching word."""
    m = 0
    L = prefix.shape[0]
    for i in range(n_words):
        if lens[i] <= L:
            continue
        ok = True
        for j in range(L):
            if mat[i, j] != prefix[j]:
                ok = False
                break
        if ok:
            out[m] = mat[i, L]
            m += 1
    return m


def _scan_next_codes_numpy(mat, lens, n_words, prefix):
    L = prefix.shape[0]
    if L >= mat.shape[1]:  # no stored word extends past this prefix
        return np.empty(0, dtype=np.int32)
    rows = mat[:n_words]
    mask = lens[:n_words] > L
    if L:
        mask &= (rows[:, :L] == prefix).all(axis=1)
    return rows[mask, L]


class FlatWordOracle:
    """Word list + scan, the independent oracle for trie predictions."""

    def __init__(self, backend: str = "auto"):
        if backend == "auto":
            backend = "numba" if NUMBA_ENABLED else "numpy"
        if backend not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self._mat = np.full((64, 16), _PAD, dtype=np.int32)
        self._lens = np.zeros(64, dtype=np.int32)
        self._n = 0
        self._scratch = np.empty(64, dtype=np.int32)

    def __len__(self) -> int:
        return self._n

    def add_word(self, word: str) -> None:
        if not word:
            raise ValueError("cannot add an empty word")
        rows, cols = self._mat.shape
        if len(word) > cols:
            wider = np.full((rows, max(cols * 2, len(word))), _PAD, dtype=np.int32)
            wider[:, :cols] = self._mat
            self._mat = wider
            cols = wider.shape[1]
        if self._n == rows:
            taller = np.full((rows * 2, cols), _PAD, dtype=np.int32)
            taller[:rows] = self._mat
            self._mat = taller
            self._lens = np.resize(self._lens, rows * 2)
            self._scratch = np.empty(rows * 2, dtype=np.int32)
        codes = [ord(c) for c in word]
        self._mat[self._n, :len(codes)] = codes
        self._lens[self._n] = len(codes)
        self._n += 1

    def predict(self, prefix: str, n: int | None = None) -> list[tuple[str, float]]:
        """Ranked (char, probability) continuations of ``prefix``.

        Sorted by probability descending, ties by ascending code point;
        truncated to ``n`` entries when given. Empty when nothing continues
        the prefix.
        """
        pre = np.array([ord(c) for c in prefix], dtype=np.int32)
        if self.backend == "numba":
            m = _scan_next_codes(self._mat, self._lens, self._n, pre, self._scratch)
            nxt = self._scratch[:m]
        else:
            nxt = _scan_next_codes_numpy(self._mat, self._lens, self._n, pre)
        if nxt.size == 0:
            return []
        codes, counts = np.unique(nxt, return_counts=True)
        total = int(counts.sum())
        ranked = sorted(zip(codes.tolist(), counts.tolist()), key=lambda kv: (-kv[1], kv[0]))
        if n is not None:
            ranked = ranked[:n]
        return [(chr(code), count / total) for code, count in ranked]
