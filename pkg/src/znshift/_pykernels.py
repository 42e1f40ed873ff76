"""Pure-Python versions of the brute-force kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Symbols are encoded as ``c=0, b=1, alpha_i=1+i``; any index >= 2 is an alpha.

The scanning automaton tracks what has been read since the last alpha:
``NO_ALPHA`` (no alpha seen yet), ``BROKEN`` (the infix left the shape
``b^m c^k``) or a pair ``(m, k)``.  Reading an alpha while in ``(m, k)`` with
``m != k`` completes a forbidden factor.
"""

from itertools import product

import numpy as np

NO_ALPHA = -1
BROKEN = -2


def step(m, k, s):
    """Advance the automaton by one symbol; ``None`` on a forbidden factor."""
    if s >= 2:
        if m >= 0 and m != k:
            return None
        return 0, 0
    if m < 0:
        return m, k
    if s == 1:
        return (m + 1, 0) if k == 0 else (BROKEN, 0)
    return m, k + 1


def run(seq, m=NO_ALPHA, k=0):
    for s in seq:
        nxt = step(m, k, s)
        if nxt is None:
            return None
        m, k = nxt
    return m, k


def is_admissible(seq):
    return run(seq) is not None


def count_brute(n_alphas, length):
    total = 0
    for seq in product(range(n_alphas + 2), repeat=length):
        if run(seq) is not None:
            total += 1
    return total


def admissible_words(n_alphas, length):
    rows = [seq for seq in product(range(n_alphas + 2), repeat=length) if run(seq) is not None]
    return np.array(rows, dtype=np.int16).reshape(len(rows), length)


def follower_masks(words, mus):
    """``out[i, j]`` is True iff ``mus[j] + words[i]`` is admissible."""
    words = np.asarray(words)
    mus = np.asarray(mus)
    # the automaton is deterministic, so mu only matters through its end state
    by_state = {}
    for j, mu in enumerate(mus.tolist()):
        st = run(mu)
        if st is not None:
            by_state.setdefault(st, []).append(j)
    out = np.zeros((words.shape[0], mus.shape[0]), dtype=bool)
    for i, w in enumerate(words.tolist()):
        for st, cols in by_state.items():
            if run(w, *st) is not None:
                out[i, cols] = True
    return out
