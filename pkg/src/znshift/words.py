"""Alphabet, words and the forbidden-factor language of Z_N.

Symbols are small integers: ``c = 0``, ``b = 1`` and ``alpha_i = 1 + i`` for
``i = 1..N``.  A word is a tuple of such integers.  The forbidden factors are
``alpha_i b^m c^k alpha_j`` with ``m != k``.
"""

from __future__ import annotations

import os
import re
from collections import defaultdict
from dataclasses import dataclass
from itertools import product

from . import kernels
from .errors import BudgetExceeded, InputError

C = 0
B = 1

DEFAULT_BRUTE_BUDGET = int(os.environ.get("ZN_BRUTE_BUDGET", 10**7))

_TOKEN = re.compile(r"\s*(a\d+|b|c)")


@dataclass(frozen=True)
class Alphabet:
    n_alphas: int

    def __post_init__(self):
        if not isinstance(self.n_alphas, int) or self.n_alphas < 1:
            raise InputError(f"N must be a positive integer, got {self.n_alphas!r}")

    @property
    def size(self) -> int:
        return self.n_alphas + 2

    @property
    def symbols(self) -> list[str]:
        return ["c", "b"] + [f"a{i}" for i in range(1, self.n_alphas + 1)]

    @property
    def alphas(self) -> range:
        return range(2, self.n_alphas + 2)

    def alpha(self, i: int) -> int:
        if not 1 <= i <= self.n_alphas:
            raise InputError(f"alpha index {i} outside 1..{self.n_alphas}")
        return 1 + i

    def check(self, w) -> tuple[int, ...]:
        w = tuple(int(s) for s in w)
        for s in w:
            if not 0 <= s < self.size:
                raise InputError(f"symbol index {s} invalid for N={self.n_alphas}")
        return w

    def parse(self, text: str) -> tuple[int, ...]:
        """Parse ``"a1 b c c a2"`` (spaces optional) into a word."""
        pos, out = 0, []
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise InputError(f"cannot parse word at {text[pos:]!r}")
            tok = m.group(1)
            out.append(C if tok == "c" else B if tok == "b" else self.alpha(int(tok[1:])))
            pos = m.end()
        return tuple(out)

    def format(self, w) -> str:
        names = self.symbols
        return " ".join(names[s] for s in w)


def contains_forbidden(w, a: Alphabet) -> bool:
    """True iff some factor of ``w`` is ``alpha_i b^m c^k alpha_j`` with ``m != k``."""
    w = a.check(w)
    alpha_pos = [i for i, s in enumerate(w) if s >= 2]
    for lo, hi in zip(alpha_pos, alpha_pos[1:]):
        infix = w[lo + 1:hi]
        m = 0
        while m < len(infix) and infix[m] == B:
            m += 1
        rest = infix[m:]
        if all(s == C for s in rest) and m != len(rest):
            return True
    return False


def is_admissible(w, a: Alphabet) -> bool:
    return not contains_forbidden(w, a)


# GapState encoding for the counting DP
NO_ALPHA = ("none",)
BROKEN = ("broken",)


def _dp_step(states: dict, n: int) -> dict:
    out = defaultdict(int)
    for st, cnt in states.items():
        if st == NO_ALPHA or st == BROKEN:
            out[st] += 2 * cnt
            out[(0, 0)] += n * cnt
            continue
        m, k = st
        if m == k:
            out[(0, 0)] += n * cnt
        out[(m + 1, 0) if k == 0 else BROKEN] += cnt
        out[(m, k + 1)] += cnt
    return out


def count_words(k: int, a: Alphabet, mode: str = "dp", budget: int | None = None) -> int:
    """Number of admissible words of length ``k`` (theta_k)."""
    if k < 0:
        raise InputError("word length must be >= 0")
    if mode == "dp":
        states = {NO_ALPHA: 1}
        for _ in range(k):
            states = _dp_step(states, a.n_alphas)
        return sum(states.values())
    if mode == "brute":
        budget = DEFAULT_BRUTE_BUDGET if budget is None else budget
        if a.size**k > budget:
            raise BudgetExceeded(f"{a.size}^{k} strings exceed budget {budget}")
        return kernels.count_brute(a.n_alphas, k)
    raise InputError(f"unknown mode {mode!r}")


def count_series(kmax: int, a: Alphabet) -> list[int]:
    """theta_1..theta_kmax from a single DP sweep."""
    states, out = {NO_ALPHA: 1}, []
    for _ in range(kmax):
        states = _dp_step(states, a.n_alphas)
        out.append(sum(states.values()))
    return out


def admissible_words(k: int, a: Alphabet, budget: int | None = None):
    """All admissible words of length ``k`` as an int16 array, lexicographic order."""
    budget = DEFAULT_BRUTE_BUDGET if budget is None else budget
    if a.size**k > budget:
        raise BudgetExceeded(f"{a.size}^{k} strings exceed budget {budget}")
    return kernels.admissible_words(a.n_alphas, k)


def exit_sets(i: int, k: int, a: Alphabet, mode: str = "definition") -> set[tuple[int, ...]]:
    """Words nu of length k with alpha_i nu_1..nu_{k-1} admissible but alpha_i nu not."""
    if k < 2:
        raise InputError("exit sets are defined for k >= 2")
    ai = a.alpha(i)
    if mode == "closed_form":
        return {
            (B,) * m + (C,) * (k - 1 - m) + (aj,)
            for m in range(k)
            if m != k - 1 - m
            for aj in a.alphas
        }
    if mode == "definition":
        out = set()
        for nu in admissible_words(k, a).tolist():
            nu = tuple(nu)
            if kernels.is_admissible((ai,) + nu[:-1]) and not kernels.is_admissible((ai,) + nu):
                out.add(nu)
        return out
    raise InputError(f"unknown mode {mode!r}")


def code_words(maxlen: int, a: Alphabet) -> list[tuple[int, ...]]:
    """Members of C_N of length <= maxlen: alpha_i w with w not of the form b^m c^k, m != k."""
    out = []
    for n in range(maxlen):
        for w in product((C, B), repeat=n):
            m = 0
            while m < n and w[m] == B:
                m += 1
            if all(s == C for s in w[m:]) and m != n - m:
                continue
            out.extend((ai,) + w for ai in a.alphas)
    return out


def sardinas_patterson(code) -> bool:
    """Unique decipherability test for a finite set of words."""
    code = {tuple(w) for w in code}
    if () in code:
        return False

    def quotient(xs, ys):
        # {v : x v = y for x in xs, y in ys}
        return {y[len(x):] for x in xs for y in ys if len(y) >= len(x) and y[:len(x)] == x}

    current = quotient(code, code) - {()}
    seen = set()
    while current:
        if () in current:
            return False
        key = frozenset(current)
        if key in seen:
            return True
        seen.add(key)
        current = quotient(code, current) | quotient(current, code)
    return True


def check_code(maxlen: int, a: Alphabet) -> bool:
    """Bounded unique-decipherability check of C_N truncated at ``maxlen``.

    Verifies only the finite truncation; it is not a proof for the infinite code.
    """
    if maxlen < 1:
        raise InputError("maxlen must be >= 1")
    return sardinas_patterson(code_words(maxlen, a))
