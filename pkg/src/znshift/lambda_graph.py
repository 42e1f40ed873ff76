"""Past equivalence classes of Z_N and its symbolic matrix system.

A level-``l`` vertex is one of the ``2l + 3`` classes

    P0, E(0), F(0), ..., E(l-1), F(l-1), Q(l-1), R(l-1)

where ``E(n)`` holds points starting ``c^n alpha``, ``F(n)`` points starting
``b^m c^(m+n) alpha`` (``m >= 1``), ``Q(l-1)`` the points ``c^n alpha`` with
``n >= l``, ``R(l-1)`` the remaining ``b^m c^k alpha`` and ``P0`` the points
whose leading ``b^m c^k`` block is closed by ``b``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConsistencyError, InputError
from .words import B, C, Alphabet, admissible_words, is_admissible


@dataclass(frozen=True, order=True)
class PastClass:
    kind: str  # "P", "E", "F", "Q" or "R"
    index: int = 0

    def __str__(self):
        return "P0" if self.kind == "P" else f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "PastClass":
        text = text.strip()
        if text == "P0":
            return P0
        if len(text) >= 2 and text[0] in "EFQR" and text[1:].isdigit():
            return cls(text[0], int(text[1:]))
        raise InputError(f"not a class label: {text!r}")


P0 = PastClass("P")


def E(n: int) -> PastClass:
    return PastClass("E", n)


def F(n: int) -> PastClass:
    return PastClass("F", n)


def Q(n: int) -> PastClass:
    return PastClass("Q", n)


def R(n: int) -> PastClass:
    return PastClass("R", n)


def _check_level(l: int) -> None:
    if not isinstance(l, int) or l < 2:
        raise InputError(f"levels below 2 have no explicit basis (got l={l!r})")


def level_basis(l: int) -> list[PastClass]:
    _check_level(l)
    out = [P0]
    for n in range(l):
        out += [E(n), F(n)]
    return out + [Q(l - 1), R(l - 1)]


def classify_prefix(w, l: int, a: Alphabet) -> PastClass | None:
    """Level-``l`` class forced by the prefix ``w``, or ``None`` if ``w`` does not decide it."""
    _check_level(l)
    w = a.check(w)
    if not is_admissible(w, a):
        raise InputError(f"inadmissible word {a.format(w)!r}")
    m = 0
    while m < len(w) and w[m] == B:
        m += 1
    k = 0
    while m + k < len(w) and w[m + k] == C:
        k += 1
    if m + k == len(w):
        return None
    if w[m + k] == B:
        # b^m c^k b with k >= 1
        return P0
    if m == 0:
        return E(k) if k <= l - 1 else Q(l - 1)
    d = k - m
    return F(d) if 0 <= d <= l - 1 else R(l - 1)


def class_action(s: int, target: PastClass, l: int) -> PastClass | None:
    """Level-``l`` class containing ``s . x`` for ``x`` in the level-``(l+1)`` class ``target``.

    ``None`` when ``s . x`` is not admissible.
    """
    kind, n = target.kind, target.index
    if s >= 2:
        if target in (P0, E(0), F(0)):
            return E(0)
        return None
    if s == B:
        if kind == "P":
            return P0
        if kind in "EF" and n >= 1:
            return F(n - 1)
        return R(l - 1)
    # s == C
    if kind in "PFR":
        return P0
    if kind == "E" and n + 1 <= l - 1:
        return E(n + 1)
    return Q(l - 1)


def inclusion(target: PastClass, l: int) -> PastClass:
    """The level-``l`` class containing a level-``(l+1)`` class."""
    if target == E(l) or target == Q(l):
        return Q(l - 1)
    if target == F(l) or target == R(l):
        return R(l - 1)
    return target


@dataclass
class LevelPair:
    l: int
    rows: list[PastClass]
    cols: list[PastClass]
    m_symbolic: list[list[tuple[int, ...]]]
    m_nonneg: list[list[int]]
    i_matrix: list[list[int]]

    def symbolic_transpose(self) -> list[list[tuple[int, ...]]]:
        return [list(col) for col in zip(*self.m_symbolic)]


def build_level_pair(l: int, a: Alphabet) -> LevelPair:
    rows, cols = level_basis(l), level_basis(l + 1)
    ri = {c: i for i, c in enumerate(rows)}
    sym = [[[] for _ in cols] for _ in rows]
    imat = [[0] * len(cols) for _ in rows]
    for j, target in enumerate(cols):
        for s in range(a.size):
            src = class_action(s, target, l)
            if src is not None:
                sym[ri[src]][j].append(s)
        imat[ri[inclusion(target, l)]][j] = 1
    sym = [[tuple(sorted(e)) for e in row] for row in sym]
    pair = LevelPair(l, rows, cols, sym, [[len(e) for e in row] for row in sym], imat)
    _validate(pair)
    return pair


def _validate(p: LevelPair) -> None:
    for j in range(len(p.cols)):
        if sum(p.i_matrix[i][j] for i in range(len(p.rows))) != 1:
            raise ConsistencyError(f"column {p.cols[j]} of I has no unique parent")
    for i in range(len(p.rows)):
        if not any(p.i_matrix[i]):
            raise ConsistencyError(f"row {p.rows[i]} of I is empty")
        if not any(p.m_symbolic[i]):
            raise ConsistencyError(f"row {p.rows[i]} of M is empty")
    for j in range(len(p.cols)):
        if not any(p.m_symbolic[i][j] for i in range(len(p.rows))):
            raise ConsistencyError(f"column {p.cols[j]} of M is empty")


def _sym_times_01(sym, zo):
    # (symbolic) x (0/1): multiset sums
    n, k = len(sym), len(zo[0])
    return [[sum((Counter(sym[i][j]) for j in range(len(zo)) if zo[j][c]), Counter()) for c in range(k)] for i in range(n)]


def _01_times_sym(zo, sym):
    n, k = len(zo), len(sym[0])
    return [[sum((Counter(sym[j][c]) for j in range(len(sym)) if zo[i][j]), Counter()) for c in range(k)] for i in range(n)]


def commutes(lower: LevelPair, upper: LevelPair) -> bool:
    """``I_{l,l+1} M_{l+1,l+2} == M_{l,l+1} I_{l+1,l+2}`` symbolically and on the shadows."""
    if upper.l != lower.l + 1:
        raise InputError("pairs must be at consecutive levels")
    left = _01_times_sym(lower.i_matrix, upper.m_symbolic)
    right = _sym_times_01(lower.m_symbolic, upper.i_matrix)
    if left != right:
        return False
    li = np.array(lower.i_matrix) @ np.array(upper.m_nonneg)
    rm = np.array(lower.m_nonneg) @ np.array(upper.i_matrix)
    return bool((li == rm).all())


def verify_commutation(l: int, a: Alphabet) -> bool:
    return commutes(build_level_pair(l, a), build_level_pair(l + 1, a))


@dataclass
class FollowerGroup:
    mask: bytes
    size: int
    labels: set
    n_undetermined: int
    example: tuple


@dataclass
class FollowerPartition:
    l: int
    trunc: int
    groups: list[FollowerGroup]

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def consistent(self) -> bool:
        """One class label per group, all 2l+3 labels used, undecided words only under P0."""
        labels = [g.labels for g in self.groups]
        if any(len(s) != 1 for s in labels):
            return False
        flat = [next(iter(s)) for s in labels]
        if sorted(flat) != sorted(level_basis(self.l)):
            return False
        return all(g.n_undetermined == 0 or g.labels == {P0} for g in self.groups)

    def label_of(self) -> dict[bytes, PastClass]:
        return {g.mask: next(iter(g.labels)) for g in self.groups if len(g.labels) == 1}


def follower_partition(l: int, trunc: int, a: Alphabet, budget: int | None = None) -> FollowerPartition:
    """Group admissible words of length ``trunc`` by their length-``l`` follower sets."""
    _check_level(l)
    if trunc < l + 6:
        raise InputError(f"trunc must be >= l + 6 = {l + 6}")
    words = admissible_words(trunc, a, budget)
    mus = admissible_words(l, a, budget)
    masks = kernels.follower_masks(words, mus)
    return _group(l, trunc, words, masks, a)


def _group(l, trunc, words, masks, a) -> FollowerPartition:
    packed = np.packbits(masks, axis=1)
    groups: dict[bytes, FollowerGroup] = {}
    for w, row in zip(words.tolist(), packed):
        key = row.tobytes()
        g = groups.get(key)
        if g is None:
            g = groups[key] = FollowerGroup(key, 0, set(), 0, tuple(w))
        g.size += 1
        lab = classify_prefix(w, l, a)
        if lab is None:
            g.n_undetermined += 1
        else:
            g.labels.add(lab)
    return FollowerPartition(l, trunc, sorted(groups.values(), key=lambda g: g.mask))


def follower_edges(l: int, trunc: int, a: Alphabet, budget: int | None = None) -> set[tuple[PastClass, int, PastClass]]:
    """Labelled edges between level-``l`` and level-``(l+1)`` follower classes.

    An edge ``(C, s, C')`` is recorded when ``s w`` falls in ``C`` for a word ``w``
    of ``C'``; class names come from the two follower partitions.
    """
    upper_words = admissible_words(trunc, a, budget)
    lower_words = admissible_words(trunc + 1, a, budget)
    mus_u = admissible_words(l + 1, a, budget)
    mus_l = admissible_words(l, a, budget)
    up = _group(l + 1, trunc, upper_words, kernels.follower_masks(upper_words, mus_u), a)
    lo_masks = kernels.follower_masks(lower_words, mus_l)
    lo = _group(l, trunc + 1, lower_words, lo_masks, a)
    if not (up.consistent and lo.consistent):
        raise ConsistencyError("follower partitions do not match the class labels")
    up_label, lo_label = up.label_of(), lo.label_of()
    packed_up = np.packbits(kernels.follower_masks(upper_words, mus_u), axis=1)
    packed_lo = np.packbits(lo_masks, axis=1)
    index = {tuple(w): i for i, w in enumerate(lower_words.tolist())}
    edges = set()
    for w, row in zip(upper_words.tolist(), packed_up):
        target = up_label[row.tobytes()]
        for s in range(a.size):
            i = index.get((s,) + tuple(w))
            if i is not None:
                edges.add((lo_label[packed_lo[i].tobytes()], s, target))
    return edges


def symbolic_edges(pair: LevelPair) -> set[tuple[PastClass, int, PastClass]]:
    return {
        (pair.rows[i], s, pair.cols[j])
        for i, row in enumerate(pair.m_symbolic)
        for j, entry in enumerate(row)
        for s in entry
    }


def irreducibility_witnesses(l: int, a: Alphabet, j: int | None = None) -> dict[PastClass, tuple[int, ...]]:
    """Words ``mu = nu c b`` leading into every level-``l`` class.

    Each ``mu`` is checked to force its class and to leave the scanner in a
    state where any admissible continuation stays admissible.
    """
    _check_level(l)
    aj = a.alpha(a.n_alphas if j is None else j)
    table = {}
    for k in range(l):
        table[E(k)] = (C,) * k + (aj,) * (l - k + 2)
        table[F(k)] = (B,) + (C,) * (k + 1) + (aj,) * (l - k)
    table[Q(l - 1)] = (C,) * l + (aj,) * 2
    table[R(l - 1)] = (B, B, C) + (aj,) * (l - 1)
    table[P0] = (C, B, B)
    out = {}
    for cls in level_basis(l):
        mu = table[cls] + (C, B)
        got = classify_prefix(mu, l, a)
        end = kernels.run(mu)
        if got != cls or end is None or end[0] >= 0:
            raise ConsistencyError(f"witness {a.format(mu)!r} does not lead into {cls}")
        out[cls] = mu
    return out


def format_symbolic(entry: tuple[int, ...], a: Alphabet) -> str:
    return "+".join(a.symbols[s] for s in entry) if entry else "0"
