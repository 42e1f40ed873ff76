"""Entropy polynomial, its root beta_N, the KMS eigenvector and word-count bounds.

``beta_N`` is the unique root in ``[N, inf)`` of

    F_N(x) = x^6 - (N+3) x^5 + (3N+1) x^4 - 2(N-1) x^3 - (N+2) x^2 + N - 1

The eigen-equations of the matrix system reduce instead to the quartic

    G_N(x) = (x - 2)(x - 1)(x^2 - N x - 1) - N (x + 1)

with ``F_N = x^2 G_N + (N - 1)(x^3 + 1)``.  The two agree for N = 1 only;
for N >= 2 the root of ``G_N`` is the exponential growth rate of the word
counts and the eigenvalue of the KMS vector (see ``growth_root``).  Roots are
computed with mpmath at 60 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ConsistencyError, InputError
from .lambda_graph import build_level_pair
from .words import Alphabet, count_series

DPS = 60
BISECTION_STEPS = 200
NEWTON_STEPS = 5


def coefficients(n: int) -> list[int]:
    """Coefficients of F_N, highest degree first."""
    return [1, -(n + 3), 3 * n + 1, -2 * (n - 1), -(n + 2), 0, n - 1]


def g_poly(n, x):
    return (x - 1) * x * ((2 * n - 1) * x - (n + 1))


def h_poly(n, x):
    return (x + 1) * ((x - n) * (x - 2) * (x - 1) ** 2 * x + (n - 2) * (x - 1) * x - n * (x - 1) - 1)


def f_poly(n, x):
    return _horner(coefficients(n), x)


def f_prime(n, x):
    return _horner_prime(coefficients(n), x)


def quartic_coefficients(n: int) -> list[int]:
    """Coefficients of G_N, highest degree first."""
    return [1, -(n + 3), 3 * n + 1, -3 * (n - 1), -(n + 2)]


def g_quartic(n, x):
    return (x - 2) * (x - 1) * (x * x - n * x - 1) - n * (x + 1)


def _horner(cs, x):
    acc = 0
    for c in cs:
        acc = acc * x + c
    return acc


def _horner_prime(cs, x):
    deg, acc = len(cs) - 1, 0
    for i, c in enumerate(cs[:-1]):
        acc = acc * x + c * (deg - i)
    return acc


def _scale(n, x, cs=None) -> float:
    cs = coefficients(n) if cs is None else cs
    deg = len(cs) - 1
    return float(sum(abs(c) * abs(x) ** (deg - i) for i, c in enumerate(cs)))


def poly_eval(n: int, beta) -> tuple:
    """``(F_N, g_N, h_N)`` at ``beta``; checks ``h - g == F``.

    Exact for ``int``/``Fraction`` arguments, relative 1e-12 otherwise.
    """
    f, g, h = f_poly(n, beta), g_poly(n, beta), h_poly(n, beta)
    if isinstance(beta, (int, Fraction)):
        if h - g != f:
            raise ConsistencyError(f"h - g != F at {beta}")
    elif abs(float(h - g - f)) > 1e-12 * max(1.0, _scale(n, beta)):
        raise ConsistencyError(f"h - g != F at {beta}")
    return f, g, h


def bracket(n: int) -> tuple[int, int]:
    if n < 1:
        raise InputError("N must be >= 1")
    # N < beta_N < N + 1 only holds from N = 3 on
    return {1: (2, 3), 2: (3, 4)}.get(n, (n, n + 1))


@dataclass
class EntropyResult:
    n: int
    beta: mpmath.mpf
    residual: mpmath.mpf
    bracket: tuple[int, int]
    iterations: int

    @property
    def entropy(self) -> mpmath.mpf:
        return mpmath.log(self.beta)

    def to_dict(self) -> dict:
        return {
            "N": self.n,
            "beta": float(self.beta),
            "beta_str": mpmath.nstr(self.beta, 30),
            "residual": float(self.residual),
            "bracket": list(self.bracket),
            "iterations": self.iterations,
            "entropy_log": float(self.entropy),
        }


def _root(n: int, cs: list[int], tol: float, name: str) -> EntropyResult:
    if tol <= 0:
        raise InputError("tol must be > 0")
    lo_i, hi_i = bracket(n)
    with mpmath.workdps(DPS):
        lo, hi = mpmath.mpf(lo_i), mpmath.mpf(hi_i)
        if not (_horner(cs, lo) < 0 < _horner(cs, hi)):
            raise ConsistencyError(f"{name} does not change sign on [{lo_i}, {hi_i}]")
        its = 0
        for _ in range(BISECTION_STEPS):
            mid = (lo + hi) / 2
            if _horner(cs, mid) < 0:
                lo = mid
            else:
                hi = mid
            its += 1
        x = (lo + hi) / 2
        for _ in range(NEWTON_STEPS):
            d = _horner_prime(cs, x)
            if d == 0:
                break
            nxt = x - _horner(cs, x) / d
            its += 1
            if not (lo_i < nxt < hi_i) or nxt == x:
                break
            x = nxt
        res = abs(_horner(cs, x))
        if res > tol * _scale(n, x, cs):
            raise ConsistencyError(f"{name} residual {res} above tolerance")
        return EntropyResult(n, +x, +res, (lo_i, hi_i), its)


def beta_root(n: int, tol: float = 1e-12) -> EntropyResult:
    """Root of F_N: bisection on the sign-checked bracket, then a Newton polish."""
    return _root(n, coefficients(n), tol, f"F_{n}")


def growth_root(n: int, tol: float = 1e-12) -> EntropyResult:
    """Root of G_N, the growth rate of theta_k and the KMS eigenvalue.

    Same bracket and method as ``beta_root``; equal to it for N = 1.
    """
    return _root(n, quartic_coefficients(n), tol, f"G_{n}")


@dataclass
class KmsVector:
    n: int
    beta: mpmath.mpf
    depth: int
    p0: mpmath.mpf
    e: list = field(default_factory=list)
    f: list = field(default_factory=list)
    q: list = field(default_factory=list)
    r: list = field(default_factory=list)

    def level(self, l: int) -> list:
        """Values on the level-``l`` basis ``P0, E0, F0, ..., E(l-1), F(l-1), Q(l-1), R(l-1)``."""
        out = [self.p0]
        for k in range(l):
            out += [self.e[k], self.f[k]]
        return out + [self.q[l - 1], self.r[l - 1]]

    def to_dict(self) -> dict:
        fl = lambda xs: [float(x) for x in xs]  # noqa: E731
        return {"p0": float(self.p0), "e": fl(self.e), "f": fl(self.f), "q": fl(self.q), "r": fl(self.r)}


def kms_vector(n: int, depth: int = 30, beta=None) -> KmsVector:
    """Closed-form eigenvector entries at ``beta`` (default ``beta_N``).

    Every residual of ``kms_residuals`` vanishes only where ``G_N(beta) = 0``;
    pass ``beta=growth_root(n).beta`` for the equilibrium vector when N >= 2.
    """
    if depth < 1:
        raise InputError("depth must be >= 1")
    with mpmath.workdps(DPS):
        b = beta_root(n).beta if beta is None else mpmath.mpf(beta)
        p0 = (b - 2) * (b**2 - n * b - 1) / (n * (b**2 - 1))
        e = [(b - 2) / b ** (k + 1) for k in range(depth + 1)]
        f = [(b - 2) / ((b**2 - 1) * b ** (k + 1)) for k in range(depth + 1)]
        q = [(b - 2) / (b ** (k + 1) * (b - 1)) for k in range(depth + 1)]
        pre = (b - 2) / (n * (b - 1) ** 2 * (b + 1))
        core = (b - 2) * (b - 1) * (b**2 - n * b - 1) - n
        # r_n - r_(n+1) must equal f_(n+1), which fixes the N in front of b^-(n+1)
        r = [pre * (core + n / b ** (k + 1)) for k in range(depth + 1)]
        v = KmsVector(n, b, depth, p0, e, f, q, r)
    if min([p0] + e + f + q + r) <= 0:
        raise ConsistencyError(f"nonpositive KMS entry at beta = {mpmath.nstr(b, 15)}")
    return v


def kms_residuals(v: KmsVector, n: int | None = None) -> dict:
    """Maximum absolute residuals of the normalization, eigen-equations and recursions."""
    n = v.n if n is None else n
    b, p0, e, f, q, r = v.beta, v.p0, v.e, v.f, v.q, v.r
    d = v.depth
    with mpmath.workdps(DPS):
        res = {}
        res["normalization"] = max(
            abs(p0 + sum(e[j] + f[j] for j in range(l + 1)) + q[l] + r[l] - 1) for l in range(d + 1)
        )
        eq_p0 = [abs(2 * p0 + sum(f[: l + 1]) + r[l] - b * p0) for l in range(d + 1)]
        res["p0_row"] = max(eq_p0)
        res["e0_row"] = abs(n * (p0 + e[0] + f[0]) - b * e[0])
        res["f_rows"] = max(abs(e[k] + f[k] - b * f[k - 1]) for k in range(1, d + 1))
        res["e_rows"] = max(abs(e[k - 1] - b * e[k]) for k in range(1, d + 1))
        res["q_row"] = max(abs(e[l - 1] + e[l] + q[l] - b * q[l - 1]) for l in range(1, d + 1))
        res["r_row"] = max(abs(e[0] + f[0] + q[l] + r[l] - b * r[l - 1]) for l in range(1, d + 1))
        res["q_recursion"] = max(abs(e[l] + q[l] - q[l - 1]) for l in range(1, d + 1))
        res["r_recursion"] = max(abs(f[l] + r[l] - r[l - 1]) for l in range(1, d + 1))
        # P0 row with the full series of f: the finite-level form above is exact,
        # the infinite form is truncated at depth with a geometric tail
        tail = f[d] / (b - 1)
        r_inf = (b - 2) / (n * (b - 1) ** 2 * (b + 1)) * ((b - 2) * (b - 1) * (b**2 - n * b - 1) - n)
        res["p0_row_series"] = abs(2 * p0 + sum(f) + r_inf - b * p0)
        res["p0_row_tail_bound"] = tail
    mat = 0.0
    for l in range(2, d):
        pair = build_level_pair(l, Alphabet(n))
        hi = np.array([float(x) for x in v.level(l + 1)])
        lo = np.array([float(x) for x in v.level(l)])
        mat = max(
            mat,
            float(np.abs(np.array(pair.m_nonneg, dtype=float) @ hi - float(b) * lo).max()),
            float(np.abs(np.array(pair.i_matrix, dtype=float) @ hi - lo).max()),
        )
    out = {k: float(x) for k, x in res.items()}
    out["matrix_form"] = mat
    out["eigen_max"] = max(out[k] for k in ("p0_row", "e0_row", "f_rows", "e_rows", "q_row", "r_row"))
    out["recursion_max"] = max(out["q_recursion"], out["r_recursion"])
    return out


@dataclass
class CountSeries:
    n: int
    theta: list[int]
    roots: list[float]
    gaps: list[float]


def entropy_series(n: int, kmax: int, beta=None) -> CountSeries:
    """theta_k for k = 1..kmax, checked against ``beta^k <= theta_k``.

    theta is submultiplicative, so ``theta_k >= exp(k h_top)`` for every k;
    the check is also run against the growth root.
    """
    if kmax < 1:
        raise InputError("kmax must be >= 1")
    theta = count_series(kmax, Alphabet(n))
    with mpmath.workdps(DPS):
        b = beta_root(n).beta if beta is None else mpmath.mpf(beta)
        lam = growth_root(n).beta
        for k, t in enumerate(theta, start=1):
            for x in (b, lam):
                if t < x**k * (1 - mpmath.mpf(10) ** -40):
                    raise ConsistencyError(f"theta_{k} = {t} < {mpmath.nstr(x, 12)}^{k}")
        roots = [mpmath.mpf(t) ** (mpmath.mpf(1) / k) for k, t in enumerate(theta, start=1)]
        gaps = [float(x - b) for x in roots]
    return CountSeries(n, theta, [float(x) for x in roots], gaps)


def count_ratio(n: int, k: int) -> float:
    """``theta_k / theta_(k-1)``; tends to the growth root."""
    if k < 2:
        raise InputError("k must be >= 2")
    th = count_series(k, Alphabet(n))
    return float(mpmath.mpf(th[-1]) / th[-2])


def asymptotic_scan(ns) -> dict:
    """``(N, beta_N, beta_N / N)`` rows with the monotonicity checks."""
    ns = sorted(set(int(n) for n in ns))
    if not ns or ns[0] < 1:
        raise InputError("N values must be >= 1")
    rows = []
    with mpmath.workdps(DPS):
        for n in ns:
            b = beta_root(n).beta
            rows.append((n, b, b / n))
        increasing = all(rows[i][1] < rows[i + 1][1] for i in range(len(rows) - 1))
        tail = [row for row in rows if row[0] >= 3]
        ratio_decreasing = all(tail[i][2] > tail[i + 1][2] for i in range(len(tail) - 1))
    return {
        "rows": [(n, float(b), float(t)) for n, b, t in rows],
        "beta_increasing": increasing,
        "ratio_decreasing_from_3": ratio_decreasing,
    }
