import math
import random
from fractions import Fraction

import mpmath
import pytest

from znshift.entropy import (
    asymptotic_scan,
    beta_root,
    coefficients,
    count_ratio,
    entropy_series,
    f_poly,
    g_quartic,
    growth_root,
    kms_residuals,
    kms_vector,
    poly_eval,
    quartic_coefficients,
)
from znshift.errors import ConsistencyError, InputError

BETA_TABLE = {
    1: 2.652891650,
    2: 3.063607825,
    3: 3.670666991,
    4: 4.446202651,
    5: 5.321226229,
    6: 6.247124025,
    7: 7.199582119,
    8: 8.166942400,
}


def test_sextic_for_n1():
    assert coefficients(1) == [1, -4, 4, 0, -3, 0, 0]


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_aux_polynomials_exact(n):
    pts = [Fraction(p, q) for p, q in [(0, 1), (1, 1), (-1, 1), (7, 3), (-5, 2), (11, 7), (100, 3)]]
    for x in pts:
        f, g, h = poly_eval(n, x)
        assert h - g == f
        assert isinstance(f, Fraction)


def test_aux_polynomials_float():
    rng = random.Random(0)
    for _ in range(100):
        n, x = rng.randint(1, 50), rng.uniform(-5, 60)
        poly_eval(n, x)


@pytest.mark.parametrize("n", range(1, 12))
def test_value_at_n(n):
    assert poly_eval(n, n)[0] == -(n * n + 1) * (n * n - n + 1)


def test_bracket_signs_n2():
    assert f_poly(2, 3) < 0 < f_poly(2, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 9])
def test_sextic_quartic_identity(n):
    for x in [Fraction(k, 3) for k in range(-6, 20)]:
        assert f_poly(n, x) == x * x * g_quartic(n, x) + (n - 1) * (x**3 + 1)
        q = 0
        for c in quartic_coefficients(n):
            q = q * x + c
        assert q == g_quartic(n, x)


@pytest.mark.parametrize("n", sorted(BETA_TABLE))
def test_beta_table(n):
    r = beta_root(n)
    assert abs(float(r.beta) - BETA_TABLE[n]) < 1e-8
    lo, hi = r.bracket
    assert lo < r.beta < hi
    assert f_poly(n, lo) < 0 < f_poly(n, hi)
    assert r.residual <= 1e-12


def test_beta_closed_form_n1():
    b = beta_root(1).beta
    with mpmath.workdps(60):
        assert abs(b - (1 + mpmath.sqrt(1 + mpmath.sqrt(3)))) < mpmath.mpf(10) ** -40


def test_beta_root_guards():
    with pytest.raises(InputError):
        beta_root(2, tol=0)
    with pytest.raises(InputError):
        beta_root(0)


def test_growth_root_equals_beta_for_n1():
    assert abs(growth_root(1).beta - beta_root(1).beta) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_growth_root_is_count_growth(n):
    assert abs(count_ratio(n, 150) - float(growth_root(n).beta)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 8])
def test_growth_root_exceeds_beta(n):
    assert growth_root(n).beta > beta_root(n).beta


@pytest.mark.parametrize("n", range(1, 9))
def test_kms_positive_at_beta(n):
    v = kms_vector(n, 30)
    assert min([v.p0] + v.e + v.f + v.q + v.r) > 0


@pytest.mark.parametrize("n", range(1, 9))
def test_kms_recursions_at_beta(n):
    res = kms_residuals(kms_vector(n, 30))
    assert res["q_recursion"] <= 1e-12
    assert res["r_recursion"] <= 1e-12
    assert res["e0_row"] <= 1e-10
    assert res["f_rows"] <= 1e-10 and res["e_rows"] <= 1e-10 and res["q_row"] <= 1e-10


@pytest.mark.parametrize("n", range(1, 9))
def test_kms_at_growth_root_solves_everything(n):
    v = kms_vector(n, 30, beta=growth_root(n).beta)
    res = kms_residuals(v)
    assert min([v.p0] + v.e + v.f + v.q + v.r) > 0
    assert res["normalization"] <= 1e-10
    assert res["eigen_max"] <= 1e-10
    assert res["recursion_max"] <= 1e-12
    assert res["matrix_form"] <= 1e-10
    assert res["p0_row_series"] <= res["p0_row_tail_bound"] * (1 + 1e-6) + 1e-15


def test_kms_n1_closed_values():
    v = kms_vector(1, 5)
    b = v.beta
    with mpmath.workdps(60):
        assert abs(v.p0 - 1 / (b - 1) ** 2) < 1e-40
        assert abs(v.e[0] - (b - 2) / b) < 1e-40
    assert abs(float(v.p0) - 0.366026) < 1e-6
    s = v.p0 + v.e[0] + v.f[0] + v.q[0] + v.r[0]
    assert abs(s - 1) < 1e-9


def test_kms_vector_rejects_bad_input():
    with pytest.raises(InputError):
        kms_vector(2, 0)
    with pytest.raises(ConsistencyError):
        kms_vector(2, 4, beta=1.5)


def test_kms_level_vector():
    v = kms_vector(2, 6)
    lv = v.level(3)
    assert len(lv) == 9
    assert lv[-2] == v.q[2] and lv[-1] == v.r[2]


@pytest.mark.parametrize("n,k", [(1, 1), (1, 10), (2, 12), (3, 20)])
def test_entropy_series(n, k):
    s = entropy_series(n, k)
    assert len(s.theta) == k
    b = float(beta_root(n).beta)
    assert all(r >= b - 1e-12 for r in s.roots)
    assert s.theta[0] == n + 2


def test_entropy_series_rejects_too_large_beta():
    with pytest.raises(ConsistencyError):
        entropy_series(1, 5, beta=3.5)


def test_asymptotic_scan():
    sc = asymptotic_scan(list(range(1, 101)) + [1000])
    assert sc["beta_increasing"] and sc["ratio_decreasing_from_3"]
    n, b, ratio = sc["rows"][-1]
    assert n == 1000 and 1 < ratio < 1.01
    assert math.isclose(b / n, ratio)
