import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from znshift.errors import InputError
from znshift.intlin import (
    FgAbelianGroup,
    GroupHom,
    cokernel,
    det,
    from_csv,
    hom_ext_to_Z,
    identity,
    inductive_limit,
    invariant_factors,
    kernel_basis,
    matmul,
    matvec,
    smith_normal_form,
    solve_integer,
    to_csv,
)


def _det_divisors(a, rows, cols):
    # d_k = gcd of all k x k minors; invariant factors are d_k / d_(k-1)
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[a[i][j] for j in cs] for i in rs]))
        out.append(g)
    return out


def _snf_oracle(a, rows, cols):
    dk = _det_divisors(a, rows, cols)
    diag, prev = [], 1
    for d in dk:
        if d == 0:
            diag.append(0)
            prev = 0
        else:
            diag.append(d // prev)
            prev = d
    return diag


def _random_matrix(rng, rows, cols, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_det_small():
    assert det([[2, 1], [7, 4]]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert det([]) == 1


def test_snf_known():
    s = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert s.diagonal == [2, 6, 12]
    s = smith_normal_form([[0, 0], [0, 0]])
    assert s.diagonal == [0, 0] and s.rank == 0


def test_snf_random_reconstruction():
    rng = random.Random(1234)
    for _ in range(500):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        a = _random_matrix(rng, rows, cols)
        if rng.random() < 0.2:
            # rank-deficient input
            a[-1] = [x + y for x, y in zip(a[0], a[-1])] if rows > 1 else [0] * cols
        s = smith_normal_form(a, cols)
        assert matmul(matmul(s.U, s.D), s.V) == a
        assert matmul(s.U, s.U_inv) == identity(rows)
        assert matmul(s.V, s.V_inv) == identity(cols)
        assert abs(det(s.U)) == 1 and abs(det(s.V)) == 1
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert s.D[i][j] == 0
        d = s.diagonal
        assert all(x >= 0 for x in d)
        nz = [x for x in d if x]
        assert d[: len(nz)] == nz  # zeros trail
        assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


def test_snf_matches_determinantal_divisors():
    rng = random.Random(99)
    for _ in range(150):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        a = _random_matrix(rng, rows, cols, -9, 9)
        assert smith_normal_form(a, cols).diagonal == _snf_oracle(a, rows, cols)


def test_zero_column_matrix():
    s = smith_normal_form([[], []], 0)
    assert s.rank == 0
    c = cokernel([[], []], 0)
    assert c.group == FgAbelianGroup((), 2)


@settings(max_examples=80)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4))
def test_kernel_basis(a):
    ker = kernel_basis(a, 4)
    for v in ker:
        assert matvec(a, v) == [0] * len(a)
    assert len(ker) == 4 - smith_normal_form(a, 4).rank


@settings(max_examples=80)
@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
)
def test_solve_integer_roundtrip(a, x):
    b = matvec(a, x)
    y = solve_integer(a, b, 3)
    assert y is not None and matvec(a, y) == b


def test_solve_integer_no_solution():
    assert solve_integer([[2, 0], [0, 2]], [1, 0], 2) is None
    assert solve_integer([[1, 1], [1, 1]], [1, 2], 2) is None


def test_invariant_factors():
    assert invariant_factors([2, 3]) == (6,)
    assert invariant_factors([4, 6]) == (2, 12)
    assert invariant_factors([1, 1]) == ()
    with pytest.raises(InputError):
        invariant_factors([0])


def test_group_normalization_and_str():
    g = FgAbelianGroup.from_orders([6, 4], 2)
    assert g.torsion == (2, 12) and g.free_rank == 2
    assert str(g) == "Z/2 + Z/12 + Z^2"
    assert str(FgAbelianGroup()) == "0"
    assert str(FgAbelianGroup((3,), 1)) == "Z/3 + Z"
    with pytest.raises(InputError):
        FgAbelianGroup((4, 6))
    assert FgAbelianGroup((2,), 0) + FgAbelianGroup((3,), 1) == FgAbelianGroup((6,), 1)


def test_cokernel_coordinates_and_lift():
    a = [[2, 0], [0, 3], [0, 0]]
    c = cokernel(a, 2)
    assert c.group == FgAbelianGroup((6,), 1)
    rng = random.Random(7)
    for _ in range(50):
        z = [rng.randint(-9, 9) for _ in range(3)]
        assert c.coordinates(c.lift(c.coordinates(z))) == c.coordinates(z)
    # image vectors map to zero
    assert c.coordinates(matvec(a, [5, -2])) == [0, 0]


def test_hom_ext():
    hom, ext = hom_ext_to_Z(FgAbelianGroup((5,), 1))
    assert hom == FgAbelianGroup((), 1) and ext == FgAbelianGroup((5,), 0)


def test_group_hom_checks_torsion():
    z2, z4 = FgAbelianGroup((2,)), FgAbelianGroup((4,))
    GroupHom(z2, z4, [[2]])
    with pytest.raises(InputError):
        GroupHom(z2, z4, [[1]])
    with pytest.raises(InputError):
        GroupHom(z2, FgAbelianGroup((), 1), [[1]])


def test_limit_of_identities():
    g = FgAbelianGroup((3,), 1)
    ident = identity(2)
    lim = inductive_limit([g] * 4, [GroupHom(g, g, ident)] * 3)
    assert lim.status == "stable" and lim.group == g and lim.stage == 1


def test_limit_of_doubling_is_undetermined():
    # Z -2-> Z -2-> Z ... has limit Z[1/2], not finitely generated
    z = FgAbelianGroup((), 1)
    lim = inductive_limit([z] * 4, [GroupHom(z, z, [[2]])] * 3)
    assert lim.status == "undetermined"


def test_limit_collapsing_map():
    # L-type map: psi column dies, eta absorbs it
    g = FgAbelianGroup((2,), 2)
    m = [[1, 0, 0], [0, 1, 1], [0, 0, 0]]
    lim = inductive_limit([g] * 4, [GroupHom(g, g, m)] * 3)
    assert lim.group == FgAbelianGroup((2,), 1)


def test_limit_needs_two_transitions():
    g = FgAbelianGroup((), 1)
    assert inductive_limit([g, g], [GroupHom(g, g, [[1]])]).status == "undetermined"


def test_csv_roundtrip():
    a = [[1, -2, 3], [0, 0, 10**30]]
    assert from_csv(to_csv(a)) == a
    with pytest.raises(InputError):
        from_csv("2 2\n1,2\n")
    with pytest.raises(InputError):
        from_csv("x")
