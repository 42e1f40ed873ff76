import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from znshift import _pykernels as py
from znshift import kernels

try:
    from znshift import _ckernels as cy
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_env_forces_fallback():
    env = dict(os.environ, ZN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from znshift import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("mod", [py, pytest.param(cy, marks=needs_ext)], ids=["python", "cython"])
def test_step_rules(mod):
    assert mod.step(-1, 0, 1) == (-1, 0)
    assert mod.step(-1, 0, 2) == (0, 0)
    assert mod.step(0, 0, 1) == (1, 0)
    assert mod.step(1, 0, 0) == (1, 1)
    assert mod.step(1, 1, 1) == (-2, 0)
    assert mod.step(2, 1, 3) is None
    assert mod.step(1, 1, 3) == (0, 0)


@needs_ext
@given(st.lists(st.integers(0, 4), max_size=14))
def test_run_agrees(w):
    w = tuple(w)
    assert py.run(w) == cy.run(w)
    assert py.is_admissible(w) == cy.is_admissible(w)


@needs_ext
@pytest.mark.parametrize("n,k", [(1, 0), (1, 6), (2, 7), (3, 5)])
def test_counts_and_words_agree(n, k):
    assert py.count_brute(n, k) == cy.count_brute(n, k)
    a, b = py.admissible_words(n, k), cy.admissible_words(n, k)
    assert a.dtype == b.dtype
    np.testing.assert_array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("n,trunc,l", [(1, 8, 2), (2, 6, 3)])
def test_follower_masks_agree(n, trunc, l):
    words = py.admissible_words(n, trunc)
    mus = py.admissible_words(n, l)
    np.testing.assert_array_equal(py.follower_masks(words, mus), cy.follower_masks(words, mus))
