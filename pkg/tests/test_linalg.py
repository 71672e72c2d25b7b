import importlib
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chernflow import _elim_py, linalg

small = st.integers(-5, 5)
matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=0, max_size=6).map(lambda r: (r, c)))


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_nullity(mc):
    rows, ncols = mc
    r = linalg.rank(rows, ncols)
    ker = linalg.nullspace(rows, ncols)
    assert r + len(ker) == ncols
    for v in ker:
        assert linalg.is_zero(linalg.matvec(rows, v))


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_solve_consistent(mc):
    rows, ncols = mc
    x = [Fraction(i - 2, 3) for i in range(ncols)]
    b = linalg.matvec(rows, x)
    sol = linalg.solve(rows, b, ncols)
    assert sol is not None and linalg.matvec(rows, sol) == b


def test_solve_inconsistent():
    assert linalg.solve([[1, 1], [2, 2]], [1, 3], 2) is None


def test_rref_fractions():
    R, piv = linalg.rref([[Fraction(1, 2), 1], [1, Fraction(1, 3)]], 2)
    assert piv == [0, 1]
    assert R == [[1, 0], [0, 1]]


def test_backends_agree():
    try:
        compiled = importlib.import_module("chernflow._elim")
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(3)
    for _ in range(50):
        n, m = rng.randint(1, 8), rng.randint(1, 8)
        M = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(n)]
        assert compiled.rref_int([r[:] for r in M], m, -1) == _elim_py.rref_int([r[:] for r in M], m, -1)


def test_pure_env_var(monkeypatch):
    import subprocess, sys
    out = subprocess.run([sys.executable, "-c", "import chernflow; print(chernflow.BACKEND)"],
                         env={"CHERNFLOW_PURE": "1", "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
