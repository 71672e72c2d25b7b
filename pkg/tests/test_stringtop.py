from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from chernflow.errors import ValidationError
from chernflow.stringtop import LoopAlgebra, ch2_class, criterion_check, loop_dims


def sgn(e):
    return -1 if e % 2 else 1


@pytest.mark.parametrize("n", range(1, 8))
def test_generator_brackets(n):
    alg = LoopAlgebra(n)
    H, w, v = alg.var("H"), alg.var("w"), alg.var("v")
    F = alg.free
    assert alg.bracket(H, w) == -H
    assert alg.bracket_free(F.var("v"), F.var("w")) == F.var("v") * (n + 1) + \
        F.var("H") ** n * F.var("v") ** 2 * comb(n + 1, 2)
    assert alg.bracket(H * H, w) == H * H * (-2)
    # shifted degrees 0 and 1: swapping costs -(-1)^0 = -1
    assert alg.bracket(w, H) == H


def test_relations_are_ideals():
    for n in range(1, 6):
        LoopAlgebra(n)  # raises if a relation is not closed under bracket


def mono(alg, draw):
    return alg.element({"w": draw[0], "H": draw[1], "v": draw[2]})


triples = st.tuples(st.integers(0, 1), st.integers(0, 3), st.integers(0, 2))


@given(triples, triples, triples)
@settings(max_examples=150, deadline=None)
def test_jacobi_and_leibniz(t1, t2, t3):
    alg = LoopAlgebra(3)
    a, b, c = (mono(alg, t) for t in (t1, t2, t3))
    if a.is_zero() or b.is_zero() or c.is_zero():
        return
    da, db, dc = (x.degree() - 1 for x in (a, b, c))
    br = alg.bracket
    # graded Jacobi for a degree -1 bracket (shifted degrees)
    j = (br(a, br(b, c)) * sgn(da * dc) + br(b, br(c, a)) * sgn(db * da)
         + br(c, br(a, b)) * sgn(dc * db))
    assert j.is_zero()
    # Poisson rule in the second slot
    bc = b * c
    if not bc.is_zero():
        assert br(a, bc) == br(a, b) * c + b * br(a, c) * sgn(da * (db + 1))


def test_antisymmetry():
    alg = LoopAlgebra(2)
    H, w, v = alg.var("H"), alg.var("w"), alg.var("v")
    for a, b in [(H, w), (v, w), (H * v, w), (v, H)]:
        da, db = a.degree() - 1, b.degree() - 1
        assert alg.bracket(a, b) == alg.bracket(b, a) * (-sgn(da * db))


def test_criterion_finds_w():
    for n in (2, 3, 5):
        alg = LoopAlgebra(n)
        res = criterion_check(alg, ch2_class(alg))
        assert res.witness == alg.var("w")


def test_criterion_none_for_cp1():
    alg = LoopAlgebra(1)
    assert ch2_class(alg).is_zero()
    assert criterion_check(alg, ch2_class(alg)).witness is None


def test_inhomogeneous_rejected():
    alg = LoopAlgebra(2)
    with pytest.raises(ValidationError):
        alg.bracket(alg.var("H") + alg.var("w"), alg.var("w"))
    with pytest.raises(ValidationError):
        LoopAlgebra(0)


def test_loop_dims_nonnegative_window():
    alg = LoopAlgebra(2)
    d = loop_dims(alg, (0, 5))
    # degrees 0..5: 1, w, H, wH, H^2, 0 (w H^2 is killed)
    assert [d[k] for k in range(6)] == [1, 1, 1, 1, 1, 0]
