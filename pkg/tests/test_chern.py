from fractions import Fraction
from math import comb

import pytest

from chernflow.chern import (Space, bordism_character, bordism_rank_test, chern_character, cp,
                             gysin_sphere_dims, point, stable_cotangent_tangent, tangent_bundle,
                             trivial_bundle, unit_tangent_sphere_dims)
from chernflow.gca import bordism_ring


@pytest.mark.parametrize("n", range(1, 8))
def test_tangent_chern_classes(n):
    T = tangent_bundle(cp(n))
    H = T.space.ring.var("H")
    for i in range(n + 1):
        assert T.c(i) == H ** i * comb(n + 1, i)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_ch2_stable_cotangent(n):
    b = stable_cotangent_tangent(n)
    ch = chern_character(b, 2)
    H = b.space.ring.var("H")
    assert ch[0] == b.space.ring.scalar(2 * n)
    assert ch[1].is_zero()
    assert ch[2] == H * H * (n + 1)


def test_trivial_bundle_character():
    ch = chern_character(trivial_bundle(cp(2), 3), 2)
    assert ch[0] == cp(2).ring.scalar(3) and ch[1].is_zero() and ch[2].is_zero()


def test_euler_integrates_to_euler_characteristic():
    for n in range(1, 6):
        sp = cp(n)
        assert sp.integrate(tangent_bundle(sp).euler()) == n + 1


def test_dual_flips_odd_classes():
    T = tangent_bundle(cp(3))
    D = T.dual()
    for i in range(4):
        assert D.c(i) == T.c(i) * (-1) ** i


def test_bordism_characters():
    R = bordism_ring(3)
    b1, b2, b3 = R.var("b1"), R.var("b2"), R.var("b3")
    assert bordism_character(point(), top=3) == R.one()
    assert bordism_character(cp(1), top=3) == b1 * 2
    assert bordism_character(cp(2), top=3) == b1 * b1 * Fraction(9, 2) + b2 * Fraction(3, 2)


def test_bordism_multiplicative():
    R = bordism_ring(3)
    prod = bordism_character(Space([("H1", 1), ("H2", 2)]), top=3)
    assert prod == bordism_character(cp(1), top=3) * bordism_character(cp(2), top=3)


def test_rank_test_full_rank():
    for k, (r, d) in bordism_rank_test(3).items():
        assert r == d


def test_betti_of_product():
    sp = Space([("A", 1), ("B", 2)])
    assert [sp.betti(k) for k in range(0, 7)] == [1, 0, 2, 0, 2, 0, 1]


def test_unit_sphere_bundle_of_cp1():
    # unit tangent bundle of S^2 is RP^3: rational Betti numbers 1,0,0,1
    d = unit_tangent_sphere_dims(1, (0, 3))
    assert [d.get(k, 0) for k in range(4)] == [1, 0, 0, 1]


def test_gysin_trivial_euler_is_product():
    # zero Euler class, rank 2: CP^2 x S^1
    sp = cp(2)
    d = gysin_sphere_dims(sp, sp.ring.zero(), 2, (0, 6))
    assert [d[k] for k in range(7)] == [1, 1, 1, 1, 1, 1, 0]
