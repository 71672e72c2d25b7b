import random

import pytest
from hypothesis import given, settings, strategies as st

from chernflow.errors import ValidationError
from chernflow.flowcomb import (ObjectTuple, SignContext, all_posets, check_model, enumerate_poset,
                                koszul_sign_face, koszul_sign_product, oracle_face, oracle_product)
from chernflow.flowcomb.posets import (check_codim_monotone, check_face_identity, codim, concatenate,
                                       enumerate_trees, face)
from chernflow.flowcomb.signs import even_face_context, even_product_context


def tuple_of(shape):
    return ObjectTuple.make([[f"o{i}_{j}" for j in range(k)] for i, k in enumerate(shape)])


def test_single_edge_poset():
    t = tuple_of((2,))
    p = enumerate_poset(t, "o0_0", "o0_1")
    assert len(p.objects) == 1 and p.codims == [0]


def test_two_levels_cube():
    # x on level 0, y on level 1: objects x->y and x->(intermediate)->y
    t = tuple_of((2, 2))
    p = enumerate_poset(t, "o0_0", "o1_1")
    assert check_model(p).passed
    assert max(p.codims) >= 1
    assert check_codim_monotone(p)


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 1, 2), (3, 2), (1, 3, 1)])
def test_models_are_cubes(shape):
    t = tuple_of(shape)
    for p in all_posets(t):
        assert check_model(p).passed, (shape, p.x, p.y)


def test_concatenation_endpoints():
    t = tuple_of((2, 2, 2))
    a = enumerate_trees(t, "o0_0", "o1_0")
    b = enumerate_trees(t, "o1_0", "o2_1")
    for u in a:
        for v in b:
            c = concatenate(t, u, v)
            assert c.edges[0] == "o0_0" and c.edges[-1] == "o2_1"


def test_concatenate_mismatch():
    t = tuple_of((2, 2))
    a = enumerate_trees(t, "o0_0", "o0_1")[0]
    with pytest.raises(ValidationError):
        concatenate(t, a, a)


@pytest.mark.parametrize("j,jp", [(0, 1), (0, 2), (1, 3), (2, 3)])
def test_face_identity(j, jp):
    assert check_face_identity(tuple_of((1, 2, 1, 2)), j, jp).passed


def test_face_drops_level():
    t = tuple_of((1, 2, 3))
    assert face(t, 1).levels == (t.levels[0], t.levels[2])
    with pytest.raises(ValidationError):
        face(t, 5)


def test_duplicate_labels_rejected():
    with pytest.raises(ValidationError):
        ObjectTuple.make([["a"], ["a"]])


contexts = st.builds(
    lambda x, y, z, j, a, b, dI, dX: SignContext(x, y, z, j, j + a, j + a + b, dI, dX),
    *[st.integers(-6, 6)] * 3, st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
    st.integers(-4, 4), st.integers(-4, 4))


@given(contexts)
@settings(max_examples=300, deadline=None)
def test_product_sign_matches_oracle(c):
    assert koszul_sign_product(c) == oracle_product(c)


@given(contexts.filter(lambda c: c.j < c.k < c.jp))
@settings(max_examples=300, deadline=None)
def test_face_sign_matches_oracle(c):
    assert koszul_sign_face(c) == oracle_face(c)


def test_even_reductions():
    rng = random.Random(0)
    for _ in range(100):
        c = even_product_context(rng)
        assert koszul_sign_product(c) == (-1) ** (c.jp - c.k + 1)
        c = even_face_context(rng)
        assert koszul_sign_face(c) == (-1) ** (c.jp - c.k)


def test_context_validation():
    with pytest.raises(ValueError):
        SignContext(0, 0, 0, 2, 1, 3)
    with pytest.raises(TypeError):
        SignContext(0.5, 0, 0, 0, 1, 2)


def test_dot_output():
    p = enumerate_poset(tuple_of((2, 2)), "o0_0", "o1_1")
    dot = p.to_dot()
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")


def test_concatenation_codim_and_associativity():
    t = tuple_of((2, 2, 2, 1))
    A = enumerate_trees(t, "o0_0", "o1_0")
    B = enumerate_trees(t, "o1_0", "o2_1")
    C = enumerate_trees(t, "o2_1", "o3_0")
    for a in A:
        for b in B:
            assert codim(t, concatenate(t, a, b)) == codim(t, a) + codim(t, b) + 1
            for c in C:
                assert concatenate(t, concatenate(t, a, b), c) == concatenate(t, a, concatenate(t, b, c))


def test_corrupted_poset_fails_with_witness():
    p = enumerate_poset(tuple_of((2, 2)), "o0_0", "o1_1")
    extra = next((i, j) for i in range(len(p.objects)) for j in range(len(p.objects))
                 if i != j and (i, j) not in p.rel and (j, i) not in p.rel) if len(p.objects) > 2 else None
    if extra is None:
        p.rel = {r for r in p.rel if r[0] == r[1]}
    else:
        p.rel = set(p.rel) | {extra}
    rep = check_model(p)
    assert not rep.passed and rep.witness is not None
