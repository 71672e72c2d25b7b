import random
from fractions import Fraction

import pytest

from chernflow.dgmodule import module_homology
from chernflow.errors import PreconditionError, ValidationError
from chernflow.gca import polynomial_ring
from chernflow.morse import (CountTables, FloerSkeleton, MorseModel, assemblers_agree, build_bulk_complex,
                             build_interpolating_complex, build_twisted_complex, simplex_from_twisted_data,
                             validate_boundary_identity)
from chernflow.morse.bulk import assemble_by_clusters, assemble_by_interleavings, morse_complex
from chernflow.morse.synthetic import (perturb, random_bulk_instance, random_interpolating_instance,
                                       random_simplex_instance, sensitive_entries)
from chernflow.morse.twisted import (build_ch_bulk_complex, ch_integral_table, exp_form_table,
                                     integral_table_from_json, integral_table_to_json, stokes_check)


def dims(m, window):
    return {r.degree: r.dim for r in module_homology(m, window)}


# -- Morse models ---------------------------------------------------------------------

def circle():
    return MorseModel({"m": 0, "M": 1}, {("M", "m"): [1, -1]}, {1: {"M": 1}})


def test_morse_complex_of_circle():
    m = circle()
    m.check_d_squared()
    assert dims(morse_complex(m), (0, 1)) == {0: 1, 1: 1}


def test_morse_d_squared_witness():
    bad = MorseModel({"a": 0, "b": 1, "c": 2}, {("b", "a"): 1, ("c", "b"): 1})
    with pytest.raises(PreconditionError) as e:
        bad.check_d_squared()
    assert e.value.witness is not None


def test_morse_degree_validation():
    with pytest.raises(ValidationError):
        MorseModel({"a": 0, "b": 2}, {("b", "a"): 1})
    with pytest.raises(ValidationError):
        MorseModel({"a": 0}, {}, {1: {"zz": 1}})


def test_non_cocycle_rejected():
    m = MorseModel({"a": 0, "b": 1}, {("b", "a"): 1}, {1: {"a": 1}})
    with pytest.raises(PreconditionError):
        m.check_cocycles()


def test_json_round_trips():
    inst = random_bulk_instance(random.Random(5))
    assert MorseModel.from_json(inst.m.to_json()) == inst.m
    assert FloerSkeleton.from_json(inst.fs.to_json()) == inst.fs
    assert CountTables.from_json(inst.ct.to_json()).entries == inst.ct.entries


# -- bulk tables ----------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_random_bulk_builds_and_assemblers_agree(seed):
    inst = random_bulk_instance(random.Random(seed))
    assert validate_boundary_identity(inst.ct, inst.m, inst.fs).passed
    mod = build_bulk_complex(inst.fs, inst.m, inst.ct)
    assert mod.generators
    assert assemblers_agree(inst.fs, inst.m, inst.ct)


def test_two_clusters():
    inst = random_bulk_instance(random.Random(11), ells={1: 4, 2: 6})
    build_bulk_complex(inst.fs, inst.m, inst.ct)
    ring = polynomial_ring([("h1", -2), ("h2", -4)])
    a = assemble_by_clusters(inst.fs, inst.m, inst.ct, ring)
    b = assemble_by_interleavings(inst.fs, inst.m, inst.ct, ring)
    assert a == b


@pytest.mark.parametrize("seed", range(4))
def test_perturbation_caught_with_witness(seed):
    rng = random.Random(100 + seed)
    inst = random_bulk_instance(rng)
    key = rng.choice(sensitive_entries(inst.fs, inst.m, inst.ct))
    rep = validate_boundary_identity(perturb(inst.ct, key), inst.m, inst.fs)
    assert rep.status == "fail"
    assert set(rep.witness) == {"y", "x", "word", "value"}
    with pytest.raises(PreconditionError):
        build_bulk_complex(inst.fs, inst.m, perturb(inst.ct, key))


def test_missing_entries_incomplete():
    inst = random_bulk_instance(random.Random(3))
    ct = inst.ct.copy()
    key = next(k for k in ct.entries if any(k[2]))
    del ct.entries[key]
    rep = validate_boundary_identity(ct, inst.m, inst.fs)
    assert rep.status in ("incomplete", "fail")
    assert not rep.passed


def test_odd_ell_rejected():
    inst = random_bulk_instance(random.Random(2))
    fs = FloerSkeleton(inst.fs.generators, {1: 3})
    with pytest.raises(ValidationError):
        build_bulk_complex(fs, inst.m, inst.ct)


# -- twisted complexes ----------------------------------------------------------------

def test_twisted_stokes_failure_witness():
    R = polynomial_ring([("B1", -2)])
    gens = {"x": 0, "z": 1, "y": 2}
    I = {("x", "z"): R.one(), ("z", "y"): R.one()}
    with pytest.raises(PreconditionError) as e:
        build_twisted_complex(gens, I, R)
    assert e.value.witness["via"] == ["z"]
    assert stokes_check(gens, {("x", "z"): 1, ("z", "y"): 0}) is None


def test_twisted_rejects_odd_ring():
    with pytest.raises(ValidationError):
        build_twisted_complex({"x": 0}, {}, polynomial_ring([("e", -1)]))


def test_exp_form_stokes():
    # square x -> {z1, z2} -> y with additive exponents: the two paths cancel
    R = polynomial_ring([("t", 0)]).quotient([{"t": 3}])
    t = R.var("t")
    gens = {"x": 0, "z1": 1, "z2": 1, "y": 2}
    good = {("x", "z1"): (1, 1), ("z1", "y"): (1, 2), ("x", "z2"): (1, 2), ("z2", "y"): (-1, 1)}
    I = exp_form_table(gens, good, R, t, cap=3)
    assert stokes_check(gens, I) is None
    bad = dict(good)
    bad[("z2", "y")] = (-1, 2)   # exponents no longer additive along both paths
    assert stokes_check(gens, exp_form_table(gens, bad, R, t, cap=3)) is not None


def test_integral_table_json():
    R = polynomial_ring([("B1", -2)])
    I = {("x", "y"): R.var("B1") * Fraction(1, 2)}
    assert integral_table_from_json(R, integral_table_to_json(I)) == I


def test_ch_bulk_factorials():
    gens = {"x": 0, "y": 5}
    ring, I = ch_integral_table(gens, {("x", "y"): {(2,): 6}}, [1])
    assert I[("x", "y")] == ring.var("B1") ** 2 * 3
    with pytest.raises(ValidationError):
        ch_integral_table(gens, {("x", "y"): {(1,): 1}}, [1])
    build_ch_bulk_complex(gens, {("x", "y"): {(2,): 6}}, [1])


# -- interpolation --------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(3))
def test_interpolating_reductions(seed):
    inst = random_interpolating_instance(random.Random(seed))
    res = build_interpolating_complex(inst.fs, inst.m, inst.ct, inst.psi, inst.mixed, (-12, 6))
    assert res.reductions_equal == (True, True)
    d = res.homology_dims((-12, 6))
    assert d["interpolating"] == d["twisted"] == d["bulk"]


def test_interpolating_needs_mixed_terms():
    rng = random.Random(0)
    inst = random_interpolating_instance(rng)
    while not any(v for row in inst.mixed.values() for v in row.values()):
        inst = random_interpolating_instance(rng)
    with pytest.raises(PreconditionError):
        build_interpolating_complex(inst.fs, inst.m, inst.ct, inst.psi, {}, (-12, 6))


# -- DG-nerve simplices ---------------------------------------------------------------

@pytest.mark.parametrize("n,over_b", [(1, False), (2, False), (2, True), (3, False)])
def test_simplex_and_mutants(n, over_b):
    inst = random_simplex_instance(random.Random(40 + n), n, over_b)
    objs, sigma = simplex_from_twisted_data(inst.vertices, inst.faces, inst.ring)
    assert len(objs) == n + 1
    assert inst.mutants
    for _, faces in inst.mutants:
        with pytest.raises(PreconditionError) as e:
            simplex_from_twisted_data(inst.vertices, faces, inst.ring)
        assert "face" in e.value.witness


def test_simplex_unknown_face():
    inst = random_simplex_instance(random.Random(1), 1)
    faces = dict(inst.faces)
    faces[(0, 5)] = {}
    with pytest.raises(ValidationError):
        simplex_from_twisted_data(inst.vertices, faces, inst.ring)
