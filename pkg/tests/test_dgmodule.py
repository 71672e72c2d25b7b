import pytest

from chernflow.dgmodule import (FreeDgModule, ModuleMap, base_change, base_change_comparison, cone,
                                direct_sum, identity_map, module_homology, quasi_iso_check,
                                verify_dg_nerve_simplex)
from chernflow.errors import PreconditionError, ValidationError
from chernflow.fixtures import dx_hy
from chernflow.gca import GradedAlgebra, interpolating_projections, polynomial_ring, setting_to_zero

QQ = polynomial_ring([])
Rh = polynomial_ring([("h", -2)])


def dims(m, window):
    return {r.degree: r.dim for r in module_homology(m, window)}


def test_homology_over_q():
    m = FreeDgModule(QQ, [("a", 0), ("b", 1), ("c", 1), ("e", 2)],
                     {"a": {"b": 1, "c": -1}, "b": {"e": 1}, "c": {"e": 1}}, (0, 2))
    assert dims(m, (0, 2)) == {0: 0, 1: 0, 2: 0}


def test_dx_hy_homology():
    # y survives (it is hbar-torsion free only modulo the image of x)
    d = dims(dx_hy(), (-8, 4))
    assert d[3] == 1 and sum(d.values()) == 1


def test_d_squared_rejected():
    with pytest.raises(PreconditionError) as e:
        FreeDgModule(QQ, [("a", 0), ("b", 1), ("c", 2)], {"a": {"b": 1}, "b": {"c": 1}})
    assert e.value.witness == {"generator": "a"}


def test_degree_mismatch_rejected():
    with pytest.raises(ValidationError):
        FreeDgModule(Rh, [("a", 0), ("b", 1)], {"a": {"b": Rh.var("h")}})


def test_leibniz_sign_with_odd_coefficient():
    R = GradedAlgebra([("e", -1)])
    m = FreeDgModule(R, [("x", 0), ("y", 1)], {"x": {"y": 1}})
    # D(e x) = (-1)^{|e|} e D(x) = -e y
    assert m.D({"x": R.var("e")}) == {"y": -R.var("e")}


def test_json_round_trip():
    m = dx_hy()
    assert FreeDgModule.from_json(m.to_json()) == m


def test_cone_of_identity_is_acyclic():
    m = dx_hy()
    c = cone(identity_map(m))
    assert sum(dims(c, (-8, 4)).values()) == 0


def test_cone_rejects_non_chain_map():
    a = FreeDgModule(QQ, [("x", 0), ("y", 1)], {"x": {"y": 1}})
    b = FreeDgModule(QQ, [("u", 0), ("v", 1)], {})
    f = ModuleMap(a, b, {"y": {"v": 1}})
    with pytest.raises(PreconditionError):
        cone(f)


def test_map_differential_and_compose():
    m = dx_hy()
    f = identity_map(m)
    assert f.differential().is_zero()
    assert f.compose(f).matrix == f.matrix
    two = f.scale(2)
    assert (two - f - f).is_zero()


def test_quasi_iso_positive_and_negative():
    lt, pi_b, pi_h = interpolating_projections([1])
    free = FreeDgModule(lt, [("1", 0)])
    assert quasi_iso_check(base_change_comparison(free, pi_b), (-10, 0)).passed
    # killing hbar on Q[hbar] is not a quasi-isomorphism
    kill = setting_to_zero(Rh, QQ, ["h"])
    m = FreeDgModule(Rh, [("x", 0)])
    rep = quasi_iso_check(base_change_comparison(m, kill), (-6, 0))
    assert not rep.passed and rep.first_failure() is not None


def test_base_change_sets_coefficients():
    kill = setting_to_zero(Rh, QQ, ["h"])
    assert base_change(dx_hy(), kill).diff == {}


def test_direct_sum_homology_adds():
    m = dx_hy()
    s = direct_sum(m, m, ("l.", "r."))
    assert dims(s, (-8, 4))[3] == 2


def _two_simplex(bad=False):
    X = FreeDgModule(QQ, [("x", 0)])
    f = ModuleMap(X, X, {"x": {"x": 1}})
    g = ModuleMap(X, X, {"x": {"x": 2}})
    h = ModuleMap(X, X, {"x": {"x": 2 if not bad else 3}})
    k = ModuleMap(X, X, {}, -1)
    return [X, X, X], {(0, 1): f, (1, 2): g, (0, 2): h, (0, 1, 2): k}


def test_nerve_two_simplex():
    objs, sigma = _two_simplex()
    assert verify_dg_nerve_simplex(objs, sigma).passed
    objs, sigma = _two_simplex(bad=True)
    rep = verify_dg_nerve_simplex(objs, sigma)
    assert not rep.passed and rep.failing == (0, 1, 2)


def test_nerve_unknown_convention():
    objs, sigma = _two_simplex()
    with pytest.raises(ValidationError):
        verify_dg_nerve_simplex(objs, sigma, convention="other")


def test_flow_convention_on_edges():
    # on a 1-simplex the flow form is the nerve form after precomposing with (-1)^deg
    X = FreeDgModule(QQ, [("x", 0), ("y", 1)], {"x": {"y": 1}})
    f = identity_map(X)
    assert verify_dg_nerve_simplex([X, X], {(0, 1): f}).passed
    assert not verify_dg_nerve_simplex([X, X], {(0, 1): f}, convention="flow").passed
    g = ModuleMap(X, X, {"x": {"x": 1}, "y": {"y": -1}})
    assert verify_dg_nerve_simplex([X, X], {(0, 1): g}, convention="flow").passed
