import pytest

from chernflow.dgmodule import FreeDgModule, identity_map
from chernflow.errors import ValidationError
from chernflow.fixtures import (bracket_fixture_ell3, bracket_fixture_ell4, dx_hy,
                                scalar_extension_fixtures, spectral_fixtures)
from chernflow.gca import polynomial_ring
from chernflow.spectral import (check_page_consistency, compute_pages, e2_closed_form,
                                first_bulk_differential, page_morphism, truncation_filtration)


def ladder(m, r=6):
    return compute_pages(truncation_filtration(m), r)


@pytest.mark.parametrize("name,m", spectral_fixtures(), ids=[n for n, _ in spectral_fixtures()])
def test_converges_and_consistent(name, m):
    lad = ladder(m)
    assert lad.converges()
    assert check_page_consistency(lad) == []


@pytest.mark.parametrize("name,m", scalar_extension_fixtures(), ids=[n for n, _ in scalar_extension_fixtures()])
def test_scalar_extensions_degenerate(name, m):
    lad = ladder(m, 5)
    assert all(pg.differential_is_zero() for pg in lad.pages[1:])


def test_dx_hy_first_differential_on_page_3():
    lad = ladder(dx_hy())
    assert lad.first_nonzero == 3
    assert lad.page(2).differential_is_zero()
    assert not lad.page(3).differential_is_zero()
    assert sum(lad.einf.values()) == 1


def test_e2_closed_form_matches_engine():
    for m in (dx_hy(), bracket_fixture_ell4()[0]):
        lad = ladder(m)
        engine = {k: v for k, v in lad.page(2).dims.items() if v}
        assert engine == e2_closed_form(m)


def test_closed_form_needs_single_variable():
    R = polynomial_ring([("a", -2), ("b", -4)])
    with pytest.raises(ValidationError):
        e2_closed_form(FreeDgModule(R, [("x", 0)], {}, (-4, 0)))


def test_bracket_ell4():
    m, br = bracket_fixture_ell4()
    rep = first_bulk_differential(m, br, 4)
    assert rep.passed and rep.vanishing_ok and rep.multiplicity > 0


def test_bracket_ell3():
    m, br = bracket_fixture_ell3()
    assert first_bulk_differential(m, br, 3).passed


@pytest.mark.parametrize("fixture", [bracket_fixture_ell4, bracket_fixture_ell3])
def test_wrong_bracket_detected(fixture):
    m, br = fixture()
    ell = 4 if fixture is bracket_fixture_ell4 else 3
    src = next(iter(br))
    tgt = next(iter(br[src]))
    wrong = {s: dict(r) for s, r in br.items()}
    wrong[src][tgt] = br[src][tgt] + 1
    assert not first_bulk_differential(m, wrong, ell).passed
    assert not first_bulk_differential(m, {}, ell).passed


def test_identity_page_morphism():
    rep = page_morphism(identity_map(dx_hy()), 3)
    assert rep.natural and rep.surjective_e2 and not rep.failures


def test_ladder_json():
    doc = ladder(dx_hy()).to_json()
    assert doc["first_nonzero_differential"] == 3
    assert [row["r"] for row in doc["pages"]] == list(range(1, 7))
