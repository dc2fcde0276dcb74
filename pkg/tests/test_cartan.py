import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prepcrystal.cartan import (alpha, bil_euler, bil_sym, expected_dim,
                                is_dominant, kostant_count,
                                kostant_count_brute, minimal_symmetrizer,
                                nu_from_weight, positive_roots, q_dc,
                                validate_datum, weight_of_rank, weyl_dim)
from prepcrystal.errors import (BadDiagonal, BadOrientation, NonSymmetrizable,
                                NotDominant, NotFiniteType,
                                NotLocallyFreeShape)


def test_validate_b2(b2):
    assert b2.g(1, 2) == 1
    assert b2.f(1, 2) == 1 and b2.f(2, 1) == 2
    assert b2.sgn(1, 2) == 1 and b2.sgn(2, 1) == -1


def test_validate_rank1():
    d = validate_datum([[2]], [1], [])
    assert d.n == 1 and d.neighbours(1) == []


def test_validate_g2(g2):
    assert g2.g(1, 2) == 1
    assert g2.f(1, 2) == 1 and g2.f(2, 1) == 3


def test_validate_errors():
    with pytest.raises(NonSymmetrizable):
        validate_datum([[2, -1], [-2, 2]], [1, 1], [(1, 2)])
    with pytest.raises(NonSymmetrizable):
        validate_datum([[2, 1], [1, 2]], [1, 1], [(1, 2)])
    with pytest.raises(NonSymmetrizable):
        validate_datum([[2, -1], [0, 2]], [1, 1], [(1, 2)])
    with pytest.raises(BadDiagonal):
        validate_datum([[2, -1], [-2, 2]], [2, 0], [(1, 2)])
    with pytest.raises(BadOrientation):
        validate_datum([[2, -1], [-2, 2]], [2, 1], [])
    with pytest.raises(BadOrientation):
        validate_datum([[2, -1], [-2, 2]], [2, 1], [(1, 2), (2, 1)])


def test_minimal_symmetrizer(b2, g2):
    assert minimal_symmetrizer([[2, -1], [-2, 2]]) == (2, 1)
    assert minimal_symmetrizer([[2, -1], [-1, 2]]) == (1, 1)
    assert minimal_symmetrizer([[2, -1], [-3, 2]]) == (3, 1)
    # disconnected: per-component normalization
    assert minimal_symmetrizer([[2, 0], [0, 2]]) == (1, 1)


def test_bilinear_forms_b2(b2):
    assert bil_euler(b2, (2, 1), alpha(b2, 1)) == 3
    assert bil_euler(b2, (2, 1), alpha(b2, 2)) == -2
    assert q_dc(b2, (0, 0)) == 0
    # q_dc(alpha_i) = c_i
    assert q_dc(b2, alpha(b2, 1)) == 2
    assert q_dc(b2, alpha(b2, 2)) == 1
    # asymmetry of the Euler form
    assert (bil_euler(b2, alpha(b2, 1), alpha(b2, 2))
            != bil_euler(b2, alpha(b2, 2), alpha(b2, 1)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2),
       st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_form_properties(x, y):
    b2 = validate_datum([[2, -1], [-2, 2]], [2, 1], [(1, 2)])
    assert bil_sym(b2, x, y) == bil_sym(b2, y, x)
    for i in (1, 2):
        assert b2.ci(i) * bil_euler(b2, x, alpha(b2, i)) == \
            bil_sym(b2, x, alpha(b2, i))
    assert bil_sym(b2, x, x) % 2 == 0


def test_expected_dim(b2, a2d2):
    assert expected_dim(b2, (4, 1)) == 12
    assert sum(d * d for d in (4, 1)) == 17
    assert expected_dim(a2d2, (4, 2)) == 14
    assert expected_dim(b2, (0, 0)) == 0
    with pytest.raises(NotLocallyFreeShape):
        expected_dim(b2, (3, 1))


def test_positive_roots(b2, g2):
    assert len(positive_roots(b2)) == 4
    assert set(positive_roots(b2)) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    assert len(positive_roots(g2)) == 6
    a1 = validate_datum([[2]], [1], [])
    assert positive_roots(a1) == [(1,)]


def test_not_finite_type():
    affine = validate_datum([[2, -2], [-2, 2]], [1, 1], [(1, 2)])
    with pytest.raises(NotFiniteType):
        positive_roots(affine, height_cap=40)


def test_kostant_counts(b2):
    assert kostant_count(b2, (2, 1)) == 2
    assert kostant_count(b2, (1, 2)) == 3
    assert kostant_count(b2, (0, 0)) == 1


@pytest.mark.parametrize("datum_name", ["b2", "g2", "a2d2"])
def test_kostant_vs_brute(datum_name, request):
    datum = request.getfixturevalue(datum_name)
    roots = positive_roots(datum)
    for r1 in range(7):
        for r2 in range(7 - r1):
            assert kostant_count(datum, (r1, r2), roots) == \
                kostant_count_brute(datum, (r1, r2), roots)


def test_weyl_dim(b2):
    assert weyl_dim(b2, (0, 0)) == 1
    assert weyl_dim(b2, (1, 1)) == 16
    assert weyl_dim(b2, (0, 2)) == 10
    a1 = validate_datum([[2]], [1], [])
    for m in range(5):
        assert weyl_dim(a1, (m,)) == m + 1
    with pytest.raises(NotDominant):
        weyl_dim(b2, (-1, 0))


def test_nu_from_weight(b2):
    lam, mu = (1, 1), (0, 2)
    assert nu_from_weight(b2, lam, mu, (0, 0)) == (1, 3)
    # r = alpha_1 + 2 alpha_2 -> nu = pi_1 + pi_2
    assert nu_from_weight(b2, lam, mu, (1, 2)) == (1, 1)
    # r = alpha_2 -> nu = 2 pi_1 + pi_2
    assert nu_from_weight(b2, lam, mu, (0, 1)) == (2, 1)
    assert weight_of_rank(b2, (1, 0)) == (2, -2)
    assert weight_of_rank(b2, (0, 1)) == (-1, 2)
    assert is_dominant((0, 0)) and not is_dominant((1, -1))
