import random

import pytest

from prepcrystal.catalog import (b2_fixtures, from_labeled_basis,
                                 make_serre_witness, sample_locally_free)
from prepcrystal.errors import PreconditionViolated, RelationFailure
from prepcrystal.fields import QQ
from prepcrystal.modrep import (check_relations, ext1_dim_direct,
                                is_crystal, is_e_filtered, is_indecomposable,
                                is_locally_free, orbit_dim, rank_vector)


def test_fixture_dims(b2fx, g2fx, a2fx):
    assert b2fx["P_1"].dims == (4, 2)
    assert b2fx["P_2"].dims == (2, 2)
    assert b2fx["E_1"].dims == (2, 0)
    assert b2fx["X"].dims == (4, 1)
    assert b2fx["Y_1"].dims == (4, 2) and b2fx["Y_2"].dims == (4, 2)
    assert g2fx["E_1"].dims == (3, 0)
    assert g2fx["Q_lambda"].dims == (3, 2)
    assert a2fx["X"].dims == (4, 2)


def test_fixtures_relation_checked(b2fx, g2fx, a2fx):
    for fx in (b2fx, g2fx, a2fx):
        for M in fx.values():
            assert check_relations(M) == []


def test_b2_rigid_modules(b2fx):
    # the 8 indecomposable rigid modules have Ext^1(M, M) = 0
    for name in ("P_1", "P_2", "E_1", "E_2", "T_1", "T_2", "T_3", "T_4"):
        assert ext1_dim_direct(b2fx[name], b2fx[name]) == 0, name
    # the non-rigid ones do not
    assert ext1_dim_direct(b2fx["X"], b2fx["X"]) > 0
    assert ext1_dim_direct(b2fx["M_lambda"], b2fx["M_lambda"]) > 0


def test_a2d2_values(a2fx, a2d2):
    from prepcrystal.cartan import expected_dim
    assert expected_dim(a2d2, (4, 2)) == 14
    assert orbit_dim(a2fx["X"]) == 13
    assert rank_vector(a2fx["X"]) == (2, 1)
    assert rank_vector(a2fx["P_1"]) == (1, 1)


def test_band_and_q_modules(b2fx, g2fx):
    M = b2fx["M_lambda"]
    assert is_locally_free(M) and rank_vector(M) == (1, 1)
    assert is_e_filtered(M) is None
    Q = g2fx["Q_lambda"]
    assert is_locally_free(Q) and rank_vector(Q) == (1, 2)
    assert is_e_filtered(Q) is not None


def test_band_module_any_lambda(b2):
    for lam in (2, 5, -3):
        _, fx = b2_fixtures(lam=lam)
        assert check_relations(fx["M_lambda"]) == []


@pytest.mark.parametrize("which,want_rank,want_dims", [
    ("b2", (2, 1), (4, 1)),
    ("g2", (2, 1), (6, 1)),
    ("big62", (7, 1), (14, 6)),
])
def test_make_serre_witness(which, want_rank, want_dims, request, bigfield):
    datum = request.getfixturevalue(which)
    W = make_serre_witness(datum, 1, 2, bigfield)
    assert W.dims == want_dims
    assert rank_vector(W) == want_rank
    assert is_locally_free(W)
    assert is_indecomposable(W)
    assert not is_crystal(W)


def test_b2_witness_matches_X_profile(b2, b2fx):
    from prepcrystal.modrep import find_iso
    W = make_serre_witness(b2, 1, 2, QQ())
    assert find_iso(W, b2fx["X"]) is not None


def test_witness_preconditions(b2):
    with pytest.raises(PreconditionViolated):
        make_serre_witness(b2, 2, 1)  # c_2 = 1 < 2
    import prepcrystal as pc
    a1a1 = pc.validate_datum([[2, 0], [0, 2]], [2, 2], [])
    with pytest.raises(PreconditionViolated):
        make_serre_witness(a1a1, 1, 2)  # c_12 = 0


def test_labeled_basis_vertex_check(b2):
    spec = {"basis": [1, 2], "actions": [["eps_1", 1, 0, 1]]}
    with pytest.raises(RelationFailure):
        from_labeled_basis(b2, spec)


def test_sample_locally_free(b2, g2, a2d2, bigfield):
    rng = random.Random(9)
    for datum in (b2, g2, a2d2):
        for _ in range(4):
            r = (rng.randrange(3), rng.randrange(3))
            M = sample_locally_free(datum, r, bigfield, rng)
            assert check_relations(M) == []
            assert is_locally_free(M)
            assert rank_vector(M) == r
