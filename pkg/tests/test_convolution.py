import itertools
import random
from fractions import Fraction
from math import comb

import pytest

import prepcrystal.linalg as la
from prepcrystal.catalog import b2_fixtures, sample_locally_free
from prepcrystal.convolution import (ConvBudget, ConvExpr, efactor, eval_expr,
                                     euler_eval, flag_count_fq, modfactor,
                                     next_prime, qbinom, rho_eval,
                                     semicanonical_construct, serre_element,
                                     word_of_indices)
from prepcrystal.fields import GFp, QQ
from prepcrystal.genericops import GenericityPolicy
from prepcrystal.modrep import (base_change, direct_sum, find_iso, make_E,
                                quotient_rep, sub_rep)
from prepcrystal.cartan import validate_datum


# -- independent oracle: brute-force flag counting over tiny fields -------------


def _all_subspaces(field, d, k):
    if k == 0:
        yield field.zeros(0, d)
        return
    q = field.p
    seen = set()
    for vecs in itertools.product(itertools.product(range(q), repeat=d),
                                  repeat=k):
        A = field.wrap([list(v) for v in vecs])
        if la.rank(field, A) != k:
            continue
        R = la.row_space(field, A)
        key = la.mat_bytes(field, R)
        if key not in seen:
            seen.add(key)
            yield R


def _brute_submodules(M, dims_sub):
    f = M.field
    choices = [list(_all_subspaces(f, M.dims[v], dims_sub[v]))
               for v in range(M.datum.n)]
    for combo in itertools.product(*choices):
        ok = True
        for name, arrow in M.quiver.arrows.items():
            j, i = arrow.source - 1, arrow.target - 1
            img = la.mul(f, combo[j], la.transpose(M.mats[name]))
            if la.express_in_rows(f, img, combo[i]) is None:
                ok = False
                break
        if ok:
            yield combo


def brute_flag_count(M, word, rng):
    """Enumerate every submodule chain directly (tiny inputs only)."""
    if not word:
        return 1 if M.is_zero() else 0
    factor = word[-1]
    if factor[0] == "E":
        _, i, p = factor
        A = make_E(M.datum, i, M.field)
        if p > 1:
            A = direct_sum([A] * p)
    else:
        A = factor[2]
    dims_sub = tuple(M.dims[v] - A.dims[v] for v in range(M.datum.n))
    if any(x < 0 for x in dims_sub):
        return 0
    total = 0
    for combo in _brute_submodules(M, dims_sub):
        quot, _ = quotient_rep(M, list(combo), check=False)
        if find_iso(quot, A, rng, exhaustive=True) is not None:
            U = sub_rep(M, list(combo), check=False)
            total += brute_flag_count(U, word[:-1], rng)
    return total


# -- expressions ------------------------------------------------------------------


def test_serre_element_shapes(b2, big62):
    a1a1 = validate_datum([[2, 0], [0, 2]], [1, 1], [])
    comm = serre_element(a1a1, 1, 2)
    assert sorted(c for _, c in comm.items()) == [-1, 1]
    th12 = serre_element(b2, 1, 2)
    assert sorted(c for _, c in th12.items()) == [-2, 1, 1]
    big = serre_element(big62, 1, 2)
    coeffs = sorted(abs(c) for _, c in big.items())
    assert coeffs == sorted(comb(7, k) for k in range(8))
    assert len(big.items()) == 8


def test_convexpr_algebra():
    e = ConvExpr.monomial(word_of_indices([1]), 2)
    f = e - e
    assert f.items() == []
    g = e.mul_monomial(efactor(2, 3))
    (w, c), = g.items()
    assert w == (efactor(1), efactor(2, 3)) and c == 2


def test_qbinom():
    assert qbinom(2, 1, 5) == 6
    assert qbinom(6, 1, 2) == 63
    assert qbinom(4, 2, 3) == 130
    assert next_prime(5) == 7 and next_prime(13) == 17


# -- flag counts vs the brute oracle ------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
def test_flag_counts_vs_brute_E1_square(q, rng):
    datum, fx = b2_fixtures(GFp(q))
    M = direct_sum([fx["E_1"], fx["E_1"]])
    word = (efactor(1), efactor(1))
    got = flag_count_fq(M, word)
    assert got == brute_flag_count(M, word, rng)
    assert got == q * q + q  # an A^1-bundle over P^1, not P^1 itself


@pytest.mark.parametrize("q", [2, 3])
def test_flag_counts_vs_brute_more(q, rng):
    datum, fx = b2_fixtures(GFp(q))
    cases = [
        (fx["X"], word_of_indices([1, 2, 1])),
        (fx["E_1"], (efactor(1),)),
        (fx["E_1"], (efactor(2),)),
        (fx["T_2"], word_of_indices([1, 2])),
        (fx["T_2"], word_of_indices([2, 1])),
        (fx["P_2"], word_of_indices([2, 1, 2])),
        (direct_sum([fx["E_1"], fx["E_1"]]), (efactor(1, 2),)),
    ]
    for M, word in cases:
        assert flag_count_fq(M, word) == brute_flag_count(M, word, rng), word


def test_flag_count_trivialities(policy, b2):
    datum, fx = b2_fixtures(GFp(5))
    assert flag_count_fq(fx["E_1"], (efactor(1),)) == 1
    assert flag_count_fq(fx["E_1"], (efactor(2),)) == 0
    from prepcrystal.modrep import zero_rep
    assert flag_count_fq(zero_rep(b2, GFp(5)), ()) == 1
    assert flag_count_fq(fx["E_1"], ()) == 0


def test_flag_count_base_change_invariance(rng):
    datum, fx = b2_fixtures(GFp(7))
    M = fx["X"]
    word = word_of_indices([1, 2, 1])
    base = flag_count_fq(M, word)
    for _ in range(3):
        Ts = [la.rand_invertible(M.field, M.dims[v], rng) for v in range(2)]
        assert flag_count_fq(base_change(M, Ts), word) == base


# -- euler characteristics ------------------------------------------------------------


def test_euler_E1_square(b2fx):
    M = direct_sum([b2fx["E_1"], b2fx["E_1"]])
    poly = euler_eval(M, (efactor(1), efactor(1)))
    assert poly.euler == 2                       # chi of the flag family
    assert poly.coeffs == (0, 1, 1)              # q^2 + q
    assert poly.heldout and poly.value(poly.heldout[0]) == poly.heldout[1]


def test_euler_values_b2(b2, b2fx):
    budget = ConvBudget()
    assert euler_eval(b2fx["X"], word_of_indices([1, 2, 1]), budget).euler == 1
    th12 = serre_element(b2, 1, 2)
    assert eval_expr(b2fx["X"], th12, budget) == -2
    M1 = direct_sum([b2fx["T_1"], b2fx["E_1"]])
    M2 = direct_sum([b2fx["T_2"], b2fx["E_1"]])
    half211 = ConvExpr.monomial(word_of_indices([2, 1, 1]), Fraction(1, 2))
    half112 = ConvExpr.monomial(word_of_indices([1, 1, 2]), Fraction(1, 2))
    assert eval_expr(M1, half211, budget) == 1
    assert eval_expr(M2, half211, budget) == 0
    assert eval_expr(M1, half112, budget) == 0
    assert eval_expr(M2, half112, budget) == 1


def test_mod_factor_identity(b2fx):
    """1_{X_1} * 1_{E_2} evaluated at T_4 and at X_1 + E_2.

    Both values are frozen from the brute-force oracle (the counts are 1
    and q, giving Euler values 1 and 1).
    """
    budget = ConvBudget()
    w = (modfactor("X_1", b2fx["X_1"]), efactor(2))
    assert euler_eval(b2fx["T_4"], w, budget).euler == 1
    M = direct_sum([b2fx["X_1"], b2fx["E_2"]])
    poly = euler_eval(M, w, budget)
    assert poly.coeffs == (0, 1)                 # exactly q
    assert poly.euler == 1


def test_mod_factor_vs_brute(rng, b2fx):
    for q in (2, 3):
        datum, fx = b2_fixtures(GFp(q))
        w_engine = (modfactor("X_1", b2fx["X_1"]), efactor(2))
        w_brute = (("mod", "X_1", fx["X_1"]), efactor(2))
        for name in ("T_4", "P_2"):
            assert flag_count_fq(fx[name], w_engine, ConvBudget()) == \
                brute_flag_count(fx[name], w_brute, rng)


def test_serre_vanishing_a2_classical(a2d1):
    rng = random.Random(13)
    th12 = serre_element(a2d1, 1, 2)
    budget = ConvBudget()
    for _ in range(8):
        M = sample_locally_free(a2d1, (2, 1), QQ(), rng)
        assert eval_expr(M, th12, budget) == 0


def test_comultiplication_primitivity_proxy(b2, b2fx):
    # theta_12 vanishes on proper direct sums in its weight
    th12 = serre_element(b2, 1, 2)
    budget = ConvBudget()
    for parts in (["T_1", "E_1"], ["T_2", "E_1"], ["X_2", "E_1"]):
        M = direct_sum([b2fx[p] for p in parts])
        assert eval_expr(M, th12, budget) == 0


def test_euler_non_integer_rejected(b2):
    from prepcrystal.errors import BadReduction
    datum, fx = b2_fixtures(QQ())
    M = fx["E_1"]
    bad = M.copy_with({**M.mats, "eps_1": M.field.wrap([[0, "1/2"], [0, 0]])},
                      check=False)
    from prepcrystal.modrep import reduce_mod_p
    with pytest.raises(BadReduction):
        reduce_mod_p(bad, 5)


# -- rho and semicanonical functions ---------------------------------------------------


@pytest.fixture(scope="module")
def b2_graph3(b2):
    from prepcrystal.crystal import generate_binfty
    return generate_binfty(b2, 3, GenericityPolicy(seed=0))


def test_rho_values(b2, b2_graph3):
    budget = ConvBudget()
    policy = b2_graph3.policy
    half211 = ConvExpr.monomial(word_of_indices([2, 1, 1]), Fraction(1, 2))
    nodes = [b for b in b2_graph3.node_list() if b.wt == (2, 1)]
    vals = sorted(rho_eval(b2, b.key, half211, policy, budget)
                  for b in nodes)
    assert vals == [0, 1]
    assert rho_eval(b2, (), ConvExpr.one(), policy, budget) == 1


def test_semicanonical_b2_21(b2, b2_graph3):
    budget = ConvBudget()
    funcs = semicanonical_construct(b2_graph3, (2, 1), budget=budget)
    assert len(funcs) == 2
    # the phi*_1 = 2 component gets theta_2 * 1_{E_1^2} = 1/2 th2 th1 th1
    by_phis = {b2_graph3.nodes[k].phi_star: f for k, f in funcs.items()}
    (w, c), = by_phis[(2, 0)].items()
    assert w == (efactor(2), efactor(1, 2)) and c == 1


def test_semicanonical_trivial_weights(b2, b2_graph3):
    budget = ConvBudget()
    funcs0 = semicanonical_construct(b2_graph3, (0, 0), budget=budget)
    assert list(funcs0.values())[0].items() == [((), 1)]
    funcs1 = semicanonical_construct(b2_graph3, (1, 0), budget=budget)
    (w, c), = list(funcs1.values())[0].items()
    assert w == (efactor(1),) and c == 1


def test_serre_vanishes_on_crystal_nodes(b2, g2):
    """Serre elements vanish generically on every component in their weight."""
    from prepcrystal.crystal import generate_binfty
    budget = ConvBudget()
    cases = [(b2, 4, [(1, 2), (2, 1)]), (g2, 3, [(1, 2)])]
    for datum, height, pairs in cases:
        g = generate_binfty(datum, height, GenericityPolicy(seed=2))
        for (i, j) in pairs:
            r = tuple((1 - datum.c(i, j)) if v == i - 1 else 1
                      for v in range(datum.n))
            if sum(r) > height:
                continue
            th = serre_element(datum, i, j)
            for b in g.node_list():
                if b.wt == r:
                    assert rho_eval(datum, b.key, th, g.policy, budget) == 0
