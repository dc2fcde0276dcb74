import json

import pytest

from prepcrystal.catalog import b2_fixtures
from prepcrystal.crystal import (b_lambda_star, b_mu, compare_kostant,
                                 emit_dot, emit_json, generate_binfty,
                                 key_weight, lr_decompose,
                                 reconstruct_from_key, star_involution_check,
                                 string_key, verify_axioms,
                                 weight_multiplicities)
from prepcrystal.errors import (GenericityExhausted, HeightInsufficient,
                                NotDominant)
from prepcrystal.genericops import GenericityPolicy, op_profile
from prepcrystal.modrep import direct_sum, rank_vector, zero_rep


@pytest.fixture(scope="module")
def b2_graph(b2):
    return generate_binfty(b2, 4, GenericityPolicy(seed=0))


def test_string_key_basics(policy, b2):
    z = zero_rep(b2, policy.field())
    assert string_key(z, policy) == ()
    datum, fx = b2_fixtures(policy.field())
    assert string_key(fx["E_1"], policy) == (1,)
    assert string_key(fx["E_2"], policy) == (0, 1)
    M = direct_sum([fx["E_1"], fx["T_1"]])
    key = string_key(M, policy)
    assert key_weight(b2, key) == (2, 1)
    assert sum(key[k] for k in range(0, len(key), 2)) == 2
    assert sum(key[k] for k in range(1, len(key), 2)) == 1


def test_string_key_stalls_on_band_module(policy):
    datum, fx = b2_fixtures(policy.field())
    with pytest.raises(GenericityExhausted):
        string_key(fx["M_lambda"], policy)


def test_reconstruct_roundtrip(policy, b2):
    datum, fx = b2_fixtures(policy.field())
    for M in (fx["E_1"], direct_sum([fx["E_1"], fx["T_1"]]), fx["P_2"]):
        key = string_key(M, policy)
        back = reconstruct_from_key(key, b2, policy)
        assert op_profile(back) == op_profile(M)
        assert string_key(back, policy) == key


def test_layers_b2(b2_graph):
    assert [len(b2_graph.layer(h)) for h in range(4)] == [1, 2, 4, 7]


def test_node_invariants(b2, b2_graph):
    for b in b2_graph.node_list():
        assert b.wt == key_weight(b2, b.key)
        assert b.wt == rank_vector(b.rep)
        # cr1 by construction
        for i in (1, 2):
            assert b.phi[i - 1] == b.eps[i - 1] + b._pairing(i)


def test_axioms_b2_h4(b2_graph):
    assert verify_axioms(b2_graph) == []


def test_kostant_b2_h4(b2_graph):
    assert compare_kostant(b2_graph) == []
    mult = weight_multiplicities(b2_graph)
    assert mult[(2, 1)] == 2
    assert mult[(1, 2)] == 3


def test_b_lambda_filters(b2_graph):
    only_root = b_lambda_star(b2_graph, (0, 0))
    assert only_root == {()}
    with pytest.raises(NotDominant):
        b_lambda_star(b2_graph, (-1, 0))
    with pytest.raises(NotDominant):
        b_mu(b2_graph, (0, -2))
    lam = (1, 1)
    stars = b_lambda_star(b2_graph, lam)
    # dual filter: *(B_lambda) = B*_lambda on representatives
    from prepcrystal.modrep import transpose_dual
    plains = b_mu(b2_graph, lam)
    mapped = set()
    for key in plains:
        S = transpose_dual(b2_graph.nodes[key].rep)
        mapped.add(string_key(S, b2_graph.policy))
    assert mapped == stars


def test_star_involution(b2_graph):
    assert star_involution_check(b2_graph) == []


def test_lr_height_guard(b2_graph):
    with pytest.raises(HeightInsufficient):
        lr_decompose(b2_graph, (1, 1), (0, 2))  # needs height 5
    pairs, complete = lr_decompose(b2_graph, (0, 0), (0, 0))
    assert pairs == [((0, 0), 1)] and complete


def test_emitters_stable(b2):
    g1 = generate_binfty(b2, 2, GenericityPolicy(seed=3))
    g2 = generate_binfty(b2, 2, GenericityPolicy(seed=3))
    assert emit_json(g1) == emit_json(g2)
    assert emit_dot(g1) == emit_dot(g2)
    data = json.loads(emit_json(g1))
    assert len(data["nodes"]) == 7
    dot = emit_dot(g1)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    # 14 nodes at height 3 per the first four layers
    g3 = generate_binfty(b2, 3, GenericityPolicy(seed=1))
    assert len(g3.nodes) == 14


def test_edge_consistency(b2_graph):
    # string key of each stored child representative equals its node key
    for (key, i, kind), tgt in sorted(b2_graph.edges.items())[:10]:
        child = b2_graph.nodes[tgt]
        assert string_key(child.rep, b2_graph.policy) == tgt


def test_classical_a2_kostant_to_height6(a2d1):
    g = generate_binfty(a2d1, 6, GenericityPolicy(seed=0))
    assert compare_kostant(g) == []
    assert verify_axioms(g) == []
