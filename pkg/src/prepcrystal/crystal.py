"""Truncations of the infinity crystal, built by BFS from the zero module.

Nodes are irreducible-component surrogates identified by their string
parametrization along the cyclic vertex sequence 1, 2, ..., n, 1, ...;
injectivity of the key scheme is not assumed, it is enforced at runtime
(KeyCollision on any clash of distinct invariant profiles).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cartan import (alpha, bil_euler, is_dominant, kostant_count,
                     lr_height_bound, nu_from_weight, positive_roots)
from .errors import (GenericityExhausted, HeightInsufficient, KeyCollision,
                     NotDominant)
from .genericops import (GenericityPolicy, e_plain, e_star,
                         ext_formula_check, f_plain, f_star)
from .modrep import phi, phi_star, rank_vector, transpose_dual, zero_rep


def string_key(M, policy, tag="key"):
    """Iterated maximal fac-side reductions along the cyclic sequence."""
    n = M.datum.n
    cur = M
    counts = []
    stalled = 0
    k = 0
    while not cur.is_zero():
        i = (k % n) + 1
        a = phi_star(cur, i)
        counts.append(a)
        if a == 0:
            stalled += 1
            if stalled >= n:
                raise GenericityExhausted(
                    "string reduction stalled; module is not E-filtered "
                    f"(dims {cur.dims})")
        else:
            stalled = 0
            for _ in range(a):
                cur = f_star(cur, i, policy)
        k += 1
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


def reconstruct_from_key(key, datum, policy, field=None):
    """Apply the recorded fac-side extensions in reverse, starting from 0."""
    field = field or policy.field()
    cur = zero_rep(datum, field)
    n = datum.n
    for k in range(len(key) - 1, -1, -1):
        i = (k % n) + 1
        for _ in range(key[k]):
            cur = e_star(cur, i, policy)
    return cur


def key_weight(datum, key):
    n = datum.n
    wt = [0] * n
    for k, a in enumerate(key):
        wt[(k % n)] += a
    return tuple(wt)


@dataclass
class CrystalNode:
    key: tuple
    wt: tuple
    phi: tuple
    phi_star: tuple
    eps: tuple
    eps_star: tuple
    end_dim: int
    rep: object

    @property
    def height(self):
        return sum(self.wt)

    def defect(self, i):
        return self.phi[i - 1] + self.phi_star[i - 1] - self._pairing(i)

    def _pairing(self, i):
        datum = self.rep.datum
        return bil_euler(datum, self.wt, alpha(datum, i))


class CrystalGraph:
    """Nodes keyed by string key; edges labeled (i, 'plain'|'star')."""

    def __init__(self, datum, max_height, policy):
        self.datum = datum
        self.max_height = max_height
        self.policy = policy
        self.nodes = {}
        self.edges = {}

    def node_list(self):
        return sorted(self.nodes.values(), key=lambda b: (b.height, b.key))

    def layer(self, h):
        return [b for b in self.node_list() if b.height == h]

    def e_target(self, key, i, kind):
        return self.edges.get((key, i, kind))

    def f_target(self, key, i, kind):
        """f-edges are reverses of e-edges."""
        for (k, ii, kk), tgt in self.edges.items():
            if tgt == key and ii == i and kk == kind:
                return k
        return None

    def _f_index(self, clashes=None):
        idx = {}
        for (k, i, kind), tgt in sorted(self.edges.items()):
            slot = (tgt, i, kind)
            if slot in idx and idx[slot] != k and clashes is not None:
                clashes.append(f"e~_{i} ({kind}) not injective: "
                               f"{idx[slot]} and {k} both map to {tgt}")
            idx[slot] = k
        return idx


def _node_from_rep(M, key, datum):
    n = datum.n
    wt = rank_vector(M)
    ph = tuple(phi(M, i) for i in range(1, n + 1))
    ps = tuple(phi_star(M, i) for i in range(1, n + 1))
    ep = tuple(ph[i - 1] - bil_euler(datum, wt, alpha(datum, i))
               for i in range(1, n + 1))
    eps = tuple(ps[i - 1] - bil_euler(datum, wt, alpha(datum, i))
                for i in range(1, n + 1))
    from .modrep import hom_dim
    return CrystalNode(key=key, wt=wt, phi=ph, phi_star=ps, eps=ep,
                       eps_star=eps, end_dim=hom_dim(M, M), rep=M)


def generate_binfty(datum, max_height, policy=None):
    """BFS from the zero module applying all e~_i and e~*_i operators."""
    policy = policy or GenericityPolicy()
    graph = CrystalGraph(datum, max_height, policy)
    field = policy.field()
    root_rep = zero_rep(datum, field)
    root = _node_from_rep(root_rep, (), datum)
    graph.nodes[()] = root
    frontier = [root]
    for h in range(max_height):
        next_frontier = []
        for node in sorted(frontier, key=lambda b: b.key):
            for kind, op in (("plain", e_plain), ("star", e_star)):
                for i in range(1, datum.n + 1):
                    child = op(node.rep, i, policy)
                    mism = ext_formula_check(child)
                    if mism:
                        raise GenericityExhausted(
                            f"non-generic {kind} child at {node.key}, "
                            f"vertex {i}: {mism}")
                    ckey = string_key(child, policy)
                    cnode = _node_from_rep(child, ckey, datum)
                    if ckey in graph.nodes:
                        known = graph.nodes[ckey]
                        same = (known.wt == cnode.wt
                                and known.phi == cnode.phi
                                and known.phi_star == cnode.phi_star
                                and known.end_dim == cnode.end_dim)
                        if not same:
                            raise KeyCollision(
                                f"key {ckey}: profiles "
                                f"{(known.wt, known.phi, known.phi_star, known.end_dim)} vs "
                                f"{(cnode.wt, cnode.phi, cnode.phi_star, cnode.end_dim)}")
                    else:
                        graph.nodes[ckey] = cnode
                        next_frontier.append(cnode)
                    graph.edges[(node.key, i, kind)] = ckey
        frontier = next_frontier
    return graph


# -- axiom verification ----------------------------------------------------------


def verify_axioms(graph, spot_check_fraction=0.1):
    """Check (cr1)-(cr5) for both operator families plus the lowest-weight
    crystal criteria (i)-(vi); returns the list of violations."""
    datum = graph.datum
    n = datum.n
    out = []
    f_index = graph._f_index(clashes=out)
    nodes = graph.node_list()
    H = graph.max_height

    def pairing(b, i):
        return bil_euler(datum, b.wt, alpha(datum, i))

    for b in nodes:
        for i in range(1, n + 1):
            # cr1 for both families
            if b.phi[i - 1] != b.eps[i - 1] + pairing(b, i):
                out.append(f"cr1 plain fails at {b.key}, i={i}")
            if b.phi_star[i - 1] != b.eps_star[i - 1] + pairing(b, i):
                out.append(f"cr1 star fails at {b.key}, i={i}")
            if b.defect(i) < 0:
                out.append(f"(iii) defect negative at {b.key}, i={i}")
        if b.height >= H:
            continue
        for kind in ("plain", "star"):
            for i in range(1, n + 1):
                tgt = graph.e_target(b.key, i, kind)
                if tgt is None:
                    out.append(f"(i) missing e~ {kind} edge at {b.key}, i={i}")
                    continue
                c = graph.nodes[tgt]
                want_wt = tuple(b.wt[k] + (1 if k == i - 1 else 0)
                                for k in range(n))
                if c.wt != want_wt:
                    out.append(f"cr2 weight fails on {kind} edge "
                               f"{b.key}->{tgt}, i={i}")
                phis = c.phi if kind == "plain" else c.phi_star
                base = b.phi if kind == "plain" else b.phi_star
                if phis[i - 1] != base[i - 1] + 1:
                    out.append(f"cr2 phi fails on {kind} edge "
                               f"{b.key}->{tgt}, i={i}")
                epss = c.eps if kind == "plain" else c.eps_star
                ebase = b.eps if kind == "plain" else b.eps_star
                if epss[i - 1] != ebase[i - 1] - 1:
                    out.append(f"cr2 eps fails on {kind} edge "
                               f"{b.key}->{tgt}, i={i}")
    # cr5: phi_i equals the length of the f~_i chain inside the graph
    for b in nodes:
        for kind in ("plain", "star"):
            for i in range(1, n + 1):
                steps = 0
                cur = b.key
                while True:
                    prev = f_index.get((cur, i, kind))
                    if prev is None:
                        break
                    steps += 1
                    cur = prev
                have = (b.phi if kind == "plain" else b.phi_star)[i - 1]
                if steps != have:
                    out.append(f"cr5 {kind} fails at {b.key}, i={i}: "
                               f"chain {steps}, phi {have}")
    # cr4: every node reaches the root following f~ edges
    for b in nodes:
        cur = b.key
        guard = 0
        while cur != () and guard <= 4 * (H + 1) * n:
            guard += 1
            moved = False
            for i in range(1, n + 1):
                prev = f_index.get((cur, i, "plain"))
                if prev is not None:
                    cur = prev
                    moved = True
                    break
            if not moved:
                break
        if cur != ():
            out.append(f"cr4 fails: {b.key} does not reach the root")
    # (ii), (iv), (v), (vi)
    for b in nodes:
        if b.height + 2 <= H:
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i == j:
                        continue
                    a1 = graph.e_target(b.key, j, "plain")
                    b1 = graph.e_target(b.key, i, "star")
                    p1 = graph.e_target(a1, i, "star") if a1 else None
                    p2 = graph.e_target(b1, j, "plain") if b1 else None
                    if p1 is None or p2 is None or p1 != p2:
                        out.append(f"(ii) commutation fails at {b.key}, "
                                   f"i={i}, j={j}")
        if b.height + 1 <= H:
            for i in range(1, n + 1):
                d = b.defect(i)
                t_plain = graph.e_target(b.key, i, "plain")
                t_star = graph.e_target(b.key, i, "star")
                if d == 0 and t_plain != t_star:
                    out.append(f"(iv) defect-0 split at {b.key}, i={i}")
                if d >= 1 and t_plain is not None and t_star is not None:
                    cs = graph.nodes[t_star]
                    cp = graph.nodes[t_plain]
                    if cs.phi[i - 1] != b.phi[i - 1]:
                        out.append(f"(v) phi not preserved by e~* at "
                                   f"{b.key}, i={i}")
                    if cp.phi_star[i - 1] != b.phi_star[i - 1]:
                        out.append(f"(v) phi* not preserved by e~ at "
                                   f"{b.key}, i={i}")
        if b.height + 2 <= H:
            for i in range(1, n + 1):
                if b.defect(i) >= 2:
                    t1 = graph.e_target(b.key, i, "plain")
                    t2 = graph.e_target(b.key, i, "star")
                    u1 = graph.e_target(t1, i, "star") if t1 else None
                    u2 = graph.e_target(t2, i, "plain") if t2 else None
                    if u1 is None or u1 != u2:
                        out.append(f"(vi) defect>=2 commutation fails at "
                                   f"{b.key}, i={i}")
    # spot-check: f~ edges really invert e~ edges (seeded sample)
    rng = graph.policy.fixed_rng("edge-spotcheck")
    edge_items = sorted(graph.edges.items())
    sample = [e for e in edge_items if rng.random() < spot_check_fraction]
    for (key, i, kind), tgt in sample:
        child = graph.nodes[tgt]
        op = f_plain if kind == "plain" else f_star
        back = op(child.rep, i, graph.policy)
        if back is None:
            out.append(f"edge spot-check: f~ undefined on {tgt}, i={i}")
            continue
        bkey = string_key(back, graph.policy)
        if bkey != key:
            out.append(f"edge spot-check: reverse of {key}-[{i},{kind}]->"
                       f"{tgt} lands at {bkey}")
    return out


# -- weights, multiplicities, LR ---------------------------------------------------


def weight_multiplicities(graph):
    out = {}
    for b in graph.nodes.values():
        out[b.wt] = out.get(b.wt, 0) + 1
    return out


def _weights_within_height(n, H):
    if n == 0:
        yield ()
        return
    for first in range(H + 1):
        for rest in _weights_within_height(n - 1, H - first):
            yield (first,) + rest


def compare_kostant(graph):
    """Compare node counts per weight against the Kostant-partition oracle."""
    datum = graph.datum
    roots = positive_roots(datum)
    mult = weight_multiplicities(graph)
    mismatches = []
    for r in _weights_within_height(datum.n, graph.max_height):
        want = kostant_count(datum, r, roots)
        have = mult.get(r, 0)
        if want != have:
            mismatches.append((r, have, want))
    return mismatches


def b_lambda_star(graph, lam):
    """Nodes with phi*_i <= <lambda, alpha_i> for all i."""
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    return {b.key for b in graph.nodes.values()
            if all(b.phi_star[i] <= lam[i] for i in range(graph.datum.n))}


def b_mu(graph, mu):
    """Nodes with phi_i <= <mu, alpha_i> for all i."""
    if not is_dominant(mu):
        raise NotDominant(f"{mu} is not dominant")
    return {b.key for b in graph.nodes.values()
            if all(b.phi[i] <= mu[i] for i in range(graph.datum.n))}


def lr_decompose(graph, lam, mu):
    """Littlewood-Richardson multiplicities from the double filter.

    Returns (sorted list of (nu, multiplicity) with nu dominant, complete
    flag).  Raises HeightInsufficient when the truncation provably cannot
    contain all contributing weights.
    """
    datum = graph.datum
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    if not is_dominant(mu):
        raise NotDominant(f"{mu} is not dominant")
    needed = lr_height_bound(datum, lam, mu)
    if graph.max_height < needed:
        raise HeightInsufficient(
            f"graph height {graph.max_height} < required {needed}")
    chosen = b_lambda_star(graph, lam) & b_mu(graph, mu)
    buckets = {}
    for key in chosen:
        b = graph.nodes[key]
        nu = nu_from_weight(datum, lam, mu, b.wt)
        if is_dominant(nu):
            buckets[nu] = buckets.get(nu, 0) + 1
    return sorted(buckets.items()), True


def star_involution_check(graph):
    """Transpose-dual must permute every layer, preserving weights."""
    policy = graph.policy
    problems = []
    images = {}
    for b in graph.node_list():
        S = transpose_dual(b.rep)
        skey = string_key(S, policy)
        if skey not in graph.nodes:
            problems.append(f"dual of {b.key} leaves the truncation: {skey}")
            continue
        if graph.nodes[skey].wt != b.wt:
            problems.append(f"dual of {b.key} changes weight")
        images[b.key] = skey
    for k, s in images.items():
        if images.get(s) != k:
            problems.append(f"dual not involutive on {k}")
    return problems


# -- emitters ---------------------------------------------------------------------


def emit_dot(graph, include_star=True):
    lines = ["digraph crystal {", "  rankdir=BT;"]
    index = {b.key: f"n{t}" for t, b in enumerate(graph.node_list())}
    for b in graph.node_list():
        label = (f"wt={','.join(map(str, b.wt))}\\n"
                 f"phi={','.join(map(str, b.phi))}\\n"
                 f"phi*={','.join(map(str, b.phi_star))}")
        lines.append(f'  {index[b.key]} [label="{label}"];')
    for (key, i, kind), tgt in sorted(graph.edges.items()):
        if kind == "star" and not include_star:
            continue
        suffix = "*" if kind == "star" else ""
        lines.append(f'  {index[key]} -> {index[tgt]} [label="{i}{suffix}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(graph):
    nodes = []
    for b in graph.node_list():
        nodes.append({
            "key": list(b.key),
            "wt": list(b.wt),
            "phi": list(b.phi),
            "phi_star": list(b.phi_star),
            "eps": list(b.eps),
            "eps_star": list(b.eps_star),
            "end_dim": b.end_dim,
        })
    edges = []
    for (key, i, kind), tgt in sorted(graph.edges.items()):
        edges.append({"from": list(key), "i": i, "kind": kind,
                      "to": list(tgt)})
    return json.dumps({"height": graph.max_height, "nodes": nodes,
                       "edges": edges}, sort_keys=True, indent=1)
