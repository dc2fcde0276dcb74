"""Constructors for the named example modules and a general labeled-basis
module builder.  Every fixture is relation-checked at construction."""

from __future__ import annotations

import json
from importlib import resources

from . import linalg as la
from .cartan import validate_datum
from .errors import PreconditionViolated, RelationFailure
from .fields import QQ
from .modrep import Rep, direct_sum, make_E, make_S
from .presentation import build_quiver, preprojective_relations

__all__ = ["make_E", "make_S", "direct_sum", "from_labeled_basis",
           "make_serre_witness", "b2_datum", "g2_datum", "a2d2_datum",
           "b2_fixtures", "g2_fixtures", "a2d2_fixtures",
           "sample_locally_free"]


def from_labeled_basis(datum, spec, field=None, params=None):
    """Build a Rep from a vertex-labeled basis and a sparse action table.

    ``spec`` is ``{"basis": [vertex, ...], "actions": [[arrow, from, to,
    scalar], ...]}`` with global 0-based basis indices; a scalar may be the
    string name of a parameter supplied through ``params``.
    """
    field = field or QQ()
    params = params or {}
    basis = [int(v) for v in spec["basis"]]
    n = datum.n
    dims = [0] * n
    local = []
    for v in basis:
        local.append(dims[v - 1])
        dims[v - 1] += 1
    quiver = build_quiver(datum)
    mats = {name: field.zeros(dims[arrow.target - 1], dims[arrow.source - 1])
            for name, arrow in quiver.arrows.items()}
    for entry in spec.get("actions", []):
        name, src, dst = entry[0], int(entry[1]), int(entry[2])
        scalar = entry[3] if len(entry) > 3 else 1
        if isinstance(scalar, str) and scalar in params:
            scalar = params[scalar]
        arrow = quiver.arrows[name]
        if basis[src] != arrow.source or basis[dst] != arrow.target:
            raise RelationFailure(
                f"action {entry}: arrow {name} maps vertex {arrow.source} "
                f"to {arrow.target}, but basis vectors live at "
                f"{basis[src]} and {basis[dst]}")
        mats[name][local[dst], local[src]] = field.to_elem(scalar)
    return Rep(datum, field, dims, mats, check=True, quiver=quiver)


def _load_fixture_file(name):
    text = resources.files("prepcrystal").joinpath(f"fixtures/{name}").read_text()
    return json.loads(text)


def _datum_from_block(block):
    return validate_datum(block["C"], block["D"],
                          [tuple(p) for p in block["Omega"]])


def b2_datum():
    return _datum_from_block(_load_fixture_file("b2.json")["cartan"])


def g2_datum():
    return _datum_from_block(_load_fixture_file("g2.json")["cartan"])


def a2d2_datum():
    return _datum_from_block(_load_fixture_file("a2_d2.json")["cartan"])


def _fixtures(fname, field=None, lam=1):
    data = _load_fixture_file(fname)
    datum = _datum_from_block(data["cartan"])
    field = field or QQ()
    out = {}
    for name, spec in data["modules"].items():
        out[name] = from_labeled_basis(datum, spec, field,
                                       params={"lam": field.to_elem(lam)})
    return datum, out


def b2_fixtures(field=None, lam=1):
    """All named B2 modules: P_1, P_2, E_1, E_2, T_1..T_4, X, X_1, X_2,
    Y_1, Y_2 and the band module M_lambda."""
    return _fixtures("b2.json", field, lam)


def g2_fixtures(field=None, lam=1):
    return _fixtures("g2.json", field, lam)


def a2d2_fixtures(field=None, lam=1):
    return _fixtures("a2_d2.json", field, lam)


def make_serre_witness(datum, i, j, field=None):
    """The indecomposable locally free module X(i, j) of rank
    (1 - c_ij) alpha_i + alpha_j, built as a tree module: one copy of E_i
    per (f, g) hanging under E_j, plus one copy of E_i mapping onto E_j.
    """
    field = field or QQ()
    if datum.c(i, j) >= 0:
        raise PreconditionViolated(f"c_{i}{j} must be negative")
    if datum.ci(i) < 2:
        raise PreconditionViolated(f"c_{i} must be at least 2")
    ci, cj = datum.ci(i), datum.ci(j)
    fij, gij = datum.f(i, j), datum.g(i, j)
    basis = []
    actions = []

    def add_chain(vertex, length):
        start = len(basis)
        basis.extend([vertex] * length)
        # index start+k holds eps^(length-1-k) of the chain top
        for k in range(length - 1, 0, -1):
            actions.append((f"eps_{vertex}", start + k, start + k - 1, 1))
        return start

    socle = {}
    for f in range(1, fij + 1):
        for g in range(1, gij + 1):
            socle[(f, g)] = add_chain(i, ci)
    top = add_chain(i, ci)
    ej = add_chain(j, cj)
    for f in range(1, fij + 1):
        for g in range(1, gij + 1):
            # alpha_ij^(g) sends a_{c_j - f + 1} to the socle of copy (f, g)
            actions.append((f"a_{i}_{j}_{g}", ej + (cj - f), socle[(f, g)], 1))
    # a single arrow in the opposite direction: top of E_i onto the socle of E_j
    actions.append((f"a_{j}_{i}_1", top + (ci - 1), ej, 1))
    return from_labeled_basis(datum, {"basis": basis, "actions": actions},
                              field)


# -- random locally free modules ------------------------------------------------


def _nilpotent_of_rank(field, c, r, rng):
    """Random conjugate of the standard free nilpotent of type (c^r)."""
    d = c * r
    N = field.zeros(d, d)
    for blk in range(r):
        for k in range(1, c):
            N[blk * c + k - 1, blk * c + k] = field.one
    T = la.rand_invertible(field, d, rng) if d else field.eye(0)
    return la.mul(field, la.mul(field, T, N), la.inverse(field, T)) if d else N


def _arrow_linear_system(reps_known, unknown_names, relations, quiver, dims,
                         field):
    """Linear system on the unknown arrow matrices given all the others.

    Every relation term must contain at most one unknown arrow; terms with
    none contribute a constant block which is asserted to vanish.
    """
    sizes = {}
    offs = {}
    pos = 0
    for name in unknown_names:
        arrow = quiver.arrows[name]
        sizes[name] = dims[arrow.target - 1] * dims[arrow.source - 1]
        offs[name] = pos
        pos += sizes[name]
    total = pos
    rows = []
    for expr in relations:
        t, s = expr.target - 1, expr.source - 1
        nrow = dims[t] * dims[s]
        if nrow == 0:
            continue
        blk = field.zeros(nrow, total)
        const = field.zeros(dims[t], dims[s])
        touched = False
        for coeff, path in expr.terms:
            unknown_pos = [k for k, a in enumerate(path)
                           if a in sizes and sizes[a] > 0]
            fully_known = all(a not in sizes for a in path)
            if fully_known:
                prod = la.eye(field, dims[t])
                for a in path:
                    prod = la.mul(field, prod, reps_known[a])
                const = la.add(field, const, la.scale(field, coeff, prod))
                continue
            if len([k for k, a in enumerate(path) if a in sizes]) != 1:
                raise ValueError("relation term with several unknown arrows")
            k = [k for k, a in enumerate(path) if a in sizes][0]
            name = path[k]
            if sizes[name] == 0:
                continue
            pre = la.eye(field, dims[t])
            for a in path[:k]:
                pre = la.mul(field, pre, reps_known[a])
            suf = la.eye(field, dims[s])
            for a in reversed(path[k + 1:]):
                suf = la.mul(field, reps_known[a], suf)
            term = la.scale(field, coeff, la.kron(field, pre, la.transpose(suf)))
            sl = slice(offs[name], offs[name] + sizes[name])
            blk[:, sl] = la.add(field, blk[:, sl], term)
            touched = True
        if not la.is_zero_matrix(field, const):
            raise RelationFailure(f"constant part of {expr.label} nonzero")
        if touched:
            rows.append(blk)
    if not rows:
        return field.zeros(0, total), offs, sizes
    return la.vstack(field, rows, ncols=total), offs, sizes


def sample_locally_free(datum, rank, field, rng):
    """A random locally free module point with the given rank vector.

    Loops get a random conjugate of the free nilpotent type; the
    Omega-direction arrows are drawn from the solution space of the
    commutativity relations, then the reverse arrows from the remaining
    (linear) constraints.
    """
    quiver = build_quiver(datum)
    relations = preprojective_relations(datum, quiver)
    n = datum.n
    dims = tuple(datum.ci(i + 1) * rank[i] for i in range(n))
    mats = {}
    for i in range(1, n + 1):
        mats[f"eps_{i}"] = _nilpotent_of_rank(field, datum.ci(i),
                                              rank[i - 1], rng)
    omega_names = [quiver.arrow(i, j, g) for (i, j) in sorted(datum.omega)
                   for g in range(1, datum.g(i, j) + 1)]
    star_names = [quiver.arrow(j, i, g) for (i, j) in sorted(datum.omega)
                  for g in range(1, datum.g(i, j) + 1)]
    # phase 1: commutativity constraints on the Omega arrows only
    phase1_rels = [r for r in relations
                   if r.label.startswith("P2") and
                   any(a in omega_names for _, p in r.terms for a in p)]
    for name in star_names:
        arrow = quiver.arrows[name]
        mats[name] = field.zeros(dims[arrow.target - 1],
                                 dims[arrow.source - 1])
    sysm, offs, sizes = _arrow_linear_system(
        mats, omega_names, phase1_rels, quiver, dims, field)
    ker = la.integerize_rows(field, la.nullspace(field, sysm))
    vec = _random_combo(field, ker, rng)
    _install(field, mats, quiver, dims, omega_names, offs, sizes, vec)
    # phase 2: everything else is linear in the reverse arrows
    phase2_rels = [r for r in relations if not r.label.startswith("P1")]
    sysm, offs, sizes = _arrow_linear_system(
        mats, star_names, phase2_rels, quiver, dims, field)
    ker = la.integerize_rows(field, la.nullspace(field, sysm))
    vec = _random_combo(field, ker, rng)
    _install(field, mats, quiver, dims, star_names, offs, sizes, vec)
    return Rep(datum, field, dims, mats, check=True, quiver=quiver,
               relations=relations)


def _random_combo(field, basis_rows, rng):
    k, width = basis_rows.shape
    out = field.zeros(1, width)[0]
    for t in range(k):
        c = field.rand_elem(rng, 9) if field.kind == "Q" else field.rand_elem(rng)
        row = la.scale(field, c, basis_rows[t:t + 1])[0]
        for w in range(width):
            out[w] = out[w] + row[w] if field.kind == "Q" else (int(out[w]) + int(row[w])) % field.p
    return out


def _install(field, mats, quiver, dims, names, offs, sizes, vec):
    import numpy as np
    for name in names:
        arrow = quiver.arrows[name]
        r, c = dims[arrow.target - 1], dims[arrow.source - 1]
        if sizes[name] == 0:
            mats[name] = field.zeros(r, c)
            continue
        block = vec[offs[name]:offs[name] + sizes[name]]
        mats[name] = np.array(block).reshape(r, c)
