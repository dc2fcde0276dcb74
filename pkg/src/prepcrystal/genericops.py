"""Geometric crystal operators on generic module representatives.

The operators act on irreducible components; here they act on random
representatives, with post-hoc verification of the invariants the theory
prescribes.  Randomness is funneled through a GenericityPolicy and a
documented seed-splitting rule, so every run is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from . import linalg as la
from .cartan import alpha, bil_euler
from .errors import GenericityExhausted
from .fields import DEFAULT_PRIME, GFp
from .modrep import (assemble_extension, extension_cocycle_system,
                     ext1_to_E, hom_basis, hom_dim, is_locally_free,
                     kernel_subrep, make_E, phi, phi_star, phi_vectors,
                     rank_vector, surjections_to_E, transpose_dual,
                     quotient_rep, _combine)


@dataclass
class GenericityPolicy:
    """Sampling policy: seed, independent samples, retries, sampling field."""

    seed: int = 0
    samples: int = 2
    retries: int = 8
    prime: int = DEFAULT_PRIME
    _counter: int = dc_field(default=0, repr=False)

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("re-verification requires at least 2 samples")

    def field(self):
        return GFp(self.prime)

    def rng(self, *context):
        """Deterministic child RNG for (seed, call-counter, context)."""
        self._counter += 1
        tag = ":".join(str(c) for c in (self.seed, self._counter) + context)
        return random.Random(tag)

    def fixed_rng(self, *context):
        """Context-only child RNG (no call counter); replayable."""
        tag = ":".join(str(c) for c in (self.seed,) + context)
        return random.Random(tag)


def op_profile(M):
    """Invariant profile used to compare independent draws of an operator."""
    ph, ps = phi_vectors(M)
    return {"dims": M.dims, "rank": rank_vector(M), "phi": ph,
            "phi_star": ps, "end_dim": hom_dim(M, M)}


def eps_val(M, i):
    """epsilon_i = phi_i - <wt, alpha_i> on a locally free module."""
    r = rank_vector(M)
    return phi(M, i) - bil_euler(M.datum, r, alpha(M.datum, i))


def eps_star_val(M, i):
    r = rank_vector(M)
    return phi_star(M, i) - bil_euler(M.datum, r, alpha(M.datum, i))


def ext_formula_check(M):
    """Compare dim Ext^1(M, E_i) with c_i(phi_i + phi*_i - <wt, alpha_i>).

    A mismatch signals a non-generic representative; the report lists the
    offending vertices.
    """
    d = M.datum
    r = rank_vector(M)
    mismatches = []
    for i in range(1, d.n + 1):
        lhs = ext1_to_E(M, i)
        rhs = d.ci(i) * (phi(M, i) + phi_star(M, i)
                         - bil_euler(d, r, alpha(d, i)))
        if lhs != rhs:
            mismatches.append((i, lhs, rhs))
    return mismatches


def _vec_add(datum, r, i, sign=1):
    return tuple(r[k] + sign * (1 if k == i - 1 else 0)
                 for k in range(datum.n))


def _random_cocycle(field, system, total, rng):
    ker = la.integerize_rows(field, la.nullspace(field, system))
    vec = field.zeros(1, total)[0]
    for t in range(ker.shape[0]):
        c = field.rand_elem(rng)
        row = la.scale(field, c, ker[t:t + 1])[0]
        vec = la.add(field, vec.reshape(1, -1), row.reshape(1, -1))[0]
    return vec


def e_star(M, i, policy, rng=None):
    """Generic extension 0 -> M -> M' -> E_i -> 0 with verified invariants."""
    rng = rng or policy.rng("e_star", i)
    E = make_E(M.datum, i, M.field)
    system, offs, sizes = extension_cocycle_system(M, E)
    total = sum(sizes.values())
    want_rank = _vec_add(M.datum, rank_vector(M), i)
    want_phis = phi_star(M, i) + 1
    draws = []
    for attempt in range(policy.retries * policy.samples):
        vec = _random_cocycle(M.field, system, total, rng)
        cand = assemble_extension(M, E, vec, offs, sizes, check=True)
        if rank_vector(cand) != want_rank:
            continue
        if phi_star(cand, i) != want_phis:
            continue
        if ext_formula_check(cand):
            continue
        draws.append(cand)
        if len(draws) >= policy.samples:
            break
    if len(draws) < policy.samples:
        raise GenericityExhausted(
            f"e_star at vertex {i}: no generic extension within retries")
    p0 = op_profile(draws[0])
    for other in draws[1:]:
        if op_profile(other) != p0:
            raise GenericityExhausted(
                f"e_star at vertex {i}: independent draws disagree")
    return draws[0]


def f_star(M, i, policy, rng=None):
    """Kernel of a generic surjection M -> E_i; None when phi*_i = 0."""
    if phi_star(M, i) == 0:
        return None
    rng = rng or policy.rng("f_star", i)
    E = make_E(M.datum, i, M.field)
    want_rank = _vec_add(M.datum, rank_vector(M), i, sign=-1)
    want_phis = phi_star(M, i) - 1
    draws = []
    for phi_map in surjections_to_E(M, i, rng,
                                    tries=policy.retries * policy.samples):
        U, _ = kernel_subrep(M, phi_map, E.dims)
        if not is_locally_free(U):
            continue
        if rank_vector(U) != want_rank:
            continue
        if phi_star(U, i) != want_phis:
            continue
        draws.append(U)
        if len(draws) >= policy.samples:
            break
    if len(draws) < policy.samples:
        raise GenericityExhausted(
            f"f_star at vertex {i}: no generic kernel within retries")
    p0 = op_profile(draws[0])
    for other in draws[1:]:
        if op_profile(other) != p0:
            raise GenericityExhausted(
                f"f_star at vertex {i}: independent draws disagree")
    return draws[0]


def e_plain(M, i, policy, rng=None):
    """Conjugate of e_star by the transpose dual."""
    S = transpose_dual(M)
    out = e_star(S, i, policy, rng=rng or policy.rng("e_plain", i))
    return transpose_dual(out)


def f_plain(M, i, policy, rng=None):
    if phi(M, i) == 0:
        return None
    S = transpose_dual(M)
    out = f_star(S, i, policy, rng=rng or policy.rng("f_plain", i))
    return transpose_dual(out) if out is not None else None


def e_plain_direct(M, i, policy, rng=None):
    """Direct construction 0 -> E_i -> M' -> M -> 0 (dual-path check)."""
    rng = rng or policy.rng("e_plain_direct", i)
    E = make_E(M.datum, i, M.field)
    system, offs, sizes = extension_cocycle_system(E, M)
    total = sum(sizes.values())
    want_rank = _vec_add(M.datum, rank_vector(M), i)
    want_phi = phi(M, i) + 1
    for attempt in range(policy.retries * policy.samples):
        vec = _random_cocycle(M.field, system, total, rng)
        cand = assemble_extension(E, M, vec, offs, sizes, check=True)
        if rank_vector(cand) != want_rank:
            continue
        if phi(cand, i) != want_phi:
            continue
        if ext_formula_check(cand):
            continue
        return cand
    raise GenericityExhausted(f"e_plain_direct at vertex {i}")


def f_plain_direct(M, i, policy, rng=None):
    """Quotient by the image of a generic embedding E_i -> M."""
    if phi(M, i) == 0:
        return None
    rng = rng or policy.rng("f_plain_direct", i)
    E = make_E(M.datum, i, M.field)
    basis = hom_basis(E, M)
    f = M.field
    c = M.datum.ci(i)
    want_rank = _vec_add(M.datum, rank_vector(M), i, sign=-1)
    for attempt in range(policy.retries * policy.samples):
        coeffs = [f.rand_elem(rng) for _ in basis]
        emb = _combine(f, basis, coeffs, E, M)
        if la.rank(f, emb[i - 1]) != c:
            continue
        subspaces = []
        for v in range(M.datum.n):
            if E.dims[v] == 0:
                subspaces.append(f.zeros(0, M.dims[v]))
            else:
                subspaces.append(la.row_space(f, la.transpose(emb[v])))
        quot, _ = quotient_rep(M, subspaces, check=True)
        if not is_locally_free(quot):
            continue
        if rank_vector(quot) != want_rank:
            continue
        if phi(quot, i) != phi(M, i) - 1:
            continue
        return quot
    raise GenericityExhausted(f"f_plain_direct at vertex {i}")
