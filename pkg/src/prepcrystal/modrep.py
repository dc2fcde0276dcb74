"""Concrete representations of Pi(C,D,Omega) over an exact field, and the
module-theoretic quantities the engine computes on them: relation checking,
Jordan types, local freeness, sub_i/fac_i/K_i/C_i, Hom and Ext dimensions,
E-filtration and crystal tests, the transpose dual, orbit dimensions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .cartan import bil_sym
from .errors import (FieldTooSmall, NotLocallyFree, RelationFailure,
                     ShapeMismatch)
from .presentation import build_quiver, preprojective_relations


class Rep:
    """A module over Pi(C,D,Omega): per-vertex dimensions + arrow matrices.

    Matrices follow the column convention: the matrix of an arrow j -> i
    has shape d_i x d_j and acts on column vectors.
    """

    def __init__(self, datum, field, dims, mats, check=True, quiver=None,
                 relations=None):
        self.datum = datum
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        self.quiver = quiver or build_quiver(datum)
        self._relations = relations
        if len(self.dims) != datum.n:
            raise ShapeMismatch("dimension vector has wrong length")
        self.mats = {}
        for name, arrow in self.quiver.arrows.items():
            want = (self.dims[arrow.target - 1], self.dims[arrow.source - 1])
            m = mats.get(name)
            if m is None:
                m = field.zeros(*want)
            if m.shape != want:
                raise ShapeMismatch(
                    f"arrow {name}: expected shape {want}, got {m.shape}")
            self.mats[name] = m
        if check:
            bad = check_relations(self)
            if bad:
                raise RelationFailure("; ".join(v[0] for v in bad))

    # -- basics ---------------------------------------------------------------

    def dim_total(self):
        return sum(self.dims)

    def is_zero(self):
        return self.dim_total() == 0

    def mat(self, name):
        return self.mats[name]

    def eps(self, i):
        return self.mats[self.quiver.loop(i)]

    def relations(self):
        if self._relations is None:
            self._relations = preprojective_relations(self.datum, self.quiver)
        return self._relations

    def copy_with(self, mats, dims=None, check=True):
        return Rep(self.datum, self.field, dims or self.dims, mats,
                   check=check, quiver=self.quiver, relations=self._relations)

    def content_key(self):
        """Hashable exact content (used for memoisation)."""
        return (self.dims,
                tuple((n, la.mat_bytes(self.field, self.mats[n]))
                      for n in sorted(self.mats)))

    def __repr__(self):
        return f"Rep(dims={self.dims}, field={self.field})"


def zero_rep(datum, field):
    return Rep(datum, field, (0,) * datum.n, {}, check=False)


def make_E(datum, i, field):
    """The generalized simple E_i: one free rank-1 chain at vertex i."""
    c = datum.ci(i)
    dims = [0] * datum.n
    dims[i - 1] = c
    N = field.zeros(c, c)
    for k in range(1, c):
        N[k - 1, k] = field.one
    return Rep(datum, field, dims, {f"eps_{i}": N}, check=False)


def make_S(datum, i, field):
    dims = [0] * datum.n
    dims[i - 1] = 1
    return Rep(datum, field, dims, {}, check=False)


def direct_sum(reps):
    if not reps:
        raise ValueError("empty direct sum")
    datum, fieldk = reps[0].datum, reps[0].field
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(datum.n))
    mats = {}
    for name, arrow in reps[0].quiver.arrows.items():
        blocks = [r.mats[name] for r in reps]
        ti, si = arrow.target - 1, arrow.source - 1
        out = fieldk.zeros(dims[ti], dims[si])
        ro = co = 0
        for b in blocks:
            out[ro:ro + b.shape[0], co:co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        mats[name] = out
    return Rep(datum, fieldk, dims, mats, check=False, quiver=reps[0].quiver)


# -- relations ------------------------------------------------------------------


def eval_path_expr(M, expr):
    f = M.field
    t = M.dims[expr.target - 1]
    s = M.dims[expr.source - 1]
    acc = f.zeros(t, s)
    for coeff, path in expr.terms:
        prod = la.eye(f, t)
        for name in path:
            prod = la.mul(f, prod, M.mats[name])
        acc = la.add(f, acc, la.scale(f, coeff, prod))
    return acc


def check_relations(M):
    """Empty list iff M is a Pi-module point; violations name the relation
    and a nonzero entry witness."""
    out = []
    for expr in M.relations():
        val = eval_path_expr(M, expr)
        if not la.is_zero_matrix(M.field, val):
            where = None
            for r in range(val.shape[0]):
                for c in range(val.shape[1]):
                    if not M.field.is_zero(val[r, c]):
                        where = (r, c, val[r, c])
                        break
                if where:
                    break
            out.append((f"{expr.label}: nonzero entry {where[2]} at "
                        f"({where[0]},{where[1]})", expr.label, where))
    return out


# -- Jordan data ------------------------------------------------------------------


def jordan_type(M, i):
    """Jordan type of the nilpotent loop at vertex i (partition tuple)."""
    return la.jordan_type(M.field, M.eps(i), bound=M.datum.ci(i))


def is_locally_free(M):
    return all(all(part == M.datum.ci(i) for part in jordan_type(M, i))
               for i in range(1, M.datum.n + 1))


def rank_vector(M):
    if not is_locally_free(M):
        raise NotLocallyFree(f"module with dims {M.dims} is not locally free")
    return tuple(M.dims[i - 1] // M.datum.ci(i)
                 for i in range(1, M.datum.n + 1))


# -- sub/quotient machinery -------------------------------------------------------


@dataclass
class SubquotientWitness:
    """Invariant subspace (row bases per vertex) with induced sub and quotient."""

    subspaces: tuple
    complements: tuple
    sub: Rep
    quot: Rep
    partition: tuple = dc_field(default=())


def sub_rep(M, subspaces, check=True):
    """Restrict M to the invariant subspace given by per-vertex row bases."""
    f = M.field
    dims = tuple(S.shape[0] for S in subspaces)
    mats = {}
    for name, arrow in M.quiver.arrows.items():
        Sj = subspaces[arrow.source - 1]
        Si = subspaces[arrow.target - 1]
        img = la.mul(f, Sj, la.transpose(M.mats[name]))
        X = la.express_in_rows(f, img, Si)
        if X is None:
            raise ValueError(f"subspace not invariant under {name}")
        mats[name] = la.transpose(X)
    return Rep(M.datum, f, dims, mats, check=check, quiver=M.quiver,
               relations=M._relations)


def quotient_rep(M, subspaces, check=True):
    """Quotient of M by the invariant subspace; returns (rep, complements)."""
    f = M.field
    comps = []
    for v in range(M.datum.n):
        S = subspaces[v]
        cand = la.eye(f, M.dims[v])
        comps.append(la.complete_basis(f, S, cand))
    dims = tuple(C.shape[0] for C in comps)
    mats = {}
    for name, arrow in M.quiver.arrows.items():
        j, i = arrow.source - 1, arrow.target - 1
        Cj, Ci, Si = comps[j], comps[i], subspaces[i]
        T = la.vstack(f, [Si, Ci], ncols=M.dims[i])
        img = la.mul(f, Cj, la.transpose(M.mats[name]))
        Y = la.express_in_rows(f, img, T)
        if Y is None:
            raise ValueError("complement expression failed")
        mats[name] = la.transpose(Y[:, Si.shape[0]:])
    quot = Rep(M.datum, f, dims, mats, check=check, quiver=M.quiver,
               relations=M._relations)
    return quot, tuple(comps)


def _zero_subspaces(M, except_at=None, full_at=None):
    out = []
    for v in range(M.datum.n):
        if full_at is not None and v != full_at:
            out.append(la.eye(M.field, M.dims[v]))
        else:
            out.append(M.field.zeros(0, M.dims[v]))
    return out


def incoming_image_closure(M, i):
    """Row basis of sum over f, (j,g) of eps_i^f Im(alpha_ij^(g)) at vertex i."""
    f = M.field
    d = M.dims[i - 1]
    rows = [f.zeros(0, d)]
    for name in M.quiver.incoming(i):
        rows.append(la.row_space(f, la.transpose(M.mats[name])))
    S = la.row_space(f, la.vstack(f, rows, ncols=d))
    epsT = la.transpose(M.eps(i))
    while True:
        bigger = la.row_space(
            f, la.vstack(f, [S, la.mul(f, S, epsT)], ncols=d))
        if bigger.shape[0] == S.shape[0]:
            return S
        S = bigger


def twisted_outgoing_kernel(M, i):
    """Row basis of the joint kernel of all alpha_ji^(g) eps_i^f at vertex i."""
    f = M.field
    d = M.dims[i - 1]
    blocks = []
    epspow = la.eye(f, d)
    powers = [epspow]
    for _ in range(M.datum.ci(i) - 1):
        powers.append(la.mul(f, powers[-1], M.eps(i)))
    for name in M.quiver.outgoing(i):
        for P in powers:
            blocks.append(la.mul(f, M.mats[name], P))
    if not blocks:
        return la.eye(f, d)
    return la.nullspace(f, la.vstack(f, blocks, ncols=d))


def sub_witness(M, i):
    """sub_i(M) (largest submodule supported at i) with C_i(M) as quotient."""
    S = twisted_outgoing_kernel(M, i)
    subspaces = _zero_subspaces(M)
    subspaces[i - 1] = S
    sub = sub_rep(M, subspaces, check=False)
    quot, comps = quotient_rep(M, subspaces, check=False)
    w = SubquotientWitness(tuple(subspaces), comps, sub, quot)
    w.partition = jordan_type(sub, i)
    return w


def fac_witness(M, i):
    """fac_i(M) (largest quotient supported at i) with K_i(M) as submodule."""
    S = incoming_image_closure(M, i)
    subspaces = _zero_subspaces(M, full_at=i - 1)
    subspaces[i - 1] = S
    sub = sub_rep(M, subspaces, check=False)
    quot, comps = quotient_rep(M, subspaces, check=False)
    w = SubquotientWitness(tuple(subspaces), comps, sub, quot)
    w.partition = jordan_type(quot, i)
    return w


def sub_i(M, i):
    return sub_witness(M, i)


def fac_i(M, i):
    return fac_witness(M, i)


def K_i(M, i):
    """Unique submodule with M/K_i(M) ~ fac_i(M)."""
    return fac_witness(M, i).sub


def C_i(M, i):
    """Unique quotient M/sub_i(M)."""
    return sub_witness(M, i).quot


def phi(M, i):
    """Multiplicity of the full part c_i in the Jordan type of sub_i(M)."""
    return sum(1 for part in sub_witness(M, i).partition
               if part == M.datum.ci(i))


def phi_star(M, i):
    return sum(1 for part in fac_witness(M, i).partition
               if part == M.datum.ci(i))


def phi_vectors(M):
    n = M.datum.n
    return (tuple(phi(M, i) for i in range(1, n + 1)),
            tuple(phi_star(M, i) for i in range(1, n + 1)))


# -- Hom and Ext ------------------------------------------------------------------


def hom_system(M, N):
    """Constraint matrix for graded maps f: M -> N intertwining all arrows."""
    f = M.field
    n = M.datum.n
    sizes = [N.dims[v] * M.dims[v] for v in range(n)]
    offs = np.cumsum([0] + sizes)
    total = int(offs[-1])
    rows = []
    for name, arrow in M.quiver.arrows.items():
        j, i = arrow.source - 1, arrow.target - 1
        nrow = N.dims[i] * M.dims[j]
        if nrow == 0:
            continue
        blk = f.zeros(nrow, total)
        # f_i M(a): kron(I_{N_i}, M(a)^T) acting on vec(f_i)
        if sizes[i]:
            blk[:, offs[i]:offs[i + 1]] = la.kron(
                f, la.eye(f, N.dims[i]), la.transpose(M.mats[name]))
        # - N(a) f_j: kron(N(a), I_{M_j}) acting on vec(f_j)
        if sizes[j]:
            term = la.kron(f, N.mats[name], la.eye(f, M.dims[j]))
            blk[:, offs[j]:offs[j + 1]] = la.sub(
                f, blk[:, offs[j]:offs[j + 1]], term)
        rows.append(blk)
    if not rows:
        return f.zeros(0, total), offs
    return la.vstack(f, rows, ncols=total), offs


def hom_basis(M, N):
    """Basis of Hom_Pi(M, N), each element a tuple of per-vertex matrices."""
    f = M.field
    system, offs = hom_system(M, N)
    ker = la.nullspace(f, system)
    out = []
    for k in range(ker.shape[0]):
        vec = ker[k]
        mats = []
        for v in range(M.datum.n):
            block = vec[offs[v]:offs[v + 1]]
            mats.append(np.array(block).reshape(N.dims[v], M.dims[v]))
        out.append(tuple(mats))
    return out


def hom_dim(M, N):
    f = M.field
    system, offs = hom_system(M, N)
    total = system.shape[1]
    return total - la.rank(f, system)


def orbit_dim(M):
    return sum(d * d for d in M.dims) - hom_dim(M, M)


def ext1_dim_lf(M, N):
    """Hom-difference formula; requires both modules locally free."""
    rm, rn = rank_vector(M), rank_vector(N)
    return hom_dim(M, N) + hom_dim(N, M) - bil_sym(M.datum, rm, rn)


def extension_cocycle_system(sub, quot):
    """Linear system on off-diagonal blocks Z_a of extensions 0->sub->X->quot->0.

    X(a) = [[sub(a), Z_a], [0, quot(a)]], Z_a of shape
    d_sub(t(a)) x d_quot(s(a)).  Returns (system matrix, block offsets),
    where the unknown vector concatenates vec(Z_a) over sorted arrow names.
    """
    f = sub.field
    names = sorted(sub.quiver.arrows)
    sizes = {}
    for name in names:
        arrow = sub.quiver.arrows[name]
        sizes[name] = sub.dims[arrow.target - 1] * quot.dims[arrow.source - 1]
    offs = {}
    pos = 0
    for name in names:
        offs[name] = pos
        pos += sizes[name]
    total = pos
    rows = []
    for expr in sub.relations():
        t, s = expr.target - 1, expr.source - 1
        nrow = sub.dims[t] * quot.dims[s]
        if nrow == 0:
            continue
        blk = f.zeros(nrow, total)
        touched = False
        for coeff, path in expr.terms:
            k = len(path)
            for tpos in range(k):
                name = path[tpos]
                if sizes[name] == 0:
                    continue
                pre = la.eye(f, sub.dims[t])
                for a in path[:tpos]:
                    pre = la.mul(f, pre, sub.mats[a])
                suf_dim = quot.dims[quot.quiver.arrows[path[k - 1]].source - 1]
                suf = la.eye(f, suf_dim)
                for a in reversed(path[tpos + 1:]):
                    suf = la.mul(f, quot.mats[a], suf)
                term = la.scale(f, coeff, la.kron(f, pre, la.transpose(suf)))
                sl = slice(offs[name], offs[name] + sizes[name])
                blk[:, sl] = la.add(f, blk[:, sl], term)
                touched = True
        if touched:
            rows.append(blk)
    if not rows:
        return f.zeros(0, total), offs, sizes
    return la.vstack(f, rows, ncols=total), offs, sizes


def assemble_extension(sub, quot, zvec, offs, sizes, check=True):
    """Build the extension rep from a solution vector of the cocycle system."""
    f = sub.field
    dims = tuple(sub.dims[v] + quot.dims[v] for v in range(sub.datum.n))
    mats = {}
    for name, arrow in sub.quiver.arrows.items():
        j, i = arrow.source - 1, arrow.target - 1
        out = f.zeros(dims[i], dims[j])
        ds_i, dq_j = sub.dims[i], quot.dims[j]
        out[:ds_i, :sub.dims[j]] = sub.mats[name]
        out[ds_i:, sub.dims[j]:] = quot.mats[name]
        if sizes[name]:
            Z = np.array(zvec[offs[name]:offs[name] + sizes[name]]).reshape(
                ds_i, dq_j)
            out[:ds_i, sub.dims[j]:] = Z
        mats[name] = out
    return Rep(sub.datum, f, dims, mats, check=check, quiver=sub.quiver,
               relations=sub._relations)


def ext1_dim_direct(M, N):
    """dim Ext^1(M, N) from the cocycle space mod coboundaries.

    Extensions 0 -> N -> X -> M -> 0; the coboundary space has dimension
    sum_i d_i(M) d_i(N) - dim Hom(M, N).
    """
    f = M.field
    system, offs, sizes = extension_cocycle_system(N, M)
    total = sum(sizes.values())
    cocycles = total - la.rank(f, system)
    cobound = sum(M.dims[v] * N.dims[v] for v in range(M.datum.n)) - hom_dim(M, N)
    return cocycles - cobound


def mtilde_dim(M, i):
    """dim of the i-th neighbour sum for locally free M."""
    r = rank_vector(M)
    d = M.datum
    return sum(d.ci(j) * abs(d.c(j, i)) * r[j - 1] for j in d.neighbours(i))


def ext1_to_E(M, i):
    """dim Ext^1(M, E_i) = dim Ker(M_in)/Im(M_out) at vertex i (M loc. free)."""
    if not is_locally_free(M):
        raise NotLocallyFree("ext1_to_E requires a locally free module")
    sw = sub_witness(M, i)
    fw = fac_witness(M, i)
    dim_sub = sw.sub.dims[i - 1]
    dim_fac = fw.quot.dims[i - 1]
    return mtilde_dim(M, i) - 2 * M.dims[i - 1] + dim_sub + dim_fac


# -- transpose dual ----------------------------------------------------------------


def transpose_dual(M):
    """S(M): transpose loops, transpose-and-swap the arrow pairs."""
    mats = {}
    for name, arrow in M.quiver.arrows.items():
        if arrow.source == arrow.target:
            mats[name] = la.transpose(M.mats[name])
        else:
            i, j = arrow.target, arrow.source
            g = name.rsplit("_", 1)[1]
            mats[name] = la.transpose(M.mats[f"a_{j}_{i}_{g}"])
    return Rep(M.datum, M.field, M.dims, mats, check=True, quiver=M.quiver,
               relations=M._relations)


# -- isomorphism testing ------------------------------------------------------------


def is_iso_to_E_power(M, i, p):
    """E_i^p test: support at i only, Jordan type (c_i^p)."""
    d = M.datum
    if M.dims != tuple(p * d.ci(i) if v == i - 1 else 0 for v in range(d.n)):
        return False
    return jordan_type(M, i) == (d.ci(i),) * p


def find_iso(M, N, rng=None, tries=48, exhaustive=False):
    """An explicit isomorphism M -> N, or None.

    Sound positively (any returned map is verified invertible).  Without
    ``exhaustive`` a None for actually-isomorphic modules is possible over
    tiny fields; callers that need a reliable negative (and can afford it)
    pass exhaustive=True to sweep the whole Hom space when it is small.
    """
    if M.dims != N.dims:
        return None
    f = M.field
    if M.dim_total() == 0:
        return tuple(f.zeros(0, 0) for _ in range(M.datum.n))
    basis = hom_basis(M, N)
    if not basis:
        return None
    rng = rng or random.Random(7)

    def invertible(mats):
        return all(la.rank(f, mats[v]) == M.dims[v]
                   for v in range(M.datum.n) if M.dims[v])

    for b in basis:
        if invertible(b):
            return b
    if exhaustive and f.kind == "Fp" and f.p ** len(basis) <= 300000:
        import itertools
        for coeffs in itertools.product(range(f.p), repeat=len(basis)):
            if not any(coeffs):
                continue
            cand = _combine(f, basis, coeffs, M, N)
            if invertible(cand):
                return cand
        return None
    for _ in range(tries):
        coeffs = [f.rand_elem(rng) for _ in basis]
        cand = _combine(f, basis, coeffs, M, N)
        if invertible(cand):
            return cand
    return None


def _combine(f, basis, coeffs, M, N):
    out = []
    for v in range(M.datum.n):
        acc = f.zeros(N.dims[v], M.dims[v])
        for c, b in zip(coeffs, basis):
            acc = la.add(f, acc, la.scale(f, c, b[v]))
        out.append(acc)
    return tuple(out)


def base_change(M, transforms):
    """Conjugate by per-vertex invertible matrices (same module up to iso)."""
    f = M.field
    invs = [la.inverse(f, T) for T in transforms]
    mats = {}
    for name, arrow in M.quiver.arrows.items():
        j, i = arrow.source - 1, arrow.target - 1
        mats[name] = la.mul(f, la.mul(f, transforms[i], M.mats[name]), invs[j])
    return Rep(M.datum, f, M.dims, mats, check=False, quiver=M.quiver,
               relations=M._relations)


# -- E-filtration and crystal property ----------------------------------------------


def surjections_to_E(M, i, rng, tries=24):
    """Yield random surjective homs M -> E_i (as per-vertex matrix tuples)."""
    E = make_E(M.datum, i, M.field)
    basis = hom_basis(M, E)
    if not basis:
        return
    f = M.field
    c = M.datum.ci(i)
    seen = attempts = 0
    while seen < tries and attempts < 20 * tries + 20:
        attempts += 1
        coeffs = [f.rand_elem(rng) for _ in basis]
        cand = _combine(f, basis, coeffs, M, E)
        if la.rank(f, cand[i - 1]) == c:
            seen += 1
            yield cand


def kernel_subrep(M, phi_mats, codomain_dims):
    """Kernel of a surjection given by per-vertex matrices."""
    f = M.field
    subspaces = []
    for v in range(M.datum.n):
        if codomain_dims[v] == 0:
            subspaces.append(la.eye(f, M.dims[v]))
        else:
            subspaces.append(la.nullspace(f, phi_mats[v]))
    return sub_rep(M, subspaces, check=False), tuple(subspaces)


def is_e_filtered(M, rng=None, retries=64, _depth=0):
    """Randomized certificate search for an E-filtration.

    Returns the list of vertex indices (i_1, ..., i_t) read bottom-up
    (so the last entry is the top quotient), or None after exhaustion.
    A certificate is sound; None is a one-sided answer.
    """
    rng = rng or random.Random(11)
    if M.is_zero():
        return []
    for k in range(1, M.datum.n + 1):
        if phi_star(M, k) < 1:
            continue
        for phi_map in surjections_to_E(M, k, rng, tries=max(1, retries // 8)):
            E = make_E(M.datum, k, M.field)
            U, _ = kernel_subrep(M, phi_map, E.dims)
            rest = is_e_filtered(U, rng, retries=retries, _depth=_depth + 1)
            if rest is not None:
                return rest + [k]
    return None


def verify_e_filtration(M, chain, rng=None):
    """Re-run a certificate: strip quotients top-down, checking each is E_{i}."""
    rng = rng or random.Random(13)
    cur = M
    for k in reversed(chain):
        if phi_star(cur, k) < 1:
            return False
        done = False
        for phi_map in surjections_to_E(cur, k, rng, tries=8):
            E = make_E(cur.datum, k, cur.field)
            U, subspaces = kernel_subrep(cur, phi_map, E.dims)
            if any(cur.dims[v] - U.dims[v] != E.dims[v]
                   for v in range(cur.datum.n)):
                continue
            quot, _ = quotient_rep(cur, list(subspaces), check=False)
            if is_iso_to_E_power(quot, k, 1):
                cur = U
                done = True
                break
        if not done:
            return False
    return cur.is_zero()


def is_crystal(M, rng=None, assume_e_filtered=False, trace=None, _memo=None):
    """Recursive crystal-module test.

    trace, if supplied as a list, receives strings describing the first
    failure.  The zero module is a crystal module by definition.
    """
    if _memo is None:
        _memo = {}
    key = M.content_key()
    if key in _memo:
        return _memo[key]
    rng = rng or random.Random(17)
    if M.is_zero():
        _memo[key] = True
        return True
    if not assume_e_filtered:
        if is_e_filtered(M, rng) is None:
            if trace is not None:
                trace.append(f"dims {M.dims}: no E-filtration found")
            _memo[key] = False
            return False
    result = True
    d = M.datum
    for i in range(1, d.n + 1):
        fw = fac_witness(M, i)
        sw = sub_witness(M, i)
        if any(part != d.ci(i) for part in fw.partition):
            if trace is not None:
                trace.append(f"dims {M.dims}: fac_{i} has type "
                             f"{fw.partition}, not free")
            result = False
            break
        if any(part != d.ci(i) for part in sw.partition):
            if trace is not None:
                trace.append(f"dims {M.dims}: sub_{i} has type "
                             f"{sw.partition}, not free")
            result = False
            break
    if result:
        for i in range(1, d.n + 1):
            fw = fac_witness(M, i)
            if fw.quot.dim_total() > 0:  # K_i proper
                if not is_crystal(fw.sub, rng, trace=trace, _memo=_memo):
                    if trace is not None:
                        trace.append(f"dims {M.dims}: K_{i} not crystal")
                    result = False
                    break
            sw = sub_witness(M, i)
            if sw.sub.dim_total() > 0:  # C_i proper
                if not is_crystal(sw.quot, rng, trace=trace, _memo=_memo):
                    if trace is not None:
                        trace.append(f"dims {M.dims}: C_{i} not crystal")
                    result = False
                    break
    _memo[key] = result
    return result


def aut_generators(M, rng, want=10):
    """Some automorphisms of M (with inverses), for orbit computations.

    The returned set need not generate all of Aut(M); orbit partitions
    computed from it are possibly finer than the true iso classes, which
    is harmless for counting (classes are never merged wrongly).
    """
    f = M.field
    basis = hom_basis(M, M)
    gens = []
    seen = set()

    def push(u):
        key = tuple(la.mat_bytes(f, m) for m in u)
        if key not in seen:
            seen.add(key)
            gens.append(u)

    tries = 0
    while len(gens) < want and tries < 8 * want:
        tries += 1
        coeffs = [f.rand_elem(rng) for _ in basis]
        cand = _combine(f, basis, coeffs, M, M)
        if all(la.rank(f, cand[v]) == M.dims[v]
               for v in range(M.datum.n) if M.dims[v]):
            push(cand)
            push(tuple(la.inverse(f, cand[v]) if M.dims[v] else cand[v]
                       for v in range(M.datum.n)))
    return gens


# -- indecomposability ----------------------------------------------------------


def is_indecomposable(M):
    """End_Pi(M) local <=> End/rad is 1-dimensional (trace-form radical)."""
    f = M.field
    D = M.dim_total()
    if D == 0:
        return False
    if f.kind == "Fp" and f.p <= D:
        raise FieldTooSmall(
            f"characteristic {f.p} too small for a {D}-dimensional module")
    basis = hom_basis(M, M)
    m = len(basis)
    gram = f.zeros(m, m)
    for a in range(m):
        for b in range(m):
            tr = f.zero
            for v in range(M.datum.n):
                if M.dims[v]:
                    prod = la.mul(f, basis[a][v], basis[b][v])
                    for t in range(prod.shape[0]):
                        tr = tr + prod[t, t] if f.kind == "Q" else (tr + int(prod[t, t])) % f.p
            gram[a, b] = tr
    return la.rank(f, gram) == 1


# -- misc -------------------------------------------------------------------------


def profile(M, with_end=True):
    """Isomorphism-invariant summary used for verification and node identity."""
    n = M.datum.n
    jts = tuple(jordan_type(M, i) for i in range(1, n + 1))
    ph, ps = phi_vectors(M)
    prof = {
        "dims": M.dims,
        "jordan": jts,
        "phi": ph,
        "phi_star": ps,
    }
    if is_locally_free(M):
        prof["rank"] = rank_vector(M)
    if with_end:
        prof["end_dim"] = hom_dim(M, M)
    return tuple(sorted(prof.items()))


def reduce_mod_p(M, p):
    """Reduce an integer QQ-representation mod p; relations re-checked."""
    from .fields import GFp
    gf = GFp(p)
    mats = {}
    for name, A in M.mats.items():
        out = gf.zeros(*A.shape)
        for r in range(A.shape[0]):
            for c in range(A.shape[1]):
                x = A[r, c]
                if x.denominator != 1:
                    from .errors import BadReduction
                    raise BadReduction(f"entry {x} is not an integer")
                out[r, c] = x.numerator % p
        mats[name] = out
    return Rep(M.datum, gf, M.dims, mats, check=True, quiver=M.quiver)
