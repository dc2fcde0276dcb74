"""Exact linear algebra over QQ and GFp.

All matrices are 2-D numpy arrays: ``int64`` for GFp (entries reduced into
[0, p)) and ``object`` holding ``Fraction`` for QQ.  Vectors are treated as
rows; the kernel of ``A`` is returned as a matrix whose rows ``v`` satisfy
``A @ v == 0``.  No tolerances anywhere: a pivot is a pivot iff it is
exactly nonzero.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_MAX_INNER = 30000  # keeps the split-16 modular matmul inside int64


def wrap(field, rows):
    return field.wrap(rows)


def zeros(field, r, c):
    return field.zeros(r, c)


def eye(field, n):
    return field.eye(n)


def mul(field, A, B):
    """Exact matrix product A @ B."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if field.kind == "Fp":
        p = field.p
        if A.shape[0] == 0 or A.shape[1] == 0 or B.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        assert A.shape[1] <= _MAX_INNER
        A = A % p
        B = B % p
        b_lo = B & 0xFFFF
        b_hi = B >> 16
        return ((((A @ b_hi) % p) << 16) + (A @ b_lo)) % p
    out = np.dot(A, B)
    if out.dtype != object:
        out = out.astype(object)
    return out


def mat_pow(field, A, k):
    n = A.shape[0]
    out = eye(field, n)
    for _ in range(k):
        out = mul(field, out, A)
    return out


def add(field, A, B):
    if field.kind == "Fp":
        return (A + B) % field.p
    return A + B


def sub(field, A, B):
    if field.kind == "Fp":
        return (A - B) % field.p
    return A - B


def scale(field, c, A):
    if field.kind == "Fp":
        return (A * (int(c) % field.p)) % field.p
    out = A * c
    if out.dtype != object:
        out = out.astype(object)
    return out


def kron(field, A, B):
    out = np.kron(A, B)
    if field.kind == "Fp":
        out = out % field.p
    return out


def transpose(A):
    return A.T.copy()


def is_zero_matrix(field, A):
    if field.kind == "Fp":
        return not np.any(A % field.p)
    return all(x == 0 for x in A.flat)


def mat_equal(field, A, B):
    if A.shape != B.shape:
        return False
    return is_zero_matrix(field, sub(field, A, B))


def rref(field, A):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    R = A.copy()
    nrows, ncols = R.shape
    pivots = []
    row = 0
    if field.kind == "Fp":
        p = field.p
        R = R % p
        for col in range(ncols):
            if row >= nrows:
                break
            nz = np.nonzero(R[row:, col])[0]
            if nz.size == 0:
                continue
            k = row + int(nz[0])
            if k != row:
                R[[row, k]] = R[[k, row]]
            inv = pow(int(R[row, col]), p - 2, p)
            R[row] = (R[row] * inv) % p
            colv = R[:, col].copy()
            colv[row] = 0
            R = (R - np.outer(colv, R[row])) % p
            pivots.append(col)
            row += 1
        return R, pivots
    for col in range(ncols):
        if row >= nrows:
            break
        k = None
        for i in range(row, nrows):
            if R[i, col] != 0:
                k = i
                break
        if k is None:
            continue
        if k != row:
            R[[row, k]] = R[[k, row]]
        inv = Fraction(1) / R[row, col]
        R[row] = R[row] * inv
        for i in range(nrows):
            if i != row and R[i, col] != 0:
                R[i] = R[i] - R[i, col] * R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(field, A):
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(rref(field, A)[1])


def nullspace(field, A):
    """Rows form an echelonized basis of {v : A @ v = 0}."""
    nrows, ncols = A.shape
    if ncols == 0:
        return zeros(field, 0, 0)
    if nrows == 0:
        return eye(field, ncols)
    R, pivots = rref(field, A)
    free = [c for c in range(ncols) if c not in pivots]
    out = zeros(field, len(free), ncols)
    for k, fc in enumerate(free):
        out[k, fc] = field.one
        for i, pc in enumerate(pivots):
            val = R[i, fc]
            if field.kind == "Fp":
                out[k, pc] = (-int(val)) % field.p
            else:
                out[k, pc] = -val
    return out


def row_space(field, A):
    """Echelonized basis (rows) of the row space of A."""
    if A.shape[0] == 0:
        return A.copy()
    R, pivots = rref(field, A)
    return R[: len(pivots)].copy()


def vstack(field, mats, ncols=None):
    mats = [m for m in mats if m.shape[0] > 0]
    if not mats:
        if ncols is None:
            raise ValueError("cannot stack zero matrices without ncols")
        return zeros(field, 0, ncols)
    return np.vstack(mats)


def solve(field, A, b):
    """One exact solution x of A @ x = b (b a row vector), or None."""
    ncols = A.shape[1]
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = zeros(field, 1, ncols)[0]
    for i, pc in enumerate(pivots):
        x[pc] = R[i, ncols]
    return x


def express_in_rows(field, B, S):
    """Solve X @ S = B; rows of B written in the row basis S, or None."""
    if B.shape[0] == 0:
        return zeros(field, 0, S.shape[0])
    rows = []
    St = S.T.copy()
    for i in range(B.shape[0]):
        x = solve(field, St, B[i])
        if x is None:
            return None
        rows.append(x)
    return np.array(rows, dtype=S.dtype) if S.dtype != object else _obj_rows(rows, S.shape[0])


def _obj_rows(rows, ncols):
    out = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        for j in range(ncols):
            out[i, j] = r[j]
    return out


def in_row_space(field, v, S):
    return solve(field, S.T.copy(), v) is not None


def intersect_row_spaces(field, A, B):
    """Basis of rowspace(A) ∩ rowspace(B)."""
    if A.shape[0] == 0 or B.shape[0] == 0:
        return zeros(field, 0, A.shape[1])
    # x@A = y@B  <=>  (x, y) in kernel of [A; -B]^T
    stacked = np.concatenate([A.T, -B.T if field.kind == "Q" else (-B.T) % field.p], axis=1)
    ker = nullspace(field, stacked)
    xs = ker[:, : A.shape[0]]
    return row_space(field, mul(field, xs, A))


def complete_basis(field, existing, candidates):
    """Greedily pick candidate rows extending rowspace(existing); returns them."""
    picked = []
    cur = row_space(field, existing) if existing.shape[0] else existing
    r = cur.shape[0]
    for i in range(candidates.shape[0]):
        trial = vstack(field, [cur, candidates[i : i + 1]], ncols=candidates.shape[1])
        rs = row_space(field, trial)
        if rs.shape[0] > r:
            picked.append(candidates[i])
            cur = rs
            r += 1
    if not picked:
        return zeros(field, 0, candidates.shape[1])
    return np.array(picked) if field.kind == "Fp" else _obj_rows(picked, candidates.shape[1])


def rand_matrix(field, r, c, rng, spread=99):
    out = zeros(field, r, c)
    for i in range(r):
        for j in range(c):
            out[i, j] = field.rand_elem(rng, spread) if field.kind == "Q" else field.rand_elem(rng)
    return out


def rand_invertible(field, n, rng):
    while True:
        A = rand_matrix(field, n, n, rng, spread=9)
        if rank(field, A) == n:
            return A


def inverse(field, A):
    n = A.shape[0]
    aug = np.concatenate([A, eye(field, n)], axis=1)
    R, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return R[:, n:].copy()


def jordan_type(field, N, bound=None):
    """Partition of the nilpotent map N (weakly decreasing block sizes)."""
    n = N.shape[0]
    if n == 0:
        return ()
    ranks = [n]
    P = eye(field, n)
    k = 0
    while ranks[-1] > 0:
        k += 1
        P = mul(field, P, N)
        ranks.append(rank(field, P))
        if bound is not None and k > bound:
            raise ValueError("map is not nilpotent within the expected bound")
        if k > n:
            raise ValueError("map is not nilpotent")
    # blocks of size >= s: ranks[s-1] - ranks[s]
    parts = []
    for s in range(1, len(ranks)):
        ge_s = ranks[s - 1] - ranks[s]
        parts.append(ge_s)
    partition = []
    for s in range(len(parts), 0, -1):
        exact = parts[s - 1] - (parts[s] if s < len(parts) else 0)
        partition.extend([s] * exact)
    return tuple(sorted(partition, reverse=True))


def nilpotent_chains(field, N, max_len):
    """Jordan chain basis of the nilpotent N.

    Returns a list of chains, each a list [v, Nv, ..., N^(l-1)v] with
    N^l v = 0, longest chains first.  The union of all chain vectors is a
    basis (asserted).
    """
    n = N.shape[0]
    if n == 0:
        return []
    powers = [eye(field, n)]
    for _ in range(max_len):
        powers.append(mul(field, powers[-1], N))
    kernels = [nullspace(field, powers[s]) for s in range(max_len + 1)]
    if kernels[max_len].shape[0] != n:
        raise ValueError("matrix not nilpotent of the stated degree")
    chains = []
    for s in range(max_len, 0, -1):
        # tops of longer chains pushed down to level s
        carried = [mul(field, np.array([ch[0]], dtype=N.dtype) if field.kind == "Fp" else _obj_rows([ch[0]], n),
                       transpose(powers[len(ch) - s])).reshape(-1)
                   for ch in chains]
        # carried vector = N^(len-s) applied to top; rows convention: v @ (N^k)^T
        blocked = vstack(field, [kernels[s - 1]] +
                         ([np.array(carried) if field.kind == "Fp" else _obj_rows(carried, n)]
                          if carried else []), ncols=n)
        new_tops = complete_basis(field, blocked, kernels[s])
        for t in range(new_tops.shape[0]):
            v = new_tops[t]
            chain = [v]
            for _ in range(s - 1):
                chain.append(mul(field, chain[-1].reshape(1, -1), transpose(N)).reshape(-1))
            chains.append(chain)
    allv = [v for ch in chains for v in ch]
    stacked = np.array(allv) if field.kind == "Fp" else _obj_rows(allv, n)
    assert stacked.shape[0] == n and rank(field, stacked) == n, "chain basis failure"
    return chains


def integerize_rows(field, A):
    """Over QQ, rescale each row to integer entries (basis unchanged)."""
    if field.kind != "Q" or A.shape[0] == 0:
        return A
    from fractions import Fraction
    from math import gcd
    out = A.copy()
    for r in range(out.shape[0]):
        lcm = 1
        for x in out[r]:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        if lcm != 1:
            for c in range(out.shape[1]):
                out[r, c] = out[r, c] * lcm
        g = 0
        for x in out[r]:
            g = gcd(g, abs(x.numerator))
        if g > 1:
            for c in range(out.shape[1]):
                out[r, c] = Fraction(out[r, c], g)
    return out


def to_lists(field, A):
    if field.kind == "Fp":
        return [[int(x) for x in row] for row in A]
    return [[x for x in row] for row in A]


def mat_bytes(field, A):
    """Stable hashable encoding of a matrix (used for memo keys)."""
    if field.kind == "Fp":
        return (A.shape, A.tobytes())
    return (A.shape, tuple(str(x) for x in A.flat))
