"""Cartan matrices, symmetrizers, orientations and weight arithmetic.

Vertices are numbered 1..n externally (matching arrow names like
``a_1_2_1``); all vectors (rank vectors, dimension vectors, weight
coordinates) are plain tuples of ints indexed 0..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (BadDiagonal, BadOrientation, NonSymmetrizable,
                     NotDominant, NotFiniteType, NotLocallyFreeShape)


@dataclass(frozen=True)
class CartanDatum:
    """A symmetrizable Cartan matrix with symmetrizer and orientation.

    ``C[i][j]`` is c_{ij} (0-indexed), ``D[i]`` the symmetrizer entry c_i,
    ``omega`` the set of oriented pairs (1-indexed, as in the source data).
    """

    C: tuple
    D: tuple
    omega: frozenset

    @property
    def n(self):
        return len(self.D)

    def c(self, i, j):
        """Cartan entry c_ij, 1-indexed."""
        return self.C[i - 1][j - 1]

    def ci(self, i):
        """Symmetrizer entry c_i, 1-indexed."""
        return self.D[i - 1]

    def g(self, i, j):
        return abs(gcd(self.c(i, j), self.c(j, i)))

    def f(self, i, j):
        return abs(self.c(i, j)) // self.g(i, j)

    def sgn(self, i, j):
        if (i, j) in self.omega:
            return 1
        if (j, i) in self.omega:
            return -1
        raise ValueError(f"({i},{j}) not an edge")

    def neighbours(self, i):
        """Vertices j with c_ij < 0, ascending."""
        return [j for j in range(1, self.n + 1) if j != i and self.c(i, j) < 0]

    def edges(self):
        """All ordered pairs (i, j) with c_ij < 0 (i.e. the doubled set)."""
        out = []
        for i in range(1, self.n + 1):
            for j in self.neighbours(i):
                out.append((i, j))
        return out


def _check_cartan_matrix(C):
    n = len(C)
    for row in C:
        if len(row) != n:
            raise NonSymmetrizable("Cartan matrix must be square")
    for i in range(n):
        if C[i][i] != 2:
            raise NonSymmetrizable(f"diagonal entry c_{i+1}{i+1} != 2")
        for j in range(n):
            if i != j and C[i][j] > 0:
                raise NonSymmetrizable(f"off-diagonal entry c_{i+1}{j+1} > 0")
            if (C[i][j] != 0) != (C[j][i] != 0):
                raise NonSymmetrizable(
                    f"zero pattern not symmetric at ({i+1},{j+1})")


def validate_datum(C, D, omega) -> CartanDatum:
    """Check axioms for (C, D, Omega) and build the datum."""
    C = tuple(tuple(int(x) for x in row) for row in C)
    _check_cartan_matrix(C)
    n = len(C)
    D = tuple(int(x) for x in D)
    if len(D) != n:
        raise BadDiagonal("symmetrizer length mismatch")
    if any(ci < 1 for ci in D):
        raise BadDiagonal("symmetrizer entries must be positive")
    for i in range(n):
        for j in range(n):
            if D[i] * C[i][j] != D[j] * C[j][i]:
                raise NonSymmetrizable(
                    f"DC not symmetric at ({i+1},{j+1}): "
                    f"{D[i]}*{C[i][j]} != {D[j]}*{C[j][i]}")
    omega = frozenset((int(a), int(b)) for a, b in omega)
    for (a, b) in omega:
        if not (1 <= a <= n and 1 <= b <= n):
            raise BadOrientation(f"vertex out of range in ({a},{b})")
        if C[a - 1][b - 1] == 0:
            raise BadOrientation(f"({a},{b}) oriented but c_{a}{b} = 0")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if C[i - 1][j - 1] < 0:
                cnt = ((i, j) in omega) + ((j, i) in omega)
                if cnt != 1:
                    raise BadOrientation(
                        f"edge {{{i},{j}}} must carry exactly one orientation")
    return CartanDatum(C=C, D=D, omega=omega)


def default_orientation(C):
    """{(i,j) : i < j, c_ij < 0}."""
    n = len(C)
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
            if C[i - 1][j - 1] < 0]


def minimal_symmetrizer(C):
    """The unique minimal symmetrizer, computed per connected component."""
    C = [list(map(int, row)) for row in C]
    _check_cartan_matrix(C)
    n = len(C)
    ratio = [None] * n  # c_i as Fraction relative to component root
    comps = []
    for start in range(n):
        if ratio[start] is not None:
            continue
        comp = [start]
        ratio[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if i != j and C[i][j] != 0:
                    # c_i * c_ij = c_j * c_ji
                    r = ratio[i] * Fraction(C[i][j], C[j][i])
                    if ratio[j] is None:
                        ratio[j] = r
                        comp.append(j)
                        queue.append(j)
                    elif ratio[j] != r:
                        raise NonSymmetrizable(
                            "inconsistent ratio chain (matrix not symmetrizable)")
        comps.append(comp)
    out = [0] * n
    for comp in comps:
        lcm_den = 1
        for i in comp:
            lcm_den = lcm_den * ratio[i].denominator // gcd(lcm_den, ratio[i].denominator)
        vals = [ratio[i] * lcm_den for i in comp]
        g = 0
        for v in vals:
            g = gcd(g, v.numerator)
        for i, v in zip(comp, vals):
            out[i] = int(v / g)
    validate_datum(C, out, default_orientation(C))
    return tuple(out)


# --- bilinear forms -----------------------------------------------------------


def bil_sym(datum, x, y):
    """Symmetric form (x, y) = sum x_i y_j c_i c_ij on root coordinates."""
    n = datum.n
    return sum(x[i] * y[j] * datum.D[i] * datum.C[i][j]
               for i in range(n) for j in range(n))


def bil_euler(datum, x, y):
    """Non-symmetric form <x, y> with <alpha_i, alpha_j> = c_ji."""
    n = datum.n
    return sum(x[a] * y[b] * datum.C[b][a] for a in range(n) for b in range(n))


def q_dc(datum, x):
    v = bil_sym(datum, x, x)
    assert v % 2 == 0
    return v // 2


def alpha(datum, i):
    """Simple root alpha_i as a rank vector (1-indexed i)."""
    return tuple(1 if k == i - 1 else 0 for k in range(datum.n))


def expected_dim(datum, d):
    """dim G(d) - q_DC(d/D) for a locally-free-shaped dimension vector."""
    n = datum.n
    for i in range(n):
        if d[i] % datum.D[i] != 0:
            raise NotLocallyFreeShape(
                f"c_{i+1} = {datum.D[i]} does not divide d_{i+1} = {d[i]}")
    r = tuple(d[i] // datum.D[i] for i in range(n))
    return sum(x * x for x in d) - q_dc(datum, r)


# --- finite-type root systems -------------------------------------------------


def positive_roots(datum, height_cap=60):
    """All positive roots, by closing the simple roots under reflections."""
    n = datum.n
    roots = {alpha(datum, i) for i in range(1, n + 1)}
    frontier = list(roots)
    while frontier:
        new = []
        for x in frontier:
            for i in range(1, n + 1):
                pairing = sum(x[j] * datum.C[i - 1][j] for j in range(n))
                y = list(x)
                y[i - 1] -= pairing
                y = tuple(y)
                if all(v >= 0 for v in y) and any(v > 0 for v in y) and y not in roots:
                    if sum(y) > height_cap:
                        raise NotFiniteType(
                            f"reflection closure exceeded height cap {height_cap}")
                    roots.add(y)
                    new.append(y)
        frontier = new
    return sorted(roots)


def kostant_count(datum, r, roots=None):
    """Number of multisets of positive roots summing to r."""
    if roots is None:
        roots = positive_roots(datum)
    r = tuple(r)
    if any(v < 0 for v in r):
        return 0
    # bounded-knapsack DP, one root at a time
    counts = {tuple([0] * datum.n): 1}
    for root in roots:
        new = dict(counts)
        # iterate in increasing multiples of root
        for base, c in counts.items():
            k = 1
            while True:
                tgt = tuple(base[i] + k * root[i] for i in range(datum.n))
                if any(tgt[i] > r[i] for i in range(datum.n)):
                    break
                new[tgt] = new.get(tgt, 0) + c
                k += 1
        counts = new
    return counts.get(r, 0)


def kostant_count_brute(datum, r, roots=None):
    """Independent oracle: recursive multiset enumeration."""
    if roots is None:
        roots = positive_roots(datum)
    roots = sorted(roots)

    def rec(target, idx):
        if all(v == 0 for v in target):
            return 1
        if idx == len(roots):
            return 0
        total = 0
        root = roots[idx]
        k = 0
        cur = list(target)
        while all(v >= 0 for v in cur):
            total += rec(tuple(cur), idx + 1)
            for i in range(len(cur)):
                cur[i] -= root[i]
            k += 1
        return total

    return rec(tuple(r), 0)


# --- weights ------------------------------------------------------------------


def is_dominant(a):
    return all(x >= 0 for x in a)


def weight_of_rank(datum, r):
    """Fundamental-weight coordinates of sum r_i alpha_i."""
    n = datum.n
    return tuple(sum(datum.C[j][i] * r[i] for i in range(n)) for j in range(n))


def nu_from_weight(datum, lam, mu, r):
    """nu = lambda + mu - (weight of r), in fundamental-weight coordinates."""
    w = weight_of_rank(datum, r)
    return tuple(lam[j] + mu[j] - w[j] for j in range(datum.n))


def weyl_dim(datum, lam, roots=None):
    """Weyl dimension formula via the symmetric bilinear form."""
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    if roots is None:
        roots = positive_roots(datum)
    num = Fraction(1)
    for root in roots:
        # (lam + rho, alpha) with (x, alpha_i) = c_i * <x, alpha_i>
        top = sum(root[i] * datum.D[i] * (lam[i] + 1) for i in range(datum.n))
        bot = sum(root[i] * datum.D[i] for i in range(datum.n))
        num *= Fraction(top, bot)
    assert num.denominator == 1 and num > 0
    return int(num)


def lr_height_bound(datum, lam, mu):
    """Max height of lambda+mu-nu over dominant nu; needs finite type."""
    n = datum.n
    # invert C over Q: r ranges over integer points with C r <= lam+mu
    from .linalg import inverse
    from .fields import QQ
    qq = QQ()
    Cmat = qq.wrap(datum.C)
    try:
        Cinv = inverse(qq, Cmat)
    except ValueError as exc:
        raise NotFiniteType("Cartan matrix is singular") from exc
    target = [lam[j] + mu[j] for j in range(n)]
    bound = [0] * n
    for i in range(n):
        b = sum(Cinv[i, j] * target[j] for j in range(n))
        bound[i] = max(0, int(b))
    best = 0
    import itertools
    for r in itertools.product(*(range(bound[i] + 1) for i in range(n))):
        nu = nu_from_weight(datum, lam, mu, r)
        if is_dominant(nu):
            best = max(best, sum(r))
    return best
