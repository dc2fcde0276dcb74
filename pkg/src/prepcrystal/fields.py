"""Exact ground fields: the rationals and prime fields F_p.

Matrices over QQ are numpy object arrays of ``fractions.Fraction``;
matrices over GFp are numpy int64 arrays with entries in [0, p).  The
linear algebra in :mod:`prepcrystal.linalg` dispatches on ``field.kind``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class QQ:
    """The field of rational numbers (exact, arbitrary precision)."""

    kind = "Q"
    dtype = object

    def __repr__(self):
        return "QQ"

    def to_elem(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, (int, np.integer)):
            return Fraction(int(x))
        raise TypeError(f"cannot coerce {x!r} into QQ")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def wrap(self, rows):
        """Build an exact matrix (2-D object array) from nested data."""
        a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                a[i, j] = self.to_elem(x)
        return a

    def zeros(self, r, c):
        a = np.empty((r, c), dtype=object)
        a[...] = Fraction(0)
        return a

    def eye(self, n):
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = Fraction(1)
        return a

    def inv_elem(self, x):
        return Fraction(1) / x

    def is_zero(self, x):
        return x == 0

    def rand_elem(self, rng, spread=99):
        # Integer draws keep matrices reducible mod any prime.
        return Fraction(rng.randint(-spread, spread))

    def elem_to_str(self, x):
        return str(x)

    def elem_from_str(self, s):
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")


class GFp:
    """Prime field F_p; elements are plain ints in [0, p)."""

    kind = "Fp"
    dtype = np.int64

    def __init__(self, p: int):
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        self.p = int(p)

    def __repr__(self):
        return f"GF({self.p})"

    def to_elem(self, x):
        if isinstance(x, str):
            if "/" in x:
                num, den = x.split("/")
                return int(num) * pow(int(den), self.p - 2, self.p) % self.p
            x = int(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, self.p - 2, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def wrap(self, rows):
        a = np.array([[self.to_elem(x) for x in row] for row in rows],
                     dtype=np.int64)
        if a.ndim == 1:  # empty row list
            a = a.reshape(len(rows), 0)
        return a

    def zeros(self, r, c):
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def inv_elem(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(x, self.p - 2, self.p)

    def is_zero(self, x):
        return int(x) % self.p == 0

    def rand_elem(self, rng, spread=None):
        return rng.randrange(self.p)

    def elem_to_str(self, x):
        return str(int(x) % self.p)

    def elem_from_str(self, s):
        return self.to_elem(s)

    def __eq__(self, other):
        return isinstance(other, GFp) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))


#: Default big prime used for "generic over an algebraically closed field"
#: sampling (2**31 - 1, a Mersenne prime).
DEFAULT_PRIME = 2147483647


def field_from_json(obj) -> QQ | GFp:
    if obj.get("kind") == "Q":
        return QQ()
    if obj.get("kind") == "Fp":
        return GFp(int(obj["p"]))
    raise ValueError(f"unknown field spec {obj!r}")


def field_to_json(field) -> dict:
    if field.kind == "Q":
        return {"kind": "Q"}
    return {"kind": "Fp", "p": field.p}
