"""The doubled quiver and the defining relations, as formal path expressions.

Arrow naming is deterministic: ``eps_i`` for the loop at vertex i and
``a_i_j_g`` for the g-th arrow j -> i (present whenever c_ij < 0).  A path
``(a1, a2, ..., ak)`` denotes the composition a1∘a2∘...∘ak, i.e. ak acts
first; evaluating it on a representation multiplies the matrices in the
written order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int  # 1-indexed vertex
    target: int


class DoubledQuiver:
    """Vertices 1..n, one loop per vertex, g_ij arrows j->i per edge pair."""

    def __init__(self, datum):
        self.datum = datum
        self.arrows = {}
        for i in range(1, datum.n + 1):
            self._add(Arrow(f"eps_{i}", i, i))
        for (i, j) in datum.edges():
            for g in range(1, datum.g(i, j) + 1):
                self._add(Arrow(f"a_{i}_{j}_{g}", j, i))
        self.names = sorted(self.arrows)

    def _add(self, arrow):
        self.arrows[arrow.name] = arrow

    def source(self, name):
        return self.arrows[name].source

    def target(self, name):
        return self.arrows[name].target

    def loop(self, i):
        return f"eps_{i}"

    def arrow(self, i, j, g=1):
        """Name of the g-th arrow j -> i."""
        return f"a_{i}_{j}_{g}"

    def arrow_count(self):
        return len(self.arrows)

    def incoming(self, i):
        """Non-loop arrows with target i."""
        return [a.name for a in self.arrows.values()
                if a.target == i and a.source != i]

    def outgoing(self, i):
        return [a.name for a in self.arrows.values()
                if a.source == i and a.target != i]


def build_quiver(datum) -> DoubledQuiver:
    return DoubledQuiver(datum)


class PathExpr:
    """Integer linear combination of parallel paths (same source/target)."""

    def __init__(self, quiver, terms, label=""):
        self.quiver = quiver
        self.label = label
        self.terms = []
        src = tgt = None
        for coeff, path in terms:
            path = tuple(path)
            if not path:
                raise ValueError("empty paths are not allowed in relations")
            for a, b in zip(path, path[1:]):
                if quiver.source(a) != quiver.target(b):
                    raise ValueError(f"path {path} is not composable at {a}|{b}")
            s, t = quiver.source(path[-1]), quiver.target(path[0])
            if src is None:
                src, tgt = s, t
            elif (s, t) != (src, tgt):
                raise ValueError("terms of a PathExpr must be parallel")
            if coeff:
                self.terms.append((int(coeff), path))
        self.source = src
        self.target = tgt

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for c, path in self.terms:
            word = "*".join(path)
            if c == 1:
                bits.append(word)
            elif c == -1:
                bits.append(f"-{word}")
            else:
                bits.append(f"{c}*{word}")
        return " + ".join(bits).replace("+ -", "- ")

    def to_json(self):
        return json.dumps([{"coeff": c, "path": list(p)} for c, p in self.terms])

    @staticmethod
    def from_json(quiver, text):
        data = json.loads(text)
        return PathExpr(quiver, [(d["coeff"], tuple(d["path"])) for d in data])


def _loop_power(quiver, i, k):
    return (quiver.loop(i),) * k


def preprojective_relations(datum, quiver=None):
    """The relations of Pi(C, D, Omega), in order (P1), (P2), (P3) per vertex."""
    q = quiver or build_quiver(datum)
    rels = []
    for i in range(1, datum.n + 1):
        rels.append(PathExpr(q, [(1, _loop_power(q, i, datum.ci(i)))],
                             label=f"P1@{i}"))
    for (i, j) in datum.edges():
        for g in range(1, datum.g(i, j) + 1):
            a = q.arrow(i, j, g)
            rels.append(PathExpr(
                q,
                [(1, _loop_power(q, i, datum.f(j, i)) + (a,)),
                 (-1, (a,) + _loop_power(q, j, datum.f(i, j)))],
                label=f"P2@{i},{j},{g}"))
    for i in range(1, datum.n + 1):
        terms = []
        for j in datum.neighbours(i):
            sgn = datum.sgn(i, j)
            fji = datum.f(j, i)
            for g in range(1, datum.g(j, i) + 1):
                for f in range(fji):
                    path = (_loop_power(q, i, f)
                            + (q.arrow(i, j, g), q.arrow(j, i, g))
                            + _loop_power(q, i, fji - 1 - f))
                    terms.append((sgn, path))
        if terms:
            rels.append(PathExpr(q, terms, label=f"P3@{i}"))
    return rels


def h_relations(datum, quiver=None):
    """Relations of the subalgebra H(C, D, Omega): nilpotency + commutativity."""
    q = quiver or build_quiver(datum)
    rels = []
    for i in range(1, datum.n + 1):
        rels.append(PathExpr(q, [(1, _loop_power(q, i, datum.ci(i)))],
                             label=f"H1@{i}"))
    for (i, j) in sorted(datum.omega):
        for g in range(1, datum.g(i, j) + 1):
            a = q.arrow(i, j, g)
            rels.append(PathExpr(
                q,
                [(1, _loop_power(q, i, datum.f(j, i)) + (a,)),
                 (-1, (a,) + _loop_power(q, j, datum.f(i, j)))],
                label=f"H2@{i},{j},{g}"))
    return rels
