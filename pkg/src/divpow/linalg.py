"""Sparse exact linear algebra over a :class:`~divpow.coefficients.Field`.

Vectors are dicts from hashable keys to raw field values.  Keys are compared
through a caller-supplied sort key so that leading terms are deterministic.
"""

from __future__ import annotations

from .coefficients import add_scaled


class Echelon:
    """Row-echelon basis of a subspace; reduces vectors to a unique normal
    form modulo that subspace (no leading key of the subspace survives)."""

    def __init__(self, F, key=None):
        self.F = F
        self.key = key or (lambda k: k)
        self.rows = {}

    def _lead(self, vec):
        return max(vec, key=self.key)

    def reduce(self, vec):
        vec = dict(vec)
        F = self.F
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                return vec
            k = max(hits, key=self.key)
            add_scaled(vec, self.rows[k], F.neg(vec[k]), F)

    def add(self, vec):
        """Insert a vector; return True when it enlarged the span."""
        vec = self.reduce(vec)
        if not vec:
            return False
        k = self._lead(vec)
        inv = self.F.inv(vec[k])
        self.rows[k] = {kk: self.F.mul(v, inv) for kk, v in vec.items()}
        return True

    def __len__(self):
        return len(self.rows)

    def __contains__(self, vec):
        return not self.reduce(vec)


def solve(columns, target, F, key=None):
    """Find coefficients c with sum_j c_j * columns[j] == target.

    Free variables are set to zero; returns None when there is no solution.
    """
    key = key or (lambda k: k)
    rows = {}  # lead key -> (vector, combination of column indices)
    for j, col in enumerate(columns):
        vec, comb = dict(col), {j: 1}
        while True:
            hits = [k for k in vec if k in rows]
            if not hits:
                break
            k = max(hits, key=key)
            c = F.neg(vec[k])
            add_scaled(vec, rows[k][0], c, F)
            add_scaled(comb, rows[k][1], c, F)
        if vec:
            k = max(vec, key=key)
            inv = F.inv(vec[k])
            rows[k] = ({kk: F.mul(v, inv) for kk, v in vec.items()},
                       {kk: F.mul(v, inv) for kk, v in comb.items()})
    vec, sol = dict(target), {}
    while vec:
        hits = [k for k in vec if k in rows]
        if not hits:
            return None
        k = max(hits, key=key)
        c = vec[k]
        add_scaled(vec, rows[k][0], F.neg(c), F)
        add_scaled(sol, rows[k][1], c, F)
    return sol


def nullspace(columns, F, key=None):
    """Basis of {c : sum_j c_j * columns[j] == 0}, as dicts index -> value."""
    key = key or (lambda k: k)
    rows = {}
    basis = []
    for j, col in enumerate(columns):
        vec, comb = dict(col), {j: 1}
        while True:
            hits = [k for k in vec if k in rows]
            if not hits:
                break
            k = max(hits, key=key)
            c = F.neg(vec[k])
            add_scaled(vec, rows[k][0], c, F)
            add_scaled(comb, rows[k][1], c, F)
        if vec:
            k = max(vec, key=key)
            inv = F.inv(vec[k])
            rows[k] = ({kk: F.mul(v, inv) for kk, v in vec.items()},
                       {kk: F.mul(v, inv) for kk, v in comb.items()})
        else:
            basis.append(comb)
    return basis
