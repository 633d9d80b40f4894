"""Sparse exact linear algebra over F_p.

Vectors are dicts {column: nonzero residue}.  The central structure is an
incremental echelon form with min-column pivoting: each inserted row is
reduced against the existing pivot rows and either vanishes or contributes
a new pivot.  A stored pivot row has its pivot column removed and is
normalized so the pivot coefficient is 1; every remaining entry of a pivot
row sits in a column strictly greater than the pivot column, which makes
back-substitution in decreasing column order valid for kernels and solves.
All ranks are exact; rank + nullity = number of columns by construction.
"""

from .arith import inv_mod

__all__ = ["SparseFpMatrix", "Echelon", "solve_sparse", "vec_add", "vec_scale"]


def vec_scale(v, c, p):
    c %= p
    if c == 0:
        return {}
    return {k: (x * c) % p for k, x in v.items()}


def vec_add(u, v, p):
    w = dict(u)
    for k, x in v.items():
        y = (w.get(k, 0) + x) % p
        if y:
            w[k] = y
        else:
            w.pop(k, None)
    return w


class Echelon:
    """Incremental row echelon over an arbitrary hashable column space."""

    def __init__(self, p):
        self.p = p
        self.pivots = {}  # pivot column -> normalized row without the pivot entry

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row):
        """Canonical residual of row modulo the stored pivot rows: every
        pivot column gets eliminated, so against a fixed echelon this is a
        linear projection and residuals of equivalent vectors coincide."""
        p = self.p
        row = {k: v % p for k, v in row.items() if v % p}
        out = {}
        while row:
            c = min(row)
            f = row.pop(c)
            piv = self.pivots.get(c)
            if piv is None:
                out[c] = f
                continue
            # pivot tails only hold columns > c, so they land back in `row`
            for k, v in piv.items():
                y = (row.get(k, 0) - f * v) % p
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)
        return out

    def add(self, row):
        """Insert a row; True iff it enlarged the span."""
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        f = inv_mod(row.pop(c), self.p)
        self.pivots[c] = {k: (v * f) % self.p for k, v in row.items()}
        return True

    def member(self, row):
        return not self.reduce(row)


class SparseFpMatrix:
    """Row-built sparse matrix understood as a linear system on `ncols`
    unknowns; used for exact rank and kernel computations."""

    def __init__(self, ncols, p):
        self.ncols = ncols
        self.p = p
        self.ech = Echelon(p)
        self.nnz = 0

    def add_row(self, row):
        self.nnz += len(row)
        return self.ech.add(row)

    @property
    def rank(self):
        return self.ech.rank

    @property
    def nullity(self):
        return self.ncols - self.rank

    def kernel_basis(self):
        """One kernel vector per non-pivot column, by back-substitution."""
        p = self.p
        pivots = self.ech.pivots
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = {f: 1}
            # pivot rows only reference columns greater than their pivot
            for c in sorted(pivots, reverse=True):
                s = 0
                for k, val in pivots[c].items():
                    x = v.get(k)
                    if x:
                        s += val * x
                s = (-s) % p
                if s:
                    v[c] = s
            basis.append(v)
        return basis


def solve_sparse(eqs, ncols, p):
    """Solve the sparse linear system given as (row, rhs) pairs; unknowns are
    columns 0..ncols-1.  Returns one solution dict (free unknowns set to 0)
    or None when inconsistent."""
    RHS = ncols  # augmented column; larger than every unknown, so it is
    # never chosen as a min-column pivot before the unknowns are exhausted
    ech = Echelon(p)
    for row, rhs in eqs:
        r = dict(row)
        if rhs % p:
            r[RHS] = rhs % p
        res = ech.reduce(r)
        if res:
            if min(res) == RHS:
                return None
            c = min(res)
            f = inv_mod(res.pop(c), p)
            ech.pivots[c] = {k: (v * f) % p for k, v in res.items()}
    x = {}
    for c in sorted(ech.pivots, reverse=True):
        s = 0
        for k, val in ech.pivots[c].items():
            if k == RHS:
                s -= val  # move the constant to the right-hand side
            else:
                xv = x.get(k)
                if xv:
                    s += val * xv
        s = (-s) % p
        if s:
            x[c] = s
    return x
