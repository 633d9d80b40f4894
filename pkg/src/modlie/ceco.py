"""Chevalley-Eilenberg cohomology of finite-dimensional Lie algebras
over F_p, with adjoint or trivial coefficients.

The differential convention is

    d phi(x_0..x_n) = sum_{i<j} (-1)^{i+j} phi([x_i,x_j], x_0..^i..^j..x_n)
                    + sum_i (-1)^i x_i . phi(x_0..^i..x_n)

so the kernel of d on 1-cochains with adjoint coefficients is the space
of derivations.  Cochains are stored on sorted basis tuples; ranks of
the differentials are computed by pushing elementary cochains through
sparse echelon forms.  When the algebra has a toral basis element the
complex splits by weight, and with an honest Z-grading it also splits
by degree; both splittings are exact index bookkeeping, not heuristics.
"""

import itertools
from collections import defaultdict

from .linalg import Echelon, SparseFpMatrix, solve_sparse, vec_add, vec_scale

__all__ = [
    "BudgetExceeded",
    "Cochain",
    "ce_differential",
    "ComplexSlice",
    "chain_columns",
    "CohomologyResult",
    "cohomology_dim",
    "weight_zero_reduce",
    "degree_slice",
    "coboundary_witness",
    "class_span_dim",
    "massey_bracket",
    "h2_positive",
]

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    pass


def _perm_sign_and_sorted(xs):
    """Sort a tuple of basis indices; returns (sign, sorted tuple) or
    (0, None) on a repeated index."""
    xs = list(xs)
    sign = 1
    for i in range(1, len(xs)):
        j = i
        while j and xs[j - 1] > xs[j]:
            xs[j - 1], xs[j] = xs[j], xs[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(xs)):
        if xs[i - 1] == xs[i]:
            return 0, None
    return sign, tuple(xs)


class Cochain:
    """Alternating n-cochain on L with values in the adjoint or trivial
    module, stored as {sorted basis tuple: sparse target vector}; the
    trivial module uses the single target key 0."""

    def __init__(self, L, n, module, coeffs=None):
        if module not in ("adjoint", "trivial"):
            raise ValueError("module must be 'adjoint' or 'trivial'")
        self.L = L
        self.n = n
        self.module = module
        self.coeffs = {}
        for T, vec in (coeffs or {}).items():
            T = tuple(T)
            if list(T) != sorted(set(T)):
                raise ValueError("cochain key %r is not a sorted tuple" % (T,))
            if len(T) != n:
                raise ValueError("cochain key %r has wrong arity" % (T,))
            vec = {k: v % L.p for k, v in vec.items() if v % L.p}
            if vec:
                self.coeffs[T] = vec

    def evaluate(self, *xs):
        """Value on basis indices, any order (alternating extension)."""
        if len(xs) != self.n:
            raise ValueError("expected %d arguments" % self.n)
        sign, T = _perm_sign_and_sorted(xs)
        if sign == 0:
            return {}
        v = self.coeffs.get(T, {})
        return v if sign == 1 else vec_scale(v, -1, self.L.p)

    def eval_vec_pair(self, u, v):
        """Bilinear evaluation of a 2-cochain on sparse vectors."""
        if self.n != 2:
            raise ValueError("eval_vec_pair needs a 2-cochain")
        out = {}
        p = self.L.p
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                for k, w in self.evaluate(i, j).items():
                    y = (out.get(k, 0) + a * b * w) % p
                    if y:
                        out[k] = y
                    else:
                        out.pop(k, None)
        return out

    def is_zero(self):
        return not self.coeffs

    def add(self, other, scale=1):
        if other.n != self.n or other.module != self.module:
            raise ValueError("cochain mismatch")
        coeffs = defaultdict(dict)
        for c, s in ((self, 1), (other, scale)):
            for T, vec in c.coeffs.items():
                for k, v in vec.items():
                    coeffs[T][k] = (coeffs[T].get(k, 0) + s * v) % self.L.p
        return Cochain(self.L, self.n, self.module, dict(coeffs))

    def scale(self, c):
        return Cochain(self.L, self.n, self.module, {
            T: vec_scale(vec, c, self.L.p) for T, vec in self.coeffs.items()
        })

    def flatten(self):
        return {
            (T, k): v for T, vec in self.coeffs.items() for k, v in vec.items()
        }

    def support_weight(self):
        """Common weight of the support columns, or raise if mixed."""
        w = None
        for T, vec in self.coeffs.items():
            for k in vec:
                cw = _column_weight(self.L, self.module, T, k)
                if w is None:
                    w = cw
                elif w != cw:
                    raise ValueError("cochain support mixes weights")
        return w

    def __repr__(self):
        return "<Cochain n=%d %s on %s, %d terms>" % (
            self.n, self.module, self.L.name, len(self.coeffs))


def _act(L, module, z, vec):
    if module == "trivial":
        return {}
    return L.bracket_vec({z: 1}, vec)


def ce_differential(c):
    """The Chevalley-Eilenberg differential, assembled support-first:
    each stored tuple T feeds the output tuples it can reach, through
    the module action (insertion of one index) and through splitting a
    support index into a bracket pair."""
    L, n, module = c.L, c.n, c.module
    p = L.p
    out = defaultdict(dict)

    def bump(U, k, val):
        val %= p
        if not val:
            return
        y = (out[U].get(k, 0) + val) % p
        if y:
            out[U][k] = y
        else:
            out[U].pop(k, None)

    for T, vec in c.coeffs.items():
        Tset = set(T)
        # module action: U = T with z inserted, sign by z's position
        if module == "adjoint":
            for z in range(L.dim):
                if z in Tset:
                    continue
                acted = _act(L, module, z, vec)
                if not acted:
                    continue
                pos = sum(1 for t in T if t < z)
                sgn = -1 if pos % 2 else 1
                U = T[:pos] + (z,) + T[pos:]
                for k, v in acted.items():
                    bump(U, k, sgn * v)
        # bracket terms: replace one support index m by a pair (i, j)
        for m in T:
            rest = tuple(t for t in T if t != m)
            restset = Tset - {m}
            sgn_m = -1 if sum(1 for r in rest if r < m) % 2 else 1
            for (i, j), cc in L.rev.get(m, ()):
                if i in restset or j in restset:
                    continue
                merged = sorted(rest + (i, j))
                pi = merged.index(i)
                pj = merged.index(j)
                sgn = -1 if (pi + pj) % 2 else 1
                U = tuple(merged)
                f = sgn * sgn_m * cc
                for k, v in vec.items():
                    bump(U, k, f * v)
    return Cochain(L, n + 1, module, {U: v for U, v in out.items() if v})


def _column_weight(L, module, T, t):
    w = L.weights
    s = -sum(w[x] for x in T)
    if module == "adjoint":
        s += w[t]
    return s % L.p


def _column_degree(L, module, T, t):
    g = L.grading
    s = -sum(g[x] for x in T)
    if module == "adjoint":
        s += g[t]
    return s


class ComplexSlice:
    """Restriction of the cochain complex to one weight class (mod p,
    via the toral element) and/or one exact integer degree (via the
    Z-grading; refused on merely filtered algebras, where degrees are
    not additive)."""

    def __init__(self, L, module="adjoint", weight=None, degree=None,
                 toral=None):
        if weight is not None and toral is None and L.toral is None:
            raise ValueError("weight slice needs a toral element")
        if degree is not None:
            if L.grading is None:
                raise ValueError("degree slice needs a grading")
            if L.filtration:
                raise ValueError(
                    "degree slices are invalid on a filtered algebra")
        self.L = L
        self.module = module
        self.weight = weight % L.p if weight is not None else None
        self.degree = degree
        self.toral = toral
        self._wt = None
        if weight is not None:
            self._wt = L.weights_for(toral) if toral is not None else L.weights

    def admits(self, T, t):
        if self.weight is not None:
            w = self._wt
            s = -sum(w[x] for x in T)
            if self.module == "adjoint":
                s += w[t]
            if s % self.L.p != self.weight:
                return False
        if self.degree is not None and \
                _column_degree(self.L, self.module, T, t) != self.degree:
            return False
        return True

    def descriptor(self):
        return {"module": self.module, "weight": self.weight,
                "degree": self.degree, "toral": self.toral}


def chain_columns(L, n, module="adjoint", slice_=None):
    """Enumerate the (tuple, target) columns of C^n, in lexicographic
    tuple order; target 0 stands for the ground field in the trivial
    module."""
    if n < 0:
        return []
    targets = range(L.dim) if module == "adjoint" else (0,)
    cols = []
    for T in itertools.combinations(range(L.dim), n):
        for t in targets:
            if slice_ is None or slice_.admits(T, t):
                cols.append((T, t))
    return cols


class CohomologyResult:
    def __init__(self, dim, ncols, rank_d, rank_prev, reps=None):
        self.dim = dim
        self.ncols = ncols
        self.rank_d = rank_d
        self.rank_prev = rank_prev
        self.reps = reps

    def __repr__(self):
        return "<H dim=%d (cols=%d, rank d=%d, rank prev=%d)>" % (
            self.dim, self.ncols, self.rank_d, self.rank_prev)


def _differential_rows(L, n, module, cols, budget, counter):
    """Sparse rows (one per output coordinate) of d restricted to the
    given C^n columns, keyed by C^{n+1} coordinates."""
    rows = defaultdict(dict)
    for idx, (T, t) in enumerate(cols):
        img = ce_differential(Cochain(L, n, module, {T: {t: 1}}))
        for key, v in img.flatten().items():
            rows[key][idx] = v
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(
                    "differential exceeds the %d-entry budget; restrict to "
                    "a weight slice (weight_zero_reduce) or raise the budget"
                    % budget)
    return rows


def cohomology_dim(L, n, module="adjoint", slice_=None, budget=DEFAULT_BUDGET,
                   cache=None, want_reps=False):
    """dim H^n(L; module) on the chosen slice (the whole complex when
    slice_ is None), by exact sparse ranks:

        dim H^n = #C^n - rank(d_n) - rank(d_{n-1}).

    With want_reps, also returns cocycle representatives extending the
    coboundary space.  Results without representatives are cached under
    (algebra hash, module, n, slice descriptor)."""
    desc = slice_.descriptor() if slice_ is not None else None
    key = None
    if cache is not None:
        key = {"algebra": L.hash_key(), "module": module, "n": n,
               "slice": desc, "kind": "cohomology"}
        hit = cache.get(key)
        if hit is not None and not want_reps:
            return CohomologyResult(hit["dim"], hit["ncols"],
                                    hit["rank_d"], hit["rank_prev"])
    cols = chain_columns(L, n, module, slice_)
    counter = [0]
    rows = _differential_rows(L, n, module, cols, budget, counter)
    mat = SparseFpMatrix(len(cols), L.p)
    for r in rows.values():
        mat.add_row(r)
    rank_d = mat.rank

    prev_cols = chain_columns(L, n - 1, module, slice_)
    prev_rows = _differential_rows(L, n - 1, module, prev_cols, budget, counter)
    # image vectors of d_{n-1}, re-keyed to C^n column indices
    colidx = {ct: i for i, ct in enumerate(cols)}
    image = Echelon(L.p)
    img_vecs = defaultdict(dict)
    for key2, row in prev_rows.items():
        for j, v in row.items():
            img_vecs[j][key2] = v
    for j, vec in img_vecs.items():
        image.add({colidx[ck]: v for ck, v in vec.items() if ck in colidx})
    rank_prev = image.rank

    dim = len(cols) - rank_d - rank_prev
    reps = None
    if want_reps:
        span = Echelon(L.p)
        for piv, row in image.pivots.items():
            span.pivots[piv] = dict(row)
        reps = []
        for v in mat.kernel_basis():
            if span.add(v):
                coeffs = defaultdict(dict)
                for i, c in v.items():
                    T, t = cols[i]
                    coeffs[T][t] = c
                reps.append(Cochain(L, n, module, dict(coeffs)))
        if len(reps) != dim:
            raise AssertionError("representative count %d != dim %d"
                                 % (len(reps), dim))
    if cache is not None and key is not None:
        cache.put(key, {"dim": dim, "ncols": len(cols),
                        "rank_d": rank_d, "rank_prev": rank_prev})
    return CohomologyResult(dim, len(cols), rank_d, rank_prev, reps)


def weight_zero_reduce(L, module="adjoint", t=None):
    """The weight-zero slice of the complex (with respect to the toral
    element t, default the algebra's own); the whole cohomology sits
    here when a toral element acts (the nonzero-weight slices are exact,
    which the vanishing spot checks verify rather than assume)."""
    return ComplexSlice(L, module, weight=0, toral=t)


def degree_slice(L, d, module="adjoint"):
    return ComplexSlice(L, module, degree=d)


def coboundary_witness(L, c, module=None, budget=DEFAULT_BUDGET):
    """Solve d(psi) = c for a 1-cochain psi; returns the witness Cochain
    or None when c is not a coboundary.  The search space is cut to the
    weight slice of c's support when a toral element is available."""
    module = module or c.module
    if c.n != 2:
        raise ValueError("coboundary_witness expects a 2-cochain")
    slice_ = None
    if L.toral is not None:
        w = c.support_weight()
        if w is not None:
            slice_ = ComplexSlice(L, module, weight=w)
    cols = chain_columns(L, 1, module, slice_)
    counter = [0]
    rows = _differential_rows(L, 1, module, cols, budget, counter)
    tgt = c.flatten()
    keys = set(rows) | set(tgt)
    eqs = [(rows.get(k, {}), tgt.get(k, 0)) for k in keys]
    sol = solve_sparse(eqs, len(cols), L.p)
    if sol is None:
        return None
    coeffs = defaultdict(dict)
    for i, v in sol.items():
        T, t = cols[i]
        coeffs[T][t] = v
    return Cochain(L, 1, module, dict(coeffs))


def class_span_dim(L, cocycles, module="adjoint", budget=DEFAULT_BUDGET):
    """Dimension of the span of the given 2-cocycles in H^2: each input
    is verified to be closed, then counted against the coboundary space
    of the weight slices its support touches."""
    if not cocycles:
        return 0
    weights = set()
    for c in cocycles:
        if c.n != 2 or c.module != module:
            raise ValueError("need 2-cochains in the %s module" % module)
        if not ce_differential(c).is_zero():
            raise ValueError("input cochain is not closed")
        if L.toral is not None:
            w = c.support_weight()
            if w is not None:
                weights.add(w)
    span = Echelon(L.p)
    if L.toral is not None and weights:
        cols = []
        for w in sorted(weights):
            cols.extend(chain_columns(L, 1, module,
                                      ComplexSlice(L, module, weight=w)))
    else:
        cols = chain_columns(L, 1, module)
    for T, t in cols:
        img = ce_differential(Cochain(L, 1, module, {T: {t: 1}}))
        span.add(img.flatten())
    count = 0
    for c in cocycles:
        if span.add(c.flatten()):
            count += 1
    return count


def massey_bracket(phi, psi):
    """The symmetric bracket of two adjoint 2-cochains,

        [phi,psi](x,y,z) = phi(psi(x,y),z) + psi(phi(x,y),z) + cyclic,

    a 3-cochain.  d(Phi) = 0 and [Phi,Phi] = 0 make [.,.]+Phi a Lie
    bracket; vanishing pairwise brackets let deformation directions mix."""
    L = phi.L
    if psi.L is not L or phi.n != 2 or psi.n != 2:
        raise ValueError("massey_bracket needs two 2-cochains on one algebra")
    if phi.module != "adjoint" or psi.module != "adjoint":
        raise ValueError("massey_bracket needs adjoint coefficients")
    p = L.p
    triples = set()
    for c in (phi, psi):
        for (a, b) in c.coeffs:
            for z in range(L.dim):
                if z != a and z != b:
                    triples.add(tuple(sorted((a, b, z))))
    coeffs = {}
    for (x, y, z) in sorted(triples):
        v = {}
        for f, g in ((phi, psi), (psi, phi)):
            for (a, b, cdx) in ((x, y, z), (y, z, x), (z, x, y)):
                inner = g.evaluate(a, b)
                if not inner:
                    continue
                w = f.eval_vec_pair(inner, {cdx: 1})
                v = vec_add(v, w, p)
        if v:
            coeffs[(x, y, z)] = v
    return Cochain(L, 3, "adjoint", coeffs)


def h2_positive(L, module="adjoint", budget=DEFAULT_BUDGET, cache=None):
    """Sum of dim H^2 over the strictly positive degree slices of the
    Z-grading."""
    if L.grading is None:
        raise ValueError("h2_positive needs a graded algebra")
    lo, hi = min(L.grading), max(L.grading)
    total = 0
    per_degree = {}
    for d in range(1, hi - 2 * lo + 1):
        res = cohomology_dim(L, 2, module,
                             slice_=degree_slice(L, d, module),
                             budget=budget, cache=cache)
        if res.dim:
            per_degree[d] = res.dim
        total += res.dim
    return total, per_degree
