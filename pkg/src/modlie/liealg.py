"""Finite-dimensional Lie algebras over F_p and their constructions.

Provides the rank-one Zassenhaus algebras W1(n) (basis e_i, -1 <= i <=
p^n - 2, [e_i, e_j] = N_ij e_{i+j}), sl(2) in the same normalization,
current algebras L (x) A, semidirect sums with derivation tails, the
deformed current algebras L(A, D) whose extra bracket term lives on the
(e_{-1}, e_{-1}) block, and the degree-preserving identification of
W1(n) with L(O1(n-1), d).  Structure probes (center, derived series,
ideal closures, root decompositions) are exact sparse computations.
"""

import hashlib
import json
import random
from collections import defaultdict

from .arith import check_prime, structure_constant_N
from .commalg import (make_divided_powers, partial_derivation,
                      tensor_derivation, tensor_product)
from .linalg import Echelon, SparseFpMatrix, solve_sparse, vec_add, vec_scale

__all__ = [
    "LieAlgebra",
    "LinearMap",
    "make_w1",
    "make_sl2",
    "current_algebra",
    "semidirect_current",
    "make_deformed",
    "kuznetsov_map",
    "verify_morphism",
    "root_decomposition",
    "center",
    "derived_series",
    "is_solvable",
    "ideal_generated_by",
    "find_proper_ideal",
]

JACOBI_EAGER_DIM = 32


class LieAlgebra:
    """Lie algebra from sparse structure constants on ordered pairs i < j.

    grading, when present, is one integer degree per basis element; the
    bracket must be degree-additive, or degree-nondecreasing when the
    algebra is flagged as filtered (deformations).  toral names a basis
    element with diagonal adjoint action, used for weight slicing.
    """

    def __init__(self, p, labels, bracket, grading=None, toral=None,
                 name="L", meta=None, filtration=False, check=None):
        check_prime(p)
        self.p = p
        self.labels = list(labels)
        self.grading = list(grading) if grading is not None else None
        self.toral = toral
        self.name = name
        self.meta = meta or {}
        self.filtration = filtration
        self.bracket = {}
        for (i, j), vec in bracket.items():
            if i == j:
                raise ValueError("diagonal bracket key (%d, %d)" % (i, j))
            if i > j:
                i, j, vec = j, i, vec_scale(vec, -1, p)
            vec = {k: v % p for k, v in vec.items() if v % p}
            if vec:
                self.bracket[(i, j)] = vec
        self._rev = None
        self._weights = None
        self._validate_grading()
        if check is None:
            check = self.dim <= JACOBI_EAGER_DIM
        self.jacobi_checked = False
        if check:
            self.check_jacobi()

    @property
    def dim(self):
        return len(self.labels)

    def _validate_grading(self):
        if self.grading is None:
            return
        for (i, j), vec in self.bracket.items():
            s = self.grading[i] + self.grading[j]
            for k in vec:
                if self.filtration:
                    if self.grading[k] < s:
                        raise ValueError(
                            "bracket drops below the filtration on [%s, %s]"
                            % (self.labels[i], self.labels[j])
                        )
                elif self.grading[k] != s:
                    raise ValueError(
                        "bracket is not degree-additive on [%s, %s]"
                        % (self.labels[i], self.labels[j])
                    )

    def bracket_pair(self, i, j):
        """[e_i, e_j] as a sparse vector, any index order."""
        if i == j:
            return {}
        if i < j:
            return self.bracket.get((i, j), {})
        return vec_scale(self.bracket.get((j, i), {}), -1, self.p)

    def bracket_vec(self, u, v):
        out = {}
        p = self.p
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                c = a * b
                for k, w in self.bracket_pair(i, j).items():
                    y = (out.get(k, 0) + c * w) % p
                    if y:
                        out[k] = y
                    else:
                        out.pop(k, None)
        return out

    @property
    def rev(self):
        """target index -> list of ((i, j), c) with i < j contributing
        c e_target to [e_i, e_j]; used by the cochain differential."""
        if self._rev is None:
            table = defaultdict(list)
            for (i, j), vec in self.bracket.items():
                for k, c in vec.items():
                    table[k].append(((i, j), c))
            self._rev = dict(table)
        return self._rev

    def check_jacobi(self):
        """Exhaustive Jacobi check over basis triples; raises on failure."""
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                bij = self.bracket.get((i, j))
                for k in range(j + 1, n):
                    s = self.bracket_vec(bij or {}, {k: 1})
                    s = vec_add(s, self.bracket_vec(
                        self.bracket.get((j, k), {}), {i: 1}), self.p)
                    s = vec_add(s, self.bracket_vec(
                        vec_scale(self.bracket.get((i, k), {}), -1, self.p),
                        {j: 1}), self.p)
                    if s:
                        raise ValueError(
                            "Jacobi fails on (%s, %s, %s): %r"
                            % (self.labels[i], self.labels[j], self.labels[k], s)
                        )
        self.jacobi_checked = True

    def weights_for(self, t):
        """Weight of each basis element under ad(e_t); requires the
        adjoint action of e_t to be diagonal on the basis."""
        w = []
        for k in range(self.dim):
            v = self.bracket_pair(t, k)
            extra = {m: c for m, c in v.items() if m != k}
            if extra:
                raise ValueError(
                    "ad(%s) is not diagonal at %s"
                    % (self.labels[t], self.labels[k])
                )
            w.append(v.get(k, 0))
        return w

    @property
    def weights(self):
        """Weights under ad of the designated toral element."""
        if self._weights is None:
            if self.toral is None:
                raise ValueError("%s has no toral element" % self.name)
            self._weights = self.weights_for(self.toral)
        return self._weights

    def to_json(self):
        quads = []
        for (i, j), vec in sorted(self.bracket.items()):
            for k, v in sorted(vec.items()):
                quads.append([i, j, k, v])
        doc = {
            "p": self.p,
            "dim": self.dim,
            "basis": self.labels,
            "bracket": quads,
        }
        if self.grading is not None:
            doc["grading"] = self.grading
        if self.toral is not None:
            doc["toral"] = self.toral
        return doc

    @classmethod
    def from_json(cls, doc, name="imported"):
        try:
            p = doc["p"]
            labels = doc["basis"]
            quads = doc["bracket"]
        except (KeyError, TypeError) as exc:
            raise ValueError("algebra document missing field: %s" % exc)
        bracket = defaultdict(dict)
        for entry in quads:
            if len(entry) != 4:
                raise ValueError(
                    "bad bracket entry %r (need [i, j, k, value])" % (entry,))
            i, j, k, v = entry
            if i == j:
                if v % p:
                    raise ValueError("nonzero diagonal bracket entry %r" % (entry,))
                continue
            key, val = ((i, j), v) if i < j else ((j, i), -v)
            prev = bracket[key].get(k)
            if prev is not None and prev != val % p:
                raise ValueError("conflicting bracket entries for %r" % (entry,))
            bracket[key][k] = val % p
        return cls(p, labels, dict(bracket), grading=doc.get("grading"),
                   toral=doc.get("toral"), name=name)

    def hash_key(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def __repr__(self):
        return "<LieAlgebra %s dim=%d p=%d>" % (self.name, self.dim, self.p)


def make_w1(n, p):
    """The Zassenhaus algebra W1(n): basis e_i for -1 <= i <= p^n - 2 at
    position i + 1, bracket [e_i, e_j] = N_ij e_{i+j} (truncated outside
    the index range), grading by i, toral element e_0."""
    check_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    top = p ** n - 2
    idx = lambda i: i + 1
    bracket = {}
    for i in range(-1, top + 1):
        for j in range(i + 1, top + 1):
            if -1 <= i + j <= top:
                c = structure_constant_N(i, j, p)
                if c:
                    bracket[(idx(i), idx(j))] = {idx(i + j): c}
    return LieAlgebra(
        p,
        ["e_%d" % i for i in range(-1, top + 1)],
        bracket,
        grading=list(range(-1, top + 1)),
        toral=idx(0),
        name="W1(%d)" % n,
        meta={"kind": "w1", "n": n},
        check=(p ** n <= JACOBI_EAGER_DIM),
    )


def make_sl2(p):
    """sl(2) in the W-style basis e_{-1}, e_0, e_1 with [e_{-1}, e_0] =
    e_{-1}, [e_{-1}, e_1] = -2 e_0, [e_0, e_1] = e_1."""
    check_prime(p)
    bracket = {
        (0, 1): {0: 1},
        (0, 2): {1: -2 % p},
        (1, 2): {2: 1},
    }
    return LieAlgebra(
        p, ["e_-1", "e_0", "e_1"], bracket,
        grading=[-1, 0, 1], toral=1, name="sl2",
        meta={"kind": "sl2"},
    )


def current_algebra(L, A, check=None):
    """L (x) A with bracket [x (x) a, y (x) b] = [x, y] (x) ab; basis pair
    (i, a) sits at index i * dim(A) + a.  The grading is inherited from L
    alone, which is the grading all the positive-part computations use."""
    if L.p != A.p:
        raise ValueError("factors live over different primes")
    dA = A.dim
    labels = [
        "%s(x)%s" % (L.labels[i], A.labels[a])
        for i in range(L.dim) for a in range(dA)
    ]
    bracket = {}
    for (i, j), vec in L.bracket.items():
        for a in range(dA):
            for b in range(dA):
                x, y = i * dA + a, j * dA + b
                prod = A.product(a, b)
                if not prod:
                    continue
                out = {}
                for k, c in vec.items():
                    for m, cm in prod.items():
                        out[k * dA + m] = c * cm % L.p
                if x > y:
                    x, y = y, x
                    out = vec_scale(out, -1, L.p)
                if out:
                    prev = bracket.setdefault((x, y), {})
                    for t, c in out.items():
                        prev[t] = (prev.get(t, 0) + c) % L.p
    grading = None
    if L.grading is not None:
        grading = [L.grading[i] for i in range(L.dim) for _ in range(dA)]
    toral = None
    if L.toral is not None:
        toral = L.toral * dA + A.unit
    return LieAlgebra(
        L.p, labels, bracket, grading=grading, toral=toral,
        name="%s(x)%s" % (L.name, A.name),
        meta={"kind": "current", "L": L, "A": A, "dims": (L.dim, dA)},
        check=check,
    )


def semidirect_current(L, A, Ds, check=None):
    """(L (x) A) + 1 (x) span(Ds): the derivations Ds of A act on the
    current algebra through the A-factor, [x (x) a, 1 (x) d] = x (x) d(a),
    and bracket among themselves by commutator.  The span of Ds must be
    closed under commutators."""
    cur = current_algebra(L, A, check=False)
    dA = A.dim
    n0 = cur.dim
    nt = len(Ds)
    flat = [D.flatten() for D in Ds]
    span = Echelon(A.p)
    for v in flat:
        if not span.add(dict(v)):
            raise ValueError("derivation tails are linearly dependent")

    def tail_coords(D):
        tgt = D.flatten()
        keys = set(tgt)
        for v in flat:
            keys.update(v)
        eqs = [({s: flat[s][key] for s in range(nt) if key in flat[s]},
                tgt.get(key, 0)) for key in keys]
        return solve_sparse(eqs, nt, A.p)

    bracket = {}
    for key, vec in cur.bracket.items():
        bracket[key] = dict(vec)
    for t, D in enumerate(Ds):
        for i in range(L.dim):
            for a, col in D.cols.items():
                # [x (x) a, 1 (x) d] = x (x) d(a)
                out = {i * dA + k: c % A.p for k, c in col.items()}
                if out:
                    bracket[(i * dA + a, n0 + t)] = out
    for t in range(nt):
        for u in range(t + 1, nt):
            C = Ds[t].commutator(Ds[u])
            if C.is_zero():
                continue
            coords = tail_coords(C)
            if coords is None:
                raise ValueError(
                    "derivation span is not closed under commutators")
            # ad(1 (x) d) acts on the current part as -d, so the tails
            # close under the negated commutator
            out = {n0 + s: (-c) % A.p for s, c in coords.items()}
            if out:
                bracket[(n0 + t, n0 + u)] = out
    labels = cur.labels + ["1(x)%s" % D.name for D in Ds]
    grading = None
    if cur.grading is not None:
        grading = cur.grading + [0] * nt
    return LieAlgebra(
        L.p, labels, bracket, grading=grading, toral=cur.toral,
        name="%s+tails" % cur.name,
        meta={"kind": "semidirect", "L": L, "A": A, "Ds": list(Ds),
              "dims": (L.dim, dA), "ntails": nt},
        check=check,
    )


def make_deformed(A, D, name=None):
    """The deformed current algebra L(A, D): W1(1) (x) A with the bracket
    augmented by Phi_D on the (e_{-1}, e_{-1}) block,

        {e_{-1} (x) a, e_{-1} (x) b} = e_{p-2} (x) (a D(b) - b D(a)).

    The result carries the W-degree as a filtration, and the Jacobi
    identity is verified exhaustively whatever the dimension."""
    p = A.p
    W = make_w1(1, p)
    cur = current_algebra(W, A, check=False)
    dA = A.dim
    bracket = {key: dict(vec) for key, vec in cur.bracket.items()}
    base = (p - 2 + 1) * dA  # index block of e_{p-2} (x) -
    for a in range(dA):
        for b in range(a + 1, dA):
            v = vec_add(
                A.mul({a: 1}, D({b: 1})),
                vec_scale(A.mul({b: 1}, D({a: 1})), -1, p),
                p,
            )
            out = {base + k: c for k, c in v.items()}
            if out:
                key = (0 * dA + a, 0 * dA + b)
                prev = bracket.setdefault(key, {})
                for t, c in out.items():
                    prev[t] = (prev.get(t, 0) + c) % p
    L = LieAlgebra(
        p, cur.labels, bracket, grading=cur.grading, toral=cur.toral,
        name=name or "L(%s,%s)" % (A.name, D.name),
        meta={"kind": "deformed", "A": A, "D": D, "dims": (W.dim, dA)},
        filtration=True, check=False,
    )
    L.check_jacobi()
    return L


class LinearMap:
    """Linear map between Lie algebras, by sparse columns."""

    def __init__(self, source, target, cols):
        self.source = source
        self.target = target
        self.cols = {j: dict(v) for j, v in cols.items() if v}

    def __call__(self, vec):
        out = {}
        p = self.target.p
        for j, c in vec.items():
            for k, v in self.cols.get(j, {}).items():
                y = (out.get(k, 0) + c * v) % p
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out


def verify_morphism(f):
    """Check that f is a bijective Lie algebra morphism; returns
    (ok, witness) where witness names the first failing pair."""
    L, M = f.source, f.target
    if L.dim != M.dim:
        return False, ("dim", L.dim, M.dim)
    m = SparseFpMatrix(L.dim, L.p)
    rows = defaultdict(dict)
    for j, col in f.cols.items():
        for k, v in col.items():
            rows[k][j] = v
    for r in rows.values():
        m.add_row(r)
    if m.rank != L.dim:
        return False, ("rank", m.rank)
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = f(L.bracket_pair(i, j))
            rhs = M.bracket_vec(f({i: 1}), f({j: 1}))
            if lhs != rhs:
                return False, (L.labels[i], L.labels[j], lhs, rhs)
    return True, None


def kuznetsov_map(n, p, A=None):
    """The degree-preserving linear identification of W1(n) with the
    deformed algebra L(O1(n-1), d): e_s maps to e_i (x) x^k under the
    unique decomposition s = pk + i with -1 <= i <= p - 2.  With A given,
    the same identification tensored by A maps W1(n) (x) A onto
    L(O1(n-1) (x) A, d (x) 1)."""
    check_prime(p)
    if n < 2:
        raise ValueError("the identification needs n >= 2")
    B = make_divided_powers(n - 1, p)
    W = make_w1(n, p)
    if A is None:
        src = W
        coeff = partial_derivation(B)
        tgt = make_deformed(B, coeff)
        dA = 1
        amb = B.dim

        def pair_index(i, k, a):
            return (i + 1) * amb + k
    else:
        src = current_algebra(W, A, check=False)
        BA = tensor_product(B, A)
        coeff = tensor_derivation(BA, partial_derivation(B), "left")
        tgt = make_deformed(BA, coeff)
        dA = A.dim
        amb = BA.dim

        def pair_index(i, k, a):
            return (i + 1) * amb + (k * dA + a)
    cols = {}
    for s in range(-1, p ** n - 1):
        k = (s + 1) // p
        i = s - p * k
        for a in range(dA):
            cols[(s + 1) * dA + a] = {pair_index(i, k, a): 1}
    return LinearMap(src, tgt, cols)


def root_decomposition(L, t=None):
    """Partition of the basis by weight under ad of the toral element."""
    if t is None:
        t = L.toral
    if t is None:
        raise ValueError("%s has no toral element" % L.name)
    out = defaultdict(list)
    for k in range(L.dim):
        v = L.bracket_pair(t, k)
        extra = {m: c for m, c in v.items() if m != k}
        if extra:
            raise ValueError("ad(%s) is not diagonal" % L.labels[t])
        out[v.get(k, 0)].append(k)
    return dict(out)


def center(L):
    """Basis of the center: vectors commuting with every basis element."""
    m = SparseFpMatrix(L.dim, L.p)
    for j in range(L.dim):
        rows = defaultdict(dict)
        for i in range(L.dim):
            for k, c in L.bracket_pair(i, j).items():
                rows[k][i] = c
        for r in rows.values():
            m.add_row(r)
    return m.kernel_basis()


def _span_of(L, vecs):
    e = Echelon(L.p)
    basis = []
    for v in vecs:
        if e.add(dict(v)):
            basis.append(dict(v))
    return e, basis


def derived_series(L, S=None):
    """Dimensions of the derived series of the span of S (the whole
    algebra when S is None), until stable."""
    if S is None:
        S = [{i: 1} for i in range(L.dim)]
    _, basis = _span_of(L, S)
    dims = [len(basis)]
    while True:
        nxt = []
        e = Echelon(L.p)
        for x in range(len(basis)):
            for y in range(x + 1, len(basis)):
                v = L.bracket_vec(basis[x], basis[y])
                if v and e.add(v):
                    nxt.append(v)
        dims.append(len(nxt))
        if len(nxt) in (0, dims[-2]):
            break
        basis = nxt
    return dims


def is_solvable(L, S=None):
    dims = derived_series(L, S)
    return dims[-1] == 0


def _ideal_echelon(L, vecs):
    e = Echelon(L.p)
    work = []
    for v in vecs:
        r = e.reduce(dict(v))
        if r and e.add(dict(r)):
            work.append(r)
    while work:
        v = work.pop()
        for j in range(L.dim):
            w = L.bracket_vec({j: 1}, v)
            if w:
                r = e.reduce(w)
                if r and e.add(dict(r)):
                    work.append(r)
    return e


def _echelon_rows(e):
    rows = []
    for piv, tail in sorted(e.pivots.items()):
        row = dict(tail)
        row[piv] = 1
        rows.append(row)
    return rows


def ideal_generated_by(L, vecs):
    """Basis (echelon rows) of the smallest ideal containing the given
    vectors, by saturating under brackets with all basis elements."""
    return _echelon_rows(_ideal_echelon(L, vecs))


def find_proper_ideal(L, trials=20, seed=0):
    """Look for a proper nonzero ideal: first the ideal generated by each
    basis vector (complete for ideals generated by weight vectors when the
    basis is weight-homogeneous), then ideals of seeded random vectors.
    Returns {"generator", "dim", "basis"} or None; a returned ideal is
    always sound, while None is only "none found"."""
    candidates = [{i: 1} for i in range(L.dim)]
    rng = random.Random(seed)
    for _ in range(trials):
        v = {i: rng.randrange(L.p) for i in range(L.dim)}
        v = {i: c for i, c in v.items() if c}
        if v:
            candidates.append(v)
    for v in candidates:
        e = _ideal_echelon(L, [v])
        if 0 < e.rank < L.dim:
            return {"generator": v, "dim": e.rank,
                    "basis": _echelon_rows(e)}
    return None
