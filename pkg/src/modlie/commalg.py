"""Finite-dimensional commutative associative unital algebras over F_p.

Covers the divided-power algebras O1(n) (basis x^i, i < p^n, with
x^i x^j = binom(i+j, j) x^{i+j} truncated at p^n), the reduced polynomial
rings O_m = K[x_1..x_m]/(x_i^p), scalar ground fields, tensor products,
derivations and their invariants/coinvariants, and Hochschild/Harrison
cohomology computed exactly through sparse ranks of the bar complex.

Every structure-constant table is monomial-sparse: a product of two basis
elements has at most one nonzero term.  Multidegrees are carried along so
bar-complex computations decompose into independent blocks (the bar
differential preserves the multidegree shift of a cochain), which is what
keeps the dimension-25 computations fast.
"""

import hashlib
import json
from collections import defaultdict

from .arith import binom, binom_mod_p, check_prime
from .linalg import Echelon, SparseFpMatrix, solve_sparse, vec_add, vec_scale

__all__ = [
    "CommAlgebra",
    "Derivation",
    "SymmetricBilinearMap",
    "AlgebraMap",
    "make_divided_powers",
    "make_reduced_poly",
    "make_scalars",
    "tensor_product",
    "divided_to_reduced_iso",
    "partial_derivation",
    "partial_power_derivation",
    "dx_derivation",
    "tensor_derivation",
    "mult_operator",
    "scale_derivation",
    "zero_derivation",
    "derivation_space",
    "d_invariants",
    "der_invariants",
    "der_coinvariants",
    "hochschild_delta",
    "star_action",
    "is_harrison_cocycle",
    "solve_delta1",
    "basic_harrison_cocycle",
    "harrison_h2",
    "harrison_h2_d_invariants",
    "hochschild_hn_dim",
]


class CommAlgebra:
    """Commutative associative unital algebra given by structure constants.

    mult is keyed by (i, j) with i <= j; each value is a sparse target
    vector {k: c}.  degrees, when present, give a multidegree tuple per
    basis element that the product adds (used only for block decomposition
    of cohomology computations; correctness never depends on it).
    """

    def __init__(self, p, labels, mult, unit, degrees=None, name="algebra", meta=None):
        check_prime(p)
        self.p = p
        self.labels = list(labels)
        self.unit = unit
        self.name = name
        self.meta = meta or {}
        self.degrees = list(degrees) if degrees is not None else None
        self.mult = {}
        for (i, j), vec in mult.items():
            if i > j:
                i, j = j, i
            vec = {k: v % p for k, v in vec.items() if v % p}
            if vec:
                self.mult[(i, j)] = vec
        self._validate()
        self._divisors = None

    @property
    def dim(self):
        return len(self.labels)

    def product(self, i, j):
        if i > j:
            i, j = j, i
        return self.mult.get((i, j), {})

    def mul(self, u, v):
        out = {}
        p = self.p
        for i, a in u.items():
            for j, b in v.items():
                c = a * b
                for k, w in self.product(i, j).items():
                    y = (out.get(k, 0) + c * w) % p
                    if y:
                        out[k] = y
                    else:
                        out.pop(k, None)
        return out

    def basis_vec(self, i):
        return {i: 1}

    @property
    def unit_vec(self):
        return {self.unit: 1}

    def divisors(self, m):
        """All ordered pairs (u, v, c) with b_u * b_v = c * b_m + ..."""
        if self._divisors is None:
            table = defaultdict(list)
            for (i, j), vec in self.mult.items():
                for k, c in vec.items():
                    table[k].append((i, j, c))
                    if i != j:
                        table[k].append((j, i, c))
            self._divisors = dict(table)
        return self._divisors.get(m, ())

    def shift(self, tgt, srcs):
        """Multidegree of target minus the sum over source indices; the
        block key for bar-complex slicing.  Collapses to 0 without degrees."""
        if self.degrees is None:
            return 0
        d = list(self.degrees[tgt])
        for s in srcs:
            ds = self.degrees[s]
            for a in range(len(d)):
                d[a] -= ds[a]
        return tuple(d)

    def _validate(self):
        n, p = self.dim, self.p
        if not (0 <= self.unit < n):
            raise ValueError("unit index %r out of range" % (self.unit,))
        for j in range(n):
            got = self.product(self.unit, j)
            if got != {j: 1}:
                raise ValueError(
                    "unit law fails: 1 * %s = %r" % (self.labels[j], got)
                )
        for i in range(n):
            for j in range(n):
                ij = self.product(i, j)
                for k in range(n):
                    left = self.mul(ij, {k: 1})
                    right = self.mul({i: 1}, self.product(j, k))
                    if left != right:
                        raise ValueError(
                            "associativity fails on (%s, %s, %s)"
                            % (self.labels[i], self.labels[j], self.labels[k])
                        )
        if self.degrees is not None:
            for (i, j), vec in self.mult.items():
                for k in vec:
                    if self.shift(k, (i, j)) != self.shift(self.unit, (self.unit, self.unit)):
                        raise ValueError(
                            "degrees are not additive on %s * %s"
                            % (self.labels[i], self.labels[j])
                        )

    def to_json(self):
        quads = []
        for (i, j), vec in sorted(self.mult.items()):
            for k, v in sorted(vec.items()):
                quads.append([i, j, k, v])
        return {
            "p": self.p,
            "dim": self.dim,
            "basis": self.labels,
            "unit": self.unit,
            "mult": quads,
        }

    @classmethod
    def from_json(cls, doc, name="imported"):
        try:
            p = doc["p"]
            labels = doc["basis"]
            unit = doc["unit"]
            quads = doc["mult"]
        except (KeyError, TypeError) as exc:
            raise ValueError("algebra document missing field: %s" % exc)
        mult = defaultdict(dict)
        for entry in quads:
            if len(entry) != 4:
                raise ValueError("bad mult entry %r (need [i, j, k, value])" % (entry,))
            i, j, k, v = entry
            key = (min(i, j), max(i, j))
            prev = mult[key].get(k)
            if prev is not None and prev != v % p:
                raise ValueError("conflicting mult entries for %r" % (entry,))
            mult[key][k] = v % p
        return cls(p, labels, dict(mult), unit, name=name)

    def hash_key(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def __repr__(self):
        return "<CommAlgebra %s dim=%d p=%d>" % (self.name, self.dim, self.p)


def make_divided_powers(n, p):
    """O1(n): basis x^0..x^{p^n - 1}, x^i x^j = binom(i+j, j) x^{i+j},
    truncated to zero once i + j reaches p^n."""
    check_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    d = p ** n
    mult = {}
    for i in range(d):
        for j in range(i, d):
            if i + j < d:
                c = binom_mod_p(i + j, j, p)
                if c:
                    mult[(i, j)] = {i + j: c}
    return CommAlgebra(
        p,
        ["x^%d" % i for i in range(d)],
        mult,
        unit=0,
        degrees=[(i,) for i in range(d)],
        name="O1(%d)" % n,
        meta={"kind": "divided", "n": n},
    )


def _reduced_label(alpha):
    parts = []
    for a, e in enumerate(alpha):
        if e == 1:
            parts.append("x%d" % (a + 1))
        elif e > 1:
            parts.append("x%d^%d" % (a + 1, e))
    return "*".join(parts) if parts else "1"


def make_reduced_poly(m, p):
    """O_m = K[x_1..x_m]/(x_1^p .. x_m^p), monomial basis x^alpha with
    exponents 0 <= alpha_i < p."""
    check_prime(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    exps = [()]
    for _ in range(m):
        exps = [e + (a,) for e in exps for a in range(p)]
    index = {e: i for i, e in enumerate(exps)}
    mult = {}
    for i, a in enumerate(exps):
        for j in range(i, len(exps)):
            b = exps[j]
            s = tuple(x + y for x, y in zip(a, b))
            if all(x < p for x in s):
                mult[(i, j)] = {index[s]: 1}
    return CommAlgebra(
        p,
        [_reduced_label(e) for e in exps],
        mult,
        unit=0,
        degrees=exps,
        name="O_%d" % m,
        meta={"kind": "reduced", "m": m, "exps": exps},
    )


def make_scalars(p):
    """The ground field as a one-dimensional algebra."""
    return CommAlgebra(
        p, ["1"], {(0, 0): {0: 1}}, unit=0, degrees=[()], name="K",
        meta={"kind": "scalars"},
    )


def tensor_product(A, B):
    """A (x) B with basis pairs ordered as i_A * dim(B) + i_B and
    componentwise multiplication; multidegrees concatenate."""
    if A.p != B.p:
        raise ValueError("tensor factors live over different primes")
    dB = B.dim
    dim = A.dim * dB
    labels = [
        "%s@%s" % (A.labels[i], B.labels[j]) for i in range(A.dim) for j in range(dB)
    ]
    degrees = None
    if A.degrees is not None and B.degrees is not None:
        degrees = [A.degrees[i] + B.degrees[j] for i in range(A.dim) for j in range(dB)]
    mult = {}
    for x in range(dim):
        ia, ib = divmod(x, dB)
        for y in range(x, dim):
            ja, jb = divmod(y, dB)
            va = A.product(ia, ja)
            if not va:
                continue
            vb = B.product(ib, jb)
            if not vb:
                continue
            out = {}
            for ka, ca in va.items():
                for kb, cb in vb.items():
                    c = ca * cb % A.p
                    if c:
                        out[ka * dB + kb] = c
            if out:
                mult[(x, y)] = out
    return CommAlgebra(
        A.p,
        labels,
        mult,
        unit=A.unit * dB + B.unit,
        degrees=degrees,
        name="%s(x)%s" % (A.name, B.name),
        meta={"kind": "tensor", "dims": (A.dim, B.dim), "left": A, "right": B},
    )


class AlgebraMap:
    """Linear map between algebras, stored by sparse columns."""

    def __init__(self, source, target, cols):
        self.source = source
        self.target = target
        self.cols = {j: dict(v) for j, v in cols.items() if v}

    def __call__(self, vec):
        out = {}
        for j, c in vec.items():
            for k, v in self.cols.get(j, {}).items():
                y = (out.get(k, 0) + c * v) % self.target.p
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    def is_multiplicative(self):
        A, B = self.source, self.target
        for i in range(A.dim):
            for j in range(i, A.dim):
                lhs = self(A.product(i, j))
                rhs = B.mul(self({i: 1}), self({j: 1}))
                if lhs != rhs:
                    return False, (i, j)
        return True, None

    def is_bijective(self):
        m = SparseFpMatrix(self.source.dim, self.source.p)
        rows = defaultdict(dict)
        for j, col in self.cols.items():
            for k, v in col.items():
                rows[k][j] = v
        for r in rows.values():
            m.add_row(r)
        return self.source.dim == self.target.dim and m.rank == self.source.dim


def divided_to_reduced_iso(n, p):
    """The algebra isomorphism O_n -> O1(n) sending the reduced monomial
    x^alpha to (prod_i alpha_i!) x^{sum_i alpha_i p^{i-1}}; verified
    multiplicative and bijective before being returned."""
    Om = make_reduced_poly(n, p)
    O1 = make_divided_powers(n, p)
    cols = {}
    for idx, alpha in enumerate(Om.meta["exps"]):
        c = 1
        e = 0
        for a, ai in enumerate(alpha):
            for t in range(2, ai + 1):
                c = c * t % p
            e += ai * p ** a
        cols[idx] = {e: c}
    f = AlgebraMap(Om, O1, cols)
    ok, pair = f.is_multiplicative()
    if not ok or not f.is_bijective():
        raise AssertionError("divided/reduced identification failed at %r" % (pair,))
    return f


class Derivation:
    """Linear operator on a CommAlgebra satisfying the Leibniz rule,
    stored by sparse columns (image of each basis element)."""

    def __init__(self, A, cols, name="D", check=True):
        self.A = A
        self.p = A.p
        self.cols = {
            j: {k: v % A.p for k, v in col.items() if v % A.p}
            for j, col in cols.items()
        }
        self.cols = {j: col for j, col in self.cols.items() if col}
        self.name = name
        if check:
            bad = self._leibniz_failure()
            if bad is not None:
                raise ValueError(
                    "%s is not a derivation: Leibniz fails on (%s, %s)"
                    % (name, A.labels[bad[0]], A.labels[bad[1]])
                )

    def _leibniz_failure(self):
        A = self.A
        for i in range(A.dim):
            for j in range(i, A.dim):
                lhs = self(A.product(i, j))
                rhs = vec_add(
                    A.mul(self({i: 1}), {j: 1}),
                    A.mul({i: 1}, self({j: 1})),
                    A.p,
                )
                if lhs != rhs:
                    return (i, j)
        return None

    def __call__(self, vec):
        out = {}
        for j, c in vec.items():
            for k, v in self.cols.get(j, {}).items():
                y = (out.get(k, 0) + c * v) % self.p
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    @property
    def matrix(self):
        n = self.A.dim
        return [
            [self.cols.get(j, {}).get(i, 0) for j in range(n)] for i in range(n)
        ]

    def flatten(self):
        return {
            j * self.A.dim + k: v for j, col in self.cols.items() for k, v in col.items()
        }

    def is_zero(self):
        return not self.cols

    def add(self, other, scale=1):
        cols = defaultdict(dict)
        for D, s in ((self, 1), (other, scale)):
            for j, col in D.cols.items():
                for k, v in col.items():
                    cols[j][k] = (cols[j].get(k, 0) + s * v) % self.p
        return Derivation(self.A, dict(cols), name="%s+%s" % (self.name, other.name))

    def commutator(self, other):
        cols = {}
        for j in range(self.A.dim):
            v = vec_add(
                self(other({j: 1})), vec_scale(other(self({j: 1})), -1, self.p), self.p
            )
            if v:
                cols[j] = v
        return Derivation(
            self.A, cols, name="[%s,%s]" % (self.name, other.name)
        )

    def __repr__(self):
        return "<Derivation %s on %s>" % (self.name, self.A.name)


def partial_derivation(A):
    """The divided-power shift derivation: x^j -> x^{j-1}."""
    if A.meta.get("kind") != "divided":
        raise ValueError("partial_derivation needs a divided-power algebra")
    return Derivation(A, {j: {j - 1: 1} for j in range(1, A.dim)}, name="d")


def partial_power_derivation(A, k):
    """The p^k-th divided power of the shift: x^j -> x^{j - p^k}."""
    if A.meta.get("kind") != "divided":
        raise ValueError("partial_power_derivation needs a divided-power algebra")
    s = A.p ** k
    return Derivation(
        A, {j: {j - s: 1} for j in range(s, A.dim)}, name="d^(p^%d)" % k
    )


def dx_derivation(A, i):
    """d/dx_i on the reduced polynomial ring."""
    if A.meta.get("kind") != "reduced":
        raise ValueError("dx_derivation needs a reduced polynomial ring")
    exps = A.meta["exps"]
    index = {e: idx for idx, e in enumerate(exps)}
    cols = {}
    for idx, alpha in enumerate(exps):
        if alpha[i - 1]:
            down = list(alpha)
            down[i - 1] -= 1
            cols[idx] = {index[tuple(down)]: alpha[i - 1] % A.p}
    return Derivation(A, cols, name="d/dx%d" % i)


def mult_operator(A, u):
    """Right multiplication by the element u, as sparse columns."""
    return {
        j: col
        for j in range(A.dim)
        if (col := A.mul({j: 1}, u))
    }


def scale_derivation(D, u):
    """u * D for an algebra element u: still a derivation."""
    A = D.A
    cols = {}
    for j, col in D.cols.items():
        v = A.mul(col, u)
        if v:
            cols[j] = v
    return Derivation(A, cols, name="u*%s" % D.name)


def tensor_derivation(AB, D, side):
    """D (x) 1 or 1 (x) D on a tensor-product algebra."""
    if AB.meta.get("kind") != "tensor":
        raise ValueError("tensor_derivation needs a tensor-product algebra")
    dA, dB = AB.meta["dims"]
    cols = {}
    if side == "left":
        if D.A.dim != dA:
            raise ValueError("derivation does not act on the left factor")
        for x in range(dA * dB):
            ia, ib = divmod(x, dB)
            col = {k * dB + ib: v for k, v in D.cols.get(ia, {}).items()}
            if col:
                cols[x] = col
    elif side == "right":
        if D.A.dim != dB:
            raise ValueError("derivation does not act on the right factor")
        for x in range(dA * dB):
            ia, ib = divmod(x, dB)
            col = {ia * dB + k: v for k, v in D.cols.get(ib, {}).items()}
            if col:
                cols[x] = col
    else:
        raise ValueError("side must be 'left' or 'right'")
    return Derivation(AB, cols, name="%s(x)%s" % (D.name, side))


def zero_derivation(A):
    return Derivation(A, {}, name="0")


def derivation_space(A):
    """Basis of Der(A), as the kernel of the Leibniz system on matrix
    entries.  Unknown (src, tgt) gets column src * dim + tgt."""
    n, p = A.dim, A.p
    m = SparseFpMatrix(n * n, p)
    for i in range(n):
        for j in range(i, n):
            # D(b_i b_j) - b_i D(b_j) - b_j D(b_i) = 0, one row per target
            rows = defaultdict(dict)

            def bump(t, src, tgt, c):
                y = (rows[t].get(src * n + tgt, 0) + c) % p
                if y:
                    rows[t][src * n + tgt] = y
                else:
                    rows[t].pop(src * n + tgt, None)

            for k, c in A.product(i, j).items():
                for t in range(n):
                    bump(t, k, t, c)
            for s in range(n):
                for t, c in A.product(i, s).items():
                    bump(t, j, s, -c)
                for t, c in A.product(j, s).items():
                    bump(t, i, s, -c)
            for r in rows.values():
                if r:
                    m.add_row(r)
    ders = []
    for v in m.kernel_basis():
        cols = defaultdict(dict)
        for key, c in v.items():
            cols[key // n][key % n] = c
        ders.append(Derivation(A, dict(cols), name="E%d" % len(ders)))
    return ders


def d_invariants(A, D):
    """Basis of the kernel of D on A (the D-constants)."""
    n = A.dim
    m = SparseFpMatrix(n, A.p)
    rows = defaultdict(dict)
    for j, col in D.cols.items():
        for k, v in col.items():
            rows[k][j] = v
    for r in rows.values():
        m.add_row(r)
    return m.kernel_basis()


def der_invariants(A, D, ders=None):
    """Basis of the centralizer of D inside Der(A)."""
    if ders is None:
        ders = derivation_space(A)
    if not ders:
        return []
    coms = [D.commutator(E).flatten() for E in ders]
    rows = defaultdict(dict)
    for idx, v in enumerate(coms):
        for key, c in v.items():
            rows[key][idx] = c
    m = SparseFpMatrix(len(ders), A.p)
    for r in rows.values():
        m.add_row(r)
    out = []
    for combo in m.kernel_basis():
        E = zero_derivation(A)
        for idx, c in combo.items():
            E = E.add(ders[idx], scale=c)
        E.name = "Einv%d" % len(out)
        out.append(E)
    return out


def der_coinvariants(A, D, ders=None):
    """Dimension of Der(A)/[D, Der(A)] plus derivations representing a
    basis of the quotient."""
    if ders is None:
        ders = derivation_space(A)
    image = Echelon(A.p)
    for E in ders:
        image.add(D.commutator(E).flatten())
    reps = []
    span = Echelon(A.p)
    for piv, row in image.pivots.items():
        span.pivots[piv] = dict(row)
    for E in ders:
        if span.add(E.flatten()):
            reps.append(E)
    return len(ders) - image.rank, reps


class SymmetricBilinearMap:
    """Symmetric bilinear map A x A -> A, stored on pairs i <= j."""

    def __init__(self, A, values):
        self.A = A
        self.p = A.p
        self.values = {}
        for (i, j), vec in values.items():
            if i > j:
                i, j = j, i
            vec = {k: v % A.p for k, v in vec.items() if v % A.p}
            if vec:
                self.values[(i, j)] = vec

    def __call__(self, i, j):
        if i > j:
            i, j = j, i
        return self.values.get((i, j), {})

    def eval_vec(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                c = a * b % self.p
                for k, w in self(i, j).items():
                    y = (out.get(k, 0) + c * w) % self.p
                    if y:
                        out[k] = y
                    else:
                        out.pop(k, None)
        return out

    def is_zero(self):
        return not self.values

    def add(self, other, scale=1):
        vals = defaultdict(dict)
        for F, s in ((self, 1), (other, scale)):
            for key, vec in F.values.items():
                for k, v in vec.items():
                    vals[key][k] = (vals[key].get(k, 0) + s * v) % self.p
        return SymmetricBilinearMap(self.A, dict(vals))

    def scale(self, c):
        return SymmetricBilinearMap(
            self.A,
            {key: vec_scale(vec, c, self.p) for key, vec in self.values.items()},
        )

    def flatten(self):
        n = self.A.dim
        out = {}
        for (i, j), vec in self.values.items():
            base = (i * n + j) * n
            for k, v in vec.items():
                out[base + k] = v
        return out

    def to_json(self):
        return [
            [i, j, k, v]
            for (i, j), vec in sorted(self.values.items())
            for k, v in sorted(vec.items())
        ]

    @classmethod
    def from_json(cls, A, quads):
        vals = defaultdict(dict)
        for i, j, k, v in quads:
            vals[(min(i, j), max(i, j))][k] = v % A.p
        return cls(A, dict(vals))


def hochschild_delta(c):
    """The Hochschild coboundary of a degree-1 cochain (a linear operator,
    given as a Derivation-like object or raw sparse columns) or of a
    degree-2 symmetric cochain.

    Degree 1: dG(a, b) = a G(b) + b G(a) - G(ab), returned as a
    SymmetricBilinearMap (it is symmetric for any G).
    Degree 2: dF(a, b, c) = a F(b,c) - F(ab, c) + F(a, bc) - F(a,b) c,
    returned as a dict keyed by all index triples."""
    if isinstance(c, SymmetricBilinearMap):
        A, p = c.A, c.p
        out = {}
        for a in range(A.dim):
            for b in range(A.dim):
                for cc in range(A.dim):
                    v = _delta2_value(A, c, a, b, cc)
                    if v:
                        out[(a, b, cc)] = v
        return out
    if isinstance(c, Derivation):
        A, cols = c.A, c.cols
    else:
        A, cols = c  # (algebra, sparse columns) pair
    p = A.p
    vals = {}
    for i in range(A.dim):
        for j in range(i, A.dim):
            v = vec_add(
                A.mul({i: 1}, cols.get(j, {})),
                A.mul({j: 1}, cols.get(i, {})),
                p,
            )
            for k, cm in A.product(i, j).items():
                v = vec_add(v, vec_scale(cols.get(k, {}), -cm, p), p)
            if v:
                vals[(i, j)] = v
    return SymmetricBilinearMap(A, vals)


def _delta2_value(A, F, a, b, c):
    p = A.p
    v = A.mul({a: 1}, F(b, c))
    for m, cm in A.product(a, b).items():
        v = vec_add(v, vec_scale(F(m, c), -cm, p), p)
    for m, cm in A.product(b, c).items():
        v = vec_add(v, vec_scale(F(a, m), cm, p), p)
    v = vec_add(v, vec_scale(A.mul(F(a, b), {c: 1}), -1, p), p)
    return v


def is_harrison_cocycle(F):
    """Exact check that the symmetric 2-cochain F is a Hochschild cocycle.
    For symmetric F the coboundary satisfies dF(c,b,a) = -dF(a,b,c), so
    triples with first index < last index decide everything."""
    A = F.A
    for a in range(A.dim):
        for c in range(a + 1, A.dim):
            for b in range(A.dim):
                if _delta2_value(A, F, a, b, c):
                    return False
    return True


def star_action(D, F):
    """(D * F)(a, b) = F(D(a), b) + F(a, D(b)) - D(F(a, b)); the induced
    action of a derivation on symmetric 2-cochains."""
    A, p = F.A, F.p
    vals = {}
    for i in range(A.dim):
        for j in range(i, A.dim):
            v = vec_scale(D(F(i, j)), -1, p)
            for s, c in D.cols.get(i, {}).items():
                v = vec_add(v, vec_scale(F(s, j), c, p), p)
            for s, c in D.cols.get(j, {}).items():
                v = vec_add(v, vec_scale(F(i, s), c, p), p)
            if v:
                vals[(i, j)] = v
    return SymmetricBilinearMap(A, vals)


def basic_harrison_cocycle(m, p, i, variant, A=None):
    """The i-th basic Harrison 2-cocycle, 1 <= i <= m.

    reduced variant, on O_m:  F(x^alpha, x^beta) = x^{alpha+beta-p e_i}
    when alpha_i + beta_i >= p, else 0.
    divided variant, on O1(m): F(x^a, x^b) = (binom(a+b, b)/p) x^{a+b-p^i}
    when the i-th p-adic digits satisfy a_i + b_i >= p, else 0; the
    binomial is divisible by p exactly because of that digit overflow."""
    if not 1 <= i <= m:
        raise ValueError("cocycle index %d outside 1..%d" % (i, m))
    if variant == "reduced":
        if A is None:
            A = make_reduced_poly(m, p)
        exps = A.meta["exps"]
        index = {e: idx for idx, e in enumerate(exps)}
        vals = {}
        for ia, alpha in enumerate(exps):
            for ib in range(ia, len(exps)):
                beta = exps[ib]
                if alpha[i - 1] + beta[i - 1] >= p:
                    s = list(x + y for x, y in zip(alpha, beta))
                    s[i - 1] -= p
                    if all(x < p for x in s):
                        vals[(ia, ib)] = {index[tuple(s)]: 1}
        F = SymmetricBilinearMap(A, vals)
    elif variant == "divided":
        if A is None:
            A = make_divided_powers(m, p)
        d = A.dim
        vals = {}
        for a in range(d):
            for b in range(a, d):
                da = [(a // p ** t) % p for t in range(m)]
                db = [(b // p ** t) % p for t in range(m)]
                if da[i - 1] + db[i - 1] >= p:
                    # binom(a+b, b) read digit-wise: the product of the
                    # per-digit binomials, with the forced factor of p in
                    # the overflowing digit i divided out exactly.  A second
                    # overflowing digit makes the whole product 0 mod p,
                    # which matches the truncation of the target monomial.
                    c = 1
                    for t in range(m):
                        c *= binom(da[t] + db[t], db[t])
                    if c % p:
                        raise AssertionError(
                            "digit overflow without divisibility at (%d, %d)" % (a, b)
                        )
                    c = (c // p) % p
                    e = a + b - p ** i
                    if c and 0 <= e < d:
                        vals[(a, b)] = {e: c}
        F = SymmetricBilinearMap(A, vals)
    else:
        raise ValueError("variant must be 'reduced' or 'divided'")
    if not is_harrison_cocycle(F):
        raise AssertionError("basic cocycle %d failed the cocycle check" % i)
    return F


def _pair_key(n, i, j, t):
    if i > j:
        i, j = j, i
    return (i * n + j) * n + t


def _coboundary_vectors(A):
    """delta(G) over all elementary 1-cochains G = (src -> tgt), as sparse
    vectors on symmetric-pair coordinates."""
    n, p = A.dim, A.p
    out = []
    for src in range(n):
        for tgt in range(n):
            vec = defaultdict(int)
            # a G(b) + b G(a) terms: pairs containing src
            for other in range(n):
                for k, c in A.product(other, tgt).items():
                    vec[_pair_key(n, other, src, k)] += c
            # extra copy when both arguments hit src
            for k, c in A.product(src, tgt).items():
                vec[_pair_key(n, src, src, k)] += c
            # -G(ab) over pairs multiplying into src
            for (i, j), prod in A.mult.items():
                c = prod.get(src)
                if c:
                    vec[_pair_key(n, i, j, tgt)] -= c
            row = {k: v % p for k, v in vec.items() if v % p}
            out.append(((src, tgt), row))
    return out


def harrison_h2(A):
    """Dimension and representative basis of Har^2(A, A): symmetric
    Hochschild 2-cocycles modulo coboundaries of 1-cochains.  The cocycle
    system is solved blockwise per multidegree shift."""
    n, p = A.dim, A.p
    # unknown (pair (i<=j), target t), grouped into blocks by shift
    blocks = defaultdict(list)
    for i in range(n):
        for j in range(i, n):
            for t in range(n):
                blocks[A.shift(t, (i, j))].append((i, j, t))
    local = {}
    for key, unknowns in blocks.items():
        local[key] = {u: pos for pos, u in enumerate(unknowns)}

    rows_per_block = defaultdict(list)
    for a in range(n):
        for c in range(a + 1, n):
            for b in range(n):
                # a F(b,c) - F(ab,c) + F(a,bc) - F(a,b) c = 0; one scalar
                # row per output coordinate t.  In the outer terms the
                # unknown's own target s runs free of t.
                rows = defaultdict(dict)

                def bump(t, i, j, s, coeff):
                    if i > j:
                        i, j = j, i
                    k = (i, j, s)
                    y = (rows[t].get(k, 0) + coeff) % p
                    if y:
                        rows[t][k] = y
                    else:
                        rows[t].pop(k, None)

                for s in range(n):
                    for t, cm in A.product(a, s).items():
                        bump(t, b, c, s, cm)
                    for t, cm in A.product(c, s).items():
                        bump(t, a, b, s, -cm)
                for m_, cm in A.product(a, b).items():
                    for t in range(n):
                        bump(t, m_, c, t, -cm)
                for m_, cm in A.product(b, c).items():
                    for t in range(n):
                        bump(t, a, m_, t, cm)
                for t, row in rows.items():
                    row = {k: v % p for k, v in row.items() if v % p}
                    if not row:
                        continue
                    key = A.shift(t, (a, b, c))
                    loc = local[key]
                    rows_per_block[key].append({loc[k]: v for k, v in row.items()})

    dim_total = 0
    reps = []
    image_rows = defaultdict(list)
    for (src, tgt), vec in _coboundary_vectors(A):
        if vec:
            key = A.shift(tgt, (src,))
            image_rows[key].append(vec)

    for key, unknowns in blocks.items():
        m = SparseFpMatrix(len(unknowns), p)
        for r in rows_per_block.get(key, ()):
            m.add_row(r)
        kernel = m.kernel_basis()
        image = Echelon(p)
        for vec in image_rows.get(key, ()):
            # convert pair-key coordinates to local block coordinates
            locvec = {}
            for flat, v in vec.items():
                pair, t = divmod(flat, n)
                i, j = divmod(pair, n)
                locvec[local[key][(i, j, t)]] = v
            image.add(locvec)
        span = Echelon(p)
        for piv, row in image.pivots.items():
            span.pivots[piv] = dict(row)
        got = 0
        for v in kernel:
            if span.add(v):
                got += 1
                vals = defaultdict(dict)
                for pos, c in v.items():
                    i, j, t = unknowns[pos]
                    vals[(i, j)][t] = c
                reps.append(SymmetricBilinearMap(A, dict(vals)))
        dim_total += got
    return dim_total, reps


def _solve_combination(vectors, target, p):
    """Coefficients c with sum c_s vectors[s] = target, or None."""
    keys = set(target)
    for v in vectors:
        keys.update(v)
    eqs = []
    for k in keys:
        row = {s: v[k] for s, v in enumerate(vectors) if k in v}
        eqs.append((row, target.get(k, 0)))
    return solve_sparse(eqs, len(vectors), p)


def solve_delta1(A, target):
    """Solve dH = target for a 1-cochain H given a symmetric 2-cochain
    target; returns sparse columns or None when target is not a
    coboundary."""
    n, p = A.dim, A.p
    eqs = []
    cob = _coboundary_vectors(A)
    rows = defaultdict(dict)
    for idx, ((src, tgt), vec) in enumerate(cob):
        for k, v in vec.items():
            rows[k][src * n + tgt] = v
    tgt_flat = {}
    for (i, j), vec in target.values.items():
        for t, v in vec.items():
            tgt_flat[_pair_key(n, i, j, t)] = v
    keys = set(rows) | set(tgt_flat)
    for k in keys:
        eqs.append((rows.get(k, {}), tgt_flat.get(k, 0)))
    sol = solve_sparse(eqs, n * n, p)
    if sol is None:
        return None
    cols = defaultdict(dict)
    for flat, c in sol.items():
        cols[flat // n][flat % n] = c
    return dict(cols)


def harrison_h2_d_invariants(A, D):
    """The D-invariant part of Har^2(A, A): classes [F] killed by the star
    action of D, each returned with an endomorphism H solving dH = D * F.
    These (F, H) pairs are exactly the parameters of the lifted symmetric
    cocycle family."""
    p = A.p
    d2, reps = harrison_h2(A)
    if d2 == 0:
        return 0, []
    cob = Echelon(p)
    for _, vec in _coboundary_vectors(A):
        cob.add(vec)
    rhos = [cob.reduce(F.flatten()) for F in reps]
    action = []  # column r: coordinates of [D * F_r] in the class basis
    for F in reps:
        gamma = cob.reduce(star_action(D, F).flatten())
        coords = _solve_combination(rhos, gamma, p)
        if coords is None:
            raise AssertionError("star action left the cocycle class space")
        action.append(coords)
    m = SparseFpMatrix(len(reps), p)
    rows = defaultdict(dict)
    for r, coords in enumerate(action):
        for s, c in coords.items():
            rows[s][r] = c
    for row in rows.values():
        m.add_row(row)
    out = []
    for combo in m.kernel_basis():
        F = SymmetricBilinearMap(A, {})
        for r, c in combo.items():
            F = F.add(reps[r], scale=c)
        H = solve_delta1(A, star_action(D, F))
        if H is None:
            raise AssertionError("invariant class without a potential for D * F")
        out.append((F, H))
    return len(out), out


def hochschild_hn_dim(A, n, budget=2_000_000):
    """dim H^n(A, A) for 0 <= n <= 3 via the bar complex: the number of
    n-cochains minus the ranks of the outgoing and incoming differentials,
    computed blockwise per multidegree shift."""
    if not 0 <= n <= 3:
        raise ValueError("only degrees 0..3 are supported")
    if A.dim ** (n + 1) > budget:
        raise ValueError(
            "bar complex size %d exceeds budget %d" % (A.dim ** (n + 1), budget)
        )
    cochains = A.dim ** n * A.dim
    return cochains - _bar_rank(A, n) - (_bar_rank(A, n - 1) if n else 0)


def _bar_rank(A, k):
    """Rank of the bar differential C^k -> C^{k+1}, by pushing every
    elementary k-cochain through an echelon per multidegree block."""
    n, p = A.dim, A.p
    echelons = defaultdict(lambda: Echelon(p))
    rank = 0

    def coord(tup, t):
        key = 0
        for a in tup:
            key = key * n + a
        return key * n + t

    tuples = [()]
    for _ in range(k):
        tuples = [tu + (a,) for tu in tuples for a in range(n)]
    for tau in tuples:
        for s in range(n):
            vec = defaultdict(int)
            for z in range(n):
                for t, c in A.product(z, s).items():
                    vec[coord((z,) + tau, t)] += c
                if k:
                    sign = -1 if (k + 1) % 2 else 1
                    for t, c in A.product(s, z).items():
                        vec[coord(tau + (z,), t)] += sign * c
            if not k:
                # degree-0 cochains: d(u)(a) = a u - u a = 0, commutative
                for z in range(n):
                    for t, c in A.product(z, s).items():
                        vec[coord((z,), t)] -= c
            for pos in range(1, k + 1):
                m_ = tau[pos - 1]
                sign = -1 if pos % 2 else 1
                rest_l, rest_r = tau[: pos - 1], tau[pos:]
                for (u, v, c) in A.divisors(m_):
                    vec[coord(rest_l + (u, v) + rest_r, s)] += sign * c
            row = {kk: v % p for kk, v in vec.items() if v % p}
            if row:
                key = A.shift(s, tau)
                if echelons[key].add(row):
                    rank += 1
    return rank
