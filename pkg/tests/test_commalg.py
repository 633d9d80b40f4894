"""Divided powers vs reduced polynomials, derivations, and the
Hochschild/Harrison layer: frozen dimensions, the basic symmetric
cocycles, and the digit-wise reading that the literal binomial
coefficient fails."""

import pytest

from modlie.arith import binom
from modlie.commalg import (
    Derivation,
    SymmetricBilinearMap,
    basic_harrison_cocycle,
    d_invariants,
    der_coinvariants,
    der_invariants,
    derivation_space,
    divided_to_reduced_iso,
    dx_derivation,
    harrison_h2,
    harrison_h2_d_invariants,
    hochschild_delta,
    hochschild_hn_dim,
    is_harrison_cocycle,
    make_divided_powers,
    make_reduced_poly,
    make_scalars,
    mult_operator,
    partial_derivation,
    partial_power_derivation,
    scale_derivation,
    solve_delta1,
    star_action,
    tensor_derivation,
    tensor_product,
    zero_derivation,
)
from modlie.linalg import vec_scale

P = 5


def test_divided_powers_products():
    A = make_divided_powers(1, P)
    assert A.dim == 5
    assert A.mul({1: 1}, {1: 1}) == {2: 2}        # binom(2,1) = 2
    assert A.mul({1: 1}, {2: 1}) == {3: 3}        # binom(3,2) = 3
    assert A.mul({2: 1}, {2: 1}) == {4: 1}        # binom(4,2) = 6 = 1
    assert A.mul({2: 1}, {3: 1}) == {}            # degree 5 truncates
    assert A.mul(A.unit_vec, {3: 1}) == {3: 1}
    B = make_divided_powers(2, P)
    assert B.dim == 25
    assert B.mul({5: 1}, {5: 1}) == {10: 2}       # binom(10,5) = 252 = 2
    assert B.mul({1: 1}, {4: 1}) == {}            # binom(5,4) = 5 = 0
    assert B.mul({5: 1}, {4: 1}) == {9: 1}        # binom(9,4) = 126 = 1


def test_reduced_poly_products():
    A = make_reduced_poly(2, P)
    assert A.dim == 25
    exps = A.meta["exps"]
    ix = {e: i for i, e in enumerate(exps)}
    x1, x2 = ix[(1, 0)], ix[(0, 1)]
    assert A.mul({x1: 1}, {x2: 1}) == {ix[(1, 1)]: 1}
    assert A.mul({ix[(4, 0)]: 1}, {x1: 1}) == {}  # x1^5 = 0
    assert A.mul({ix[(4, 3)]: 1}, {ix[(0, 1)]: 1}) == {ix[(4, 4)]: 1}


def test_divided_reduced_identification():
    # multiplicative bijection O_n -> O1(n); checked by the constructor,
    # frozen here on a couple of columns
    for n in (1, 2):
        f = divided_to_reduced_iso(n, P)
        assert f.is_bijective()
        ok, _ = f.is_multiplicative()
        assert ok
    f = divided_to_reduced_iso(2, P)
    exps = f.source.meta["exps"]
    ix = {e: i for i, e in enumerate(exps)}
    # x1^2 -> 2! x^2, x1^3 x2 -> 3! x^{3 + 5}
    assert f({ix[(2, 0)]: 1}) == {2: 2}
    assert f({ix[(3, 1)]: 1}) == {8: 1}  # 3! = 6 = 1 mod 5


def test_derivation_guard_and_shift():
    A = make_divided_powers(1, P)
    d = partial_derivation(A)
    assert d({3: 1}) == {2: 1}
    assert d(A.unit_vec) == {}
    with pytest.raises(ValueError):
        Derivation(A, {1: {0: 1}})  # truncated shift breaks Leibniz
    B = make_divided_powers(2, P)
    d5 = partial_power_derivation(B, 1)
    assert d5({7: 1}) == {2: 1}
    assert d5({3: 1}) == {}
    # [d, d^(p)] = 0
    assert partial_derivation(B).commutator(d5).is_zero()


def test_derivation_space_dimensions():
    A = make_divided_powers(1, P)
    ders = derivation_space(A)
    assert len(ders) == 5
    # u * d for u in a basis of A spans the same space
    d = partial_derivation(A)
    from modlie.linalg import Echelon
    e = Echelon(P)
    for i in range(A.dim):
        assert e.add(scale_derivation(d, {i: 1}).flatten())
    for E in ders:
        assert not e.add(E.flatten())


def test_invariants_of_the_shift():
    A = make_divided_powers(1, P)
    d = partial_derivation(A)
    # constants of d: only the unit line
    assert len(d_invariants(A, d)) == 1
    # centralizer of d inside Der(A): spanned by d itself
    cent = der_invariants(A, d)
    assert len(cent) == 1
    dim, reps = der_coinvariants(A, d)
    assert dim == 1
    assert len(reps) == 1
    # at n = 2 the centralizer picks up the divided p-th power of the shift
    B = make_divided_powers(2, P)
    dB = partial_derivation(B)
    assert len(derivation_space(B)) == 50  # n p^n
    assert len(d_invariants(B, dB)) == 1   # constants only: d is onto x^<top
    assert len(der_invariants(B, dB)) == 2
    assert der_coinvariants(B, dB)[0] == 2


def test_hochschild_delta_degree_one():
    A = make_divided_powers(1, P)
    u = {2: 3}
    dM = hochschild_delta((A, mult_operator(A, u)))
    # d(mult by u)(a, b) = u a b
    for i in range(A.dim):
        for j in range(A.dim):
            assert dM(i, j) == A.mul(A.mul({i: 1}, {j: 1}), u)
    # derivations are 1-cocycles
    assert hochschild_delta(partial_derivation(A)).is_zero()


def test_hochschild_delta_degree_two_on_coboundaries():
    A = make_divided_powers(1, P)
    G = mult_operator(A, {1: 1, 3: 2})
    F = hochschild_delta((A, G))
    assert is_harrison_cocycle(F)
    assert all(v == 0 or not v for v in hochschild_delta(F).values())
    H = solve_delta1(A, F)
    assert H is not None
    assert hochschild_delta((A, H)).values == F.values


def test_hochschild_dimensions():
    A = make_divided_powers(1, P)
    assert hochschild_hn_dim(A, 0) == 5
    assert hochschild_hn_dim(A, 1) == 5
    assert hochschild_hn_dim(A, 2) == 5


@pytest.mark.slow
def test_hochschild_h2_of_reduced_rank_two():
    B = make_reduced_poly(2, P)
    assert hochschild_hn_dim(B, 2, budget=10 ** 9) == 75


def test_harrison_dimensions():
    # dim Har^2(O_m, O_m) = m p^m
    assert harrison_h2(make_divided_powers(1, P))[0] == 5
    assert harrison_h2(make_reduced_poly(1, P))[0] == 5
    assert harrison_h2(make_reduced_poly(2, P))[0] == 50
    dim, reps = harrison_h2(make_divided_powers(1, P))
    for F in reps:
        assert is_harrison_cocycle(F)


@pytest.mark.slow
def test_harrison_dimension_of_divided_rank_two():
    assert harrison_h2(make_divided_powers(2, P))[0] == 50


@pytest.mark.slow
def test_harrison_kuenneth_on_a_tensor_square():
    # O1 (x) O1 is isomorphic to O1(2) as an algebra up to regrading;
    # its symmetric H^2 has the same dimension m p^m with m = 2
    T = tensor_product(make_divided_powers(1, P), make_divided_powers(1, P))
    assert harrison_h2(T)[0] == 50


def test_basic_cocycles_reduced_values():
    F = basic_harrison_cocycle(1, P, 1, "reduced")
    assert F(3, 2) == {0: 1}   # x^3 * x^2 -> x^{5-5}
    assert F(1, 2) == {}       # no overflow
    assert F(4, 4) == {3: 1}
    assert is_harrison_cocycle(F)
    G = basic_harrison_cocycle(2, P, 2, "reduced")
    exps = G.A.meta["exps"]
    ix = {e: i for i, e in enumerate(exps)}
    assert G(ix[(0, 3)], ix[(1, 2)]) == {ix[(1, 0)]: 1}
    assert G(ix[(3, 0)], ix[(4, 0)]) == {}  # overflow in the wrong slot


def test_basic_cocycles_divided_values():
    F = basic_harrison_cocycle(1, P, 1, "divided")
    assert F(3, 2) == {0: 2}   # binom(5,2)/5 = 2
    assert F(1, 2) == {}
    assert is_harrison_cocycle(F)
    for m, i in ((2, 1), (2, 2)):
        assert is_harrison_cocycle(basic_harrison_cocycle(m, P, i, "divided"))


def test_literal_binomial_reading_is_not_a_cocycle():
    # reading binom(a+b, b)/p as one big integer binomial on the digit-i
    # overflow support fails the cocycle identity at m = 2
    A = make_divided_powers(2, P)
    vals = {}
    for a in range(A.dim):
        for b in range(a, A.dim):
            if a % P + b % P >= P:  # digit-1 overflow
                c = binom(a + b, b)
                assert c % P == 0
                c = (c // P) % P
                e = a + b - P
                if c and 0 <= e < A.dim:
                    vals[(a, b)] = {e: c}
    F = SymmetricBilinearMap(A, vals)
    assert not is_harrison_cocycle(F)
    bad = hochschild_delta(F)
    assert bad[(5, 4, 4)] == {8: 1}  # the smallest witness


def test_divided_cocycles_are_minus_the_transported_reduced_ones():
    for m in (1, 2):
        f = divided_to_reduced_iso(m, P)
        for i in range(1, m + 1):
            Fred = basic_harrison_cocycle(m, P, i, "reduced", A=f.source)
            Fdiv = basic_harrison_cocycle(m, P, i, "divided", A=f.target)
            for a in range(f.source.dim):
                for b in range(a, f.source.dim):
                    lhs = Fdiv.eval_vec(f({a: 1}), f({b: 1}))
                    rhs = vec_scale(f(Fred(a, b)), -1, P)
                    assert lhs == rhs


def test_star_action_on_basic_cocycles():
    # the shift kills F_m literally, and every F_i up to a coboundary
    literal = []
    classwise = []
    for m, i in ((1, 1), (2, 1), (2, 2)):
        A = make_divided_powers(m, P)
        d = partial_derivation(A)
        F = basic_harrison_cocycle(m, P, i, "divided", A=A)
        s = star_action(d, F)
        literal.append(s.is_zero())
        classwise.append(solve_delta1(A, s) is not None)
    assert literal == [True, False, True]
    assert classwise == [True, True, True]


def test_star_action_of_coboundaries_is_a_coboundary():
    A = make_divided_powers(1, P)
    d = partial_derivation(A)
    F = hochschild_delta((A, mult_operator(A, {2: 1})))
    s = star_action(d, F)
    assert solve_delta1(A, s) is not None


def test_invariant_harrison_classes_carry_potentials():
    for m in (1, 2):
        A = make_divided_powers(m, P)
        d = partial_derivation(A)
        count, pairs = harrison_h2_d_invariants(A, d)
        assert count == m
        assert len(pairs) == m
        for F, H in pairs:
            assert is_harrison_cocycle(F)
            got = hochschild_delta((A, H))
            assert got.values == star_action(d, F).values


def test_tensor_derivations_commute_across_sides():
    A = make_divided_powers(1, P)
    T = tensor_product(A, A)
    dl = tensor_derivation(T, partial_derivation(A), "left")
    dr = tensor_derivation(T, partial_derivation(A), "right")
    assert dl.commutator(dr).is_zero()
    # (d (x) 1)(x^1 @ x^2) = x^0 @ x^2
    assert dl({1 * A.dim + 2: 1}) == {0 * A.dim + 2: 1}
    assert dr({1 * A.dim + 2: 1}) == {1 * A.dim + 1: 1}


def test_scalars_and_zero_derivation():
    K = make_scalars(P)
    assert K.dim == 1
    assert K.mul({0: 2}, {0: 3}) == {0: 1}
    A = make_divided_powers(1, P)
    z = zero_derivation(A)
    assert z.is_zero()
    assert len(derivation_space(K)) == 0


def test_dx_derivations_on_reduced_ring():
    B = make_reduced_poly(2, P)
    d1 = dx_derivation(B, 1)
    d2 = dx_derivation(B, 2)
    exps = B.meta["exps"]
    ix = {e: i for i, e in enumerate(exps)}
    assert d1({ix[(3, 1)]: 1}) == {ix[(2, 1)]: 3}
    assert d2({ix[(3, 1)]: 1}) == {ix[(3, 0)]: 1}
    assert d1.commutator(d2).is_zero()


def test_algebra_json_round_trip():
    from modlie.commalg import CommAlgebra
    A = make_divided_powers(1, P)
    doc = A.to_json()
    B = CommAlgebra.from_json(doc)
    assert B.dim == A.dim
    assert B.hash_key() == A.hash_key()
    for i in range(A.dim):
        for j in range(A.dim):
            assert B.product(i, j) == A.product(i, j)
