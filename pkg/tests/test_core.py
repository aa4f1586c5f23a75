from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from chernweil import linalg
from chernweil.clifford import CliffordAlgebra, ExteriorAlgebra
from chernweil.core import (Element, TensorAlgebra, derivation_extend, frac,
                            koszul_sign, symmetrize, symmetrize_naive)
from chernweil.symmetric import SymmetricAlgebra, exp_series

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def test_koszul_sign_identity():
    assert koszul_sign((0, 1, 2), [1, 1, 0]) == 1
    assert koszul_sign((0, 1, 2), [1, 1, 1]) == 1


def test_koszul_sign_transpositions():
    assert koszul_sign((1, 0), [1, 1]) == -1
    assert koszul_sign((1, 0), [1, 0]) == 1
    assert koszul_sign((1, 0), [0, 0]) == 1


@given(st.permutations(range(5)), st.lists(st.integers(0, 1), min_size=5, max_size=5))
def test_koszul_sign_matches_inversion_count(perm, parities):
    assert koszul_sign(tuple(perm), parities) == oracles.permutation_sign(perm, parities)


@given(st.permutations(range(4)), st.permutations(range(4)),
       st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_koszul_sign_is_a_cocycle(p, q, parities):
    # sign of applying q after p equals the product of the two signs
    composite = tuple(p[i] for i in q)
    moved = [parities[i] for i in p]
    assert koszul_sign(composite, parities) == \
        koszul_sign(tuple(p), parities) * koszul_sign(tuple(q), moved)


def test_linear_combinations():
    S = SymmetricAlgebra(2)
    x = S.gen(0) + S.gen(1).scale(3)
    assert not (x + x.scale(-1))
    half = x.scale(Fraction(1, 2))
    assert half.scale(2) == x
    y = S.gen(0) * S.gen(0)
    assert set((x + y).terms) == set(x.terms) | set(y.terms)


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        frac(0.5)
    assert frac("3/4") == Fraction(3, 4)


def test_algebra_mismatch_raises():
    with pytest.raises(ValueError):
        SymmetricAlgebra(2, label="a").gen(0) + SymmetricAlgebra(2, label="b").gen(0)


@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_symmetric_product_commutative(a, b):
    S = SymmetricAlgebra(3)
    x, y = S.linear(a) + S.one(), S.linear(b) * S.linear(a)
    assert x * y == y * x


def test_symmetrize_single_and_commuting():
    S = SymmetricAlgebra(2)
    a, b = S.gen(0), S.gen(1)
    assert symmetrize([a], [0], S.one()) == a
    assert symmetrize([a, b], [0, 0], S.one()) == a * b


def test_symmetrize_two_clifford_generators():
    B = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    cl = CliffordAlgebra(B)
    e, f = cl.gen(0), cl.gen(2)
    got = symmetrize([e, f], [1, 1], cl.one())
    assert got == e * f - cl.scalar(Fraction(1, 2))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_symmetrize_matches_naive_and_oracle(word):
    B = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    cl = CliffordAlgebra(B)
    factors = [cl.gen(i) for i in word]
    fast = symmetrize(factors, [1] * len(word), cl.one(), labels=list(word))
    assert fast == symmetrize_naive(factors, [1] * len(word), cl.one())
    assert fast.terms == oracles.clifford_symmetrize(word, B)


def test_symmetrize_cap():
    S = SymmetricAlgebra(1)
    with pytest.raises(ValueError):
        symmetrize([S.gen(0)] * 3, [0] * 3, S.one(), cap=2)


def test_symmetrize_mixed_parity_against_permutation_sum():
    # in a tensor product of a polynomial algebra and an exterior algebra
    S = SymmetricAlgebra(2)
    E = ExteriorAlgebra(2)
    T = TensorAlgebra(S, E)
    factors = [T.left(S.gen(0)), T.right(E.gen(0)), T.right(E.gen(1)), T.left(S.gen(1))]
    par = [0, 1, 1, 0]
    acc = T.zero()
    for perm in permutations(range(4)):
        term = T.one()
        for i in perm:
            term = term * factors[i]
        acc = acc + term.scale(oracles.permutation_sign(perm, par))
    assert symmetrize(factors, par, T.one()) == acc.scale(Fraction(1, 24))


def test_derivation_zero_and_euler():
    S = SymmetricAlgebra(3)
    zero = derivation_extend(S, lambda g: S.zero(), 0)
    euler = derivation_extend(S, lambda g: S.gen(g), 0)
    x = S.gen(0) * S.gen(1) * S.gen(1) + S.gen(2).scale(5) + S.one()
    assert not zero(x)
    for m, c in x.terms.items():
        assert euler(Element(S, {m: c})) == Element(S, {m: c}).scale(len(m))


def test_odd_derivation_sign():
    E = ExteriorAlgebra(2)
    D = derivation_extend(E, lambda g: E.one() if g == 0 else E.scalar(2), 1)
    # D(e0 e1) = D(e0) e1 - e0 D(e1)
    assert D(E.gen(0) * E.gen(1)) == E.gen(1) - E.gen(0).scale(2)


def test_tensor_sign_rule():
    E = ExteriorAlgebra(2)
    T = TensorAlgebra(E, E)
    a, b = T.right(E.gen(0)), T.left(E.gen(1))
    # (1 # x)(y # 1) = -(y # x) for odd x, y
    assert a * b == T.tensor(E.gen(1), E.gen(0)).scale(-1)
    assert b * a == T.tensor(E.gen(1), E.gen(0))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_linalg_against_sympy(M):
    M = [[Fraction(x) for x in r] for r in M]
    assert linalg.det(M) == oracles.det(M)
    assert linalg.rank(M) == oracles.rank(M)
    if oracles.det(M):
        assert linalg.inverse(M) == oracles.inverse(M)
        assert linalg.matmul(M, linalg.inverse(M)) == linalg.identity(3)
    else:
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(M)
    for v in linalg.nullspace(M, ncols=3):
        assert not any(linalg.matvec(M, v))
    assert len(linalg.nullspace(M, ncols=3)) == 3 - oracles.rank(M)


def test_solve():
    A = [[2, 1], [1, 3]]
    x = linalg.solve(A, [3, 5])
    assert linalg.matvec(linalg.as_matrix(A), x) == [3, 5]
    assert x == [Fraction(4, 5), Fraction(7, 5)]


def test_integer_input_stays_exact():
    assert isinstance(linalg.det([[1, 2], [3, 5]]), Fraction)
    inv = linalg.inverse([[1, 2], [3, 5]])
    assert all(isinstance(x, Fraction) for r in inv for x in r)
    assert linalg.inverse([[3]]) == [[Fraction(1, 3)]]


def test_exp_series_against_sympy():
    import sympy
    S = SymmetricAlgebra(1)
    x = S.gen(0)
    got = exp_series(S, x + x * x, 5)
    t = sympy.symbols("t")
    ref = sympy.Poly(sympy.series(sympy.exp(t + t ** 2), t, 0, 6).removeO(), t)
    for k in range(6):
        assert got.coefficient((0,) * k) == oracles.rat(ref.coeff_monomial(t ** k))
    with pytest.raises(ValueError):
        exp_series(S, S.one(), 3)


def test_symmetric_derivative_and_substitute():
    S = SymmetricAlgebra(2)
    x, y = S.gen(0), S.gen(1)
    p = x * x * y
    assert S.derivative(p, 0) == (x * y).scale(2)
    assert S.substitute(p, [x + y, y], S) == (x + y) * (x + y) * y
