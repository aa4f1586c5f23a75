from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernweil import liealg
from chernweil.clifford import clifford
from chernweil.core import Element
from chernweil.enveloping import casimir, casimir_polynomial, duflo_map, enveloping, sym_U
from chernweil.liealg import SubalgebraDecomposition, from_cubic
from chernweil.relative import (RelativePair, SymmetricPair, TriangularPair, _ncweil_monomials,
                                hc_diagram_checks, ideal_kill_check, isotropic_quotient,
                                p_is_abelian, relative_dirac_square_check,
                                rouviere_identity_check, rouviere_multiplicativity_check,
                                vogan_cocycle_check)


def _sl2_cartan():
    return RelativePair(liealg.get("sl2"), (1,))


def _fxh1_pair():
    return RelativePair(liealg.get("fxh1"), (0, 3))


# -- relative pairs -------------------------------------------------------------------

def test_pair_hypotheses():
    L = liealg.get("sl2")
    with pytest.raises(ValueError):
        RelativePair(L, (0, 1))   # p = span(f) is not h-, e-invariant
    with pytest.raises(ValueError):
        RelativePair(L, (0,))     # B vanishes on span(e)
    with pytest.raises(ValueError):
        RelativePair(liealg.lie_algebra(2, {}), (0,))


def test_gamma_p_sl2_cartan():
    pair = _sl2_cartan()
    A = pair.A
    gp = pair.gamma_p([1])
    # 1/2([h, e] f + [h, f] e) = ef - fe = 2ef - 1, living in Cl(span(e, f))
    e, f = A.odd([1, 0, 0]), A.odd([0, 0, 1])
    assert gp == (e * f).scale(2) - A.one()
    assert gp == pair.gamma_p_direct([1])


@pytest.mark.parametrize("pair", [_sl2_cartan, _fxh1_pair])
def test_gamma_p_two_ways(pair):
    pair = pair()
    for i in range(len(pair.k)):
        v = pair.Lk.basis_vector(i)
        assert pair.gamma_p(v) == pair.gamma_p_direct(v)


def test_embed_generators():
    pair = _sl2_cartan()
    A, Ak = pair.A, pair.Ak
    assert pair.embed(Ak.one()) == A.one()
    assert pair.embed(Ak.odd([1])) == A.odd([0, 1, 0])
    assert pair.embed(Ak.hat([1])) == A.hat([0, 1, 0]) + pair.gamma_p([1])
    assert pair.chi(pair.Ak.U.gen(0)) == A.hat([0, 1, 0]) + pair.gamma_p([1])
    assert pair.chi(pair.Ak.U.one()) == A.one()


def test_full_subalgebra_embeds_identically():
    L = liealg.get("sl2")
    pair = RelativePair(L, (0, 1, 2))
    for m in _ncweil_monomials(pair.Ak, 2):
        x = Element(pair.Ak, {m: Fraction(1)})
        assert pair.embed(x).terms == x.terms
    assert not pair.relative_dirac()


@pytest.mark.parametrize("pair", [_sl2_cartan, _fxh1_pair])
def test_embed_is_a_k_ds_homomorphism(pair):
    pair = pair()
    A, Ak = pair.A, pair.Ak
    monos = [Element(Ak, {m: Fraction(1)}) for m in _ncweil_monomials(Ak, 2)]
    for x in monos:
        for y in monos:
            assert pair.embed(x * y) == pair.embed(x) * pair.embed(y)
        assert pair.embed(Ak.d(x)) == A.d(pair.embed(x))
        for i in range(len(pair.k)):
            xk = pair.Lk.basis_vector(i)
            xg = pair.include(xk)
            assert pair.embed(Ak.iota(xk, x)) == A.iota(xg, pair.embed(x))
            assert pair.embed(Ak.lie(xk, x)) == A.lie(xg, pair.embed(x))


@pytest.mark.parametrize("pair", [_sl2_cartan, _fxh1_pair])
def test_chi_multiplicative_and_horizontal(pair):
    pair = pair()
    Uk = pair.Ak.U
    words = [(), (0,), (len(pair.k) - 1,), (0, 0), (0, len(pair.k) - 1)]
    kset = set(pair.k)
    for a in words:
        for b in words:
            x, y = Uk.word(a), Uk.word(b)
            assert pair.chi(x * y) == pair.chi(x) * pair.chi(y)
    cas, _ = casimir(pair.Lk)
    img = pair.chi(cas)
    assert all(not set(c) & kset for (_, c) in img.terms)


@pytest.mark.parametrize("pair", [_sl2_cartan, _fxh1_pair])
def test_relative_dirac_square(pair):
    r = relative_dirac_square_check(pair())
    assert r.ok


def test_relative_dirac_commutes_with_embedded_wk():
    pair = _sl2_cartan()
    D = pair.relative_dirac()
    for m in _ncweil_monomials(pair.Ak, 3):
        x = pair.embed(Element(pair.Ak, {m: Fraction(1)}))
        assert not pair.A.supercommutator(D, x)


def test_relative_dirac_abelian():
    L = liealg.get("abelian4")
    pair = RelativePair(L, (0, 1))
    A = pair.A
    D = pair.relative_dirac()
    expect = A.zero()
    for a in pair.p:
        expect = expect + A.hat(L.basis_vector(a)) * A.odd(L.dual_vector(a))
    assert D == expect
    assert relative_dirac_square_check(pair).ok


@pytest.mark.parametrize("pair", [_sl2_cartan, _fxh1_pair])
def test_vogan_cocycle(pair):
    pair = pair()
    Uk = pair.Ak.U
    cas, _ = casimir(pair.Lk)
    for z in (Uk.one(), cas, cas * cas):
        assert vogan_cocycle_check(pair, z).ok


def test_vogan_rejects_non_invariant():
    full = RelativePair(liealg.get("sl2"), (0, 1, 2))
    with pytest.raises(ValueError):
        vogan_cocycle_check(full, full.Ak.U.gen(0))
    # in an abelian k every element is invariant
    pair = _fxh1_pair()
    assert vogan_cocycle_check(pair, pair.Ak.U.gen(0)).ok


# -- triangular pairs -------------------------------------------------------------------

def test_kappa_examples():
    L = liealg.get("sl2")
    tri = TriangularPair(L)
    U = enveloping(L)
    # ef = fe + h in the order f < h < e, and kappa drops fe
    assert tri.project(U.gen(0) * U.gen(2)) == tri.Uk.gen(0)
    assert not tri.project(U.gen(2) * U.gen(0) - U.gen(0) * U.gen(2) + U.gen(1))
    c = clifford(L)
    # ef = -fe + B(e, f) in Cl
    assert tri.project(c.gen(0) * c.gen(2)) == tri.clk.scalar(1)
    assert tri.project(U.gen(1)) == tri.Uk.gen(0)


def test_tau_sl2():
    tri = TriangularPair(liealg.get("sl2"))
    Uk = tri.Uk
    h = Uk.gen(0)
    assert tri.shift(0) == -1
    assert tri.tau(h) == h - Uk.one()
    for w in [(), (0,), (0, 0), (0, 0, 0)]:
        z = Uk.word(w)
        assert tri.tau(tri.tau(z), inverse=True) == z
        assert tri.tau(tri.tau(z, inverse=True)) == z


def test_tau_sign_forced_by_casimir():
    # hand computation: Cas = 2fe + h + h^2/2 in the order f < h < e, the Duflo map
    # adds 1/2, so kappa_U(duflo(Cas)) = (h + 1)^2 / 2 while duflo_k(kappa_S(Cas)) = h^2 / 2
    L = liealg.get("sl2")
    tri = TriangularPair(L)
    Uk = tri.Uk
    h = Uk.gen(0)
    k = tri.kappa_U(tri.adapt(duflo_map(L, casimir_polynomial(L))))
    assert k == ((h + Uk.one()) * (h + Uk.one())).scale(Fraction(1, 2))
    assert tri.tau(k) == (h * h).scale(Fraction(1, 2))


def test_hc_checks_sl2():
    tri = TriangularPair(liealg.get("sl2"))
    rep = hc_diagram_checks(tri, cap=4)
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert rep.control_fails
    assert rep.invariants_tested >= 2


def test_hc_checks_fxh1_split():
    tri = TriangularPair(liealg.get("fxh1_split"))
    rep = hc_diagram_checks(tri, cap=3)
    for name in ("kappa_W = (tau o kappa_U) x kappa_Cl", "kappa_W(D_g) = D_k",
                 "kappa_W commutes with d, iota, L on k",
                 "kappa_U, kappa_Cl are k-equivariant"):
        assert rep.check(name).ok


def test_abelian_triangular_is_coordinate_projection():
    L = liealg.get("abelian4")
    assert L.B[0][1] == 1 and L.B[2][3] == 1
    dec = SubalgebraDecomposition(k=(2, 3), n_minus=(0,), n_plus=(1,))
    tri = TriangularPair(L, dec)
    assert all(tri.shift(i) == 0 for i in range(2))
    U = enveloping(L)
    x = U.gen(0) * U.gen(2) + U.gen(2) * U.gen(3) + U.gen(1)
    assert tri.project(x) == tri.Uk.gen(0) * tri.Uk.gen(1)
    assert hc_diagram_checks(tri, cap=3).ok


def test_triangular_hypotheses():
    L = liealg.get("sl2")
    with pytest.raises(ValueError):
        TriangularPair(L, SubalgebraDecomposition(k=(0,), n_minus=(1,), n_plus=(2,)))
    with pytest.raises(ValueError):
        TriangularPair(liealg.get("abelian2"))


# -- symmetric pairs -------------------------------------------------------------------

def _aff_pair():
    # k = aff(1) is not unimodular, so f is nonzero
    return SymmetricPair(from_cubic(liealg.aff2()))


def test_reduce_generator():
    sp = _aff_pair()
    assert any(sp.f)
    for g in sp.k:
        assert sp.reduce(sp.U.gen(g)) == sp.U.scalar(-sp.f_of(g))
    for g in sp.p:
        assert sp.reduce(sp.U.gen(g)) == sp.U.gen(g)


pbw_words = st.lists(st.integers(0, 3), max_size=3)


@settings(max_examples=40, deadline=None)
@given(pbw_words, pbw_words)
def test_reduce_is_left_module_map(a, b):
    # reducing x first or reducing the product gives the same class
    sp = _aff_pair()
    y, x = sp.U.word(a), sp.U.word(b)
    assert sp.reduce(y * x) == sp.reduce(y * sp.reduce(x))


@pytest.mark.parametrize("name", ["n3_cubic", "sl2_plus", "s_sstar"])
def test_ideal_is_killed(name):
    sp = SymmetricPair(liealg.get(name))
    assert ideal_kill_check(sp, cap=3).ok


def test_ideal_is_killed_with_nonzero_character():
    assert ideal_kill_check(_aff_pair(), cap=4).ok


def test_symmetric_pair_hypotheses():
    with pytest.raises(ValueError):
        SymmetricPair(liealg.get("sl2"))
    with pytest.raises(ValueError):
        SymmetricPair(liealg.get("sl2"), [[1, 0, 0], [0, -1, 0], [0, 0, 1]])


@pytest.mark.parametrize("name", ["n3_semidirect", "s_sstar"])
def test_rouviere_is_identity_for_semidirect(name):
    sp = SymmetricPair(liealg.get(name))
    assert p_is_abelian(sp)
    assert rouviere_identity_check(sp, 3).ok


def test_rouviere_identity_needs_abelian_p():
    sp = SymmetricPair(liealg.get("sl2_plus"))
    assert not p_is_abelian(sp)
    with pytest.raises(ValueError):
        rouviere_identity_check(sp)


def test_rouviere_low_degree_is_sym():
    sp = SymmetricPair(liealg.get("n3_cubic"))
    p = sp.S.gen(0) + sp.S.gen(1).scale(3)
    assert sp.rouviere_map(p) == sp.reduce(sym_U(p, sp.U))
    with pytest.raises(ValueError):
        sp.rouviere_map(sp.S.gen(sp.k[0]))


@pytest.mark.parametrize("name,cap", [("n3_cubic", 4), ("sl2_plus", 4), ("_aff", 4)])
def test_rouviere_multiplicative(name, cap):
    sp = _aff_pair() if name == "_aff" else SymmetricPair(liealg.get(name))
    rep = rouviere_multiplicativity_check(sp, cap=cap)
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert rep.invariants


# -- isotropic quotient --------------------------------------------------------------

def test_isotropic_quotient_cubic():
    L = liealg.get("n3_cubic")
    rep = isotropic_quotient(L, (0, 1, 2), cap=2)
    assert rep.ok, [c for c in rep.checks if not c.ok]


def test_isotropic_quotient_trivial_k():
    rep = isotropic_quotient(liealg.get("sl2"), (), cap=2)
    assert rep.ok


def test_isotropic_quotient_hypotheses():
    with pytest.raises(ValueError):
        isotropic_quotient(liealg.get("sl2"), (1,))
    with pytest.raises(ValueError):
        isotropic_quotient(liealg.get("sl2"), (0,), p=(0, 1))


def test_rouviere_images_of_invariants_are_invariant():
    sp = SymmetricPair(liealg.get("sl2_plus"))
    invs = sp.invariants(2)
    assert invs
    for p in invs:
        assert sp.is_k_invariant(sp.rouviere_map(p))
    # a non-invariant input loses invariance
    assert not sp.is_k_invariant(sp.rouviere_map(sp.S.gen(sp.p[0])))
