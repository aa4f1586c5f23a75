"""Acceptance suite: fourteen exact criteria, one PASS/FAIL line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
Every comparison is equality of exact rationals.
"""
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy

import oracles
from chernweil import liealg
from chernweil.clifford import contract_exponentials, gamma_checks
from chernweil.core import Element
from chernweil.enveloping import (casimir, casimir_polynomial, duflo_map,
                                  duflo_multiplicativity_check, enveloping, series_tables,
                                  sym_U, symmetric)
from chernweil.relative import (RelativePair, SymmetricPair, TriangularPair, hc_diagram_checks,
                                ideal_kill_check, relative_dirac_square_check,
                                rouviere_identity_check, rouviere_multiplicativity_check,
                                vogan_cocycle_check)
from chernweil.weil import (NCWeilGDA, TensorGDA, characteristic_map, dirac_square_check,
                            duflo_factorization_check, ncweil, quantization_chain_checks,
                            quantize, rigidity_checks, rigidity_homotopy, transgression,
                            weil_algebra)


def _failed(checks):
    return [(c.name, c.witness) for c in checks if not c.ok]


def _ad_casimir_trace(L):
    # trace of sum B^{ab} ad_a ad_b, from the oracle's adjoint matrices
    mats = oracles.adjoint_matrices(L.c, L.dim)
    Binv = oracles.inverse(L.B)
    total = sympy.zeros(L.dim, L.dim)
    for a in range(L.dim):
        for b in range(L.dim):
            total += Binv[a][b] * mats[a] * mats[b]
    return oracles.rat(total.trace())


def catalog_validity():
    for name in sorted(liealg.catalog()):
        L = liealg.get(name)
        rep = liealg.validate(L)
        required = {"antisymmetry", "jacobi", "symmetric_form", "invariant_form"}
        if L.nondegenerate:
            required.add("nondegenerate")
        status = {c.name: c.ok for c in rep.checks}
        assert required <= set(status), (name, sorted(status))
        assert all(status[r] for r in required), (name, _failed(rep.checks))
        # Jacobi again, independently: ad is a representation
        mats = oracles.adjoint_matrices(L.c, L.dim)
        for i in range(L.dim):
            for j in range(L.dim):
                br = L.bracket(L.basis_vector(i), L.basis_vector(j))
                ad_br = sum((c * mats[k] for k, c in enumerate(br) if c),
                            sympy.zeros(L.dim, L.dim))
                assert mats[i] * mats[j] - mats[j] * mats[i] == ad_br, (name, i, j)


def gamma_homomorphism():
    names = [n for n in sorted(liealg.catalog()) if liealg.get(n).nondegenerate]
    assert len(names) == len(liealg.catalog())
    for name in names:
        bad = _failed(gamma_checks(liealg.get(name)))
        assert not bad, (name, bad)


def dirac_square():
    for name in ["abelian2", "sl2", "fxh1", "dext_sl2"]:
        L = liealg.get(name)
        A = ncweil(L)
        cas, tr = casimir(L)
        assert tr == _ad_casimir_trace(L), name
        r = dirac_square_check(L)
        expected = A.from_U(cas).scale(Fraction(1, 2)) + A.scalar(Fraction(tr, 48))
        assert A.dirac() * A.dirac() == expected, name
        assert r.square == expected and r.ok, name
        assert r.quantized_casimir == A.from_U(cas) + A.scalar(Fraction(tr, 24)), name
    # hand values on sl2: tr(Cas) = 12, so the constant term is 1/4
    L = liealg.get("sl2")
    assert dirac_square_check(L).expected.constant() == Fraction(1, 4)
    assert dirac_square_check(liealg.get("abelian2")).trace == 0


def quantization_chain_map():
    for name in ["sl2", "fxh1"]:
        bad = _failed(quantization_chain_checks(liealg.get(name), 5))
        assert not bad, (name, bad)


def duflo_factorization():
    L = liealg.get("sl2")
    rep = duflo_factorization_check(L, 4)
    assert rep.ok and rep.checked > 0, rep.failures[:1]
    W, A, S = weil_algebra(L), ncweil(L), symmetric(L)
    hats = [W.even_linear(L.B[a]) for a in range(L.dim)]
    for deg in range(5):
        for m in S.monomials(deg):
            p = Element(S, {m: Fraction(1)})
            assert quantize(L, S.substitute(p, hats, W)) == A.from_U(duflo_map(L, p)), m
    # hand value: duflo(Cas) = sym_U(Cas) + tr(Cas)/24 = sym_U(Cas) + 1/2
    U = enveloping(L)
    cas = casimir_polynomial(L)
    assert duflo_map(L, cas) == sym_U(cas, U) + U.scalar(Fraction(1, 2))


def duflo_multiplicativity():
    L = liealg.get("sl2")
    check, control_fails = duflo_multiplicativity_check(L, 4)
    assert check.ok, check.witness
    assert control_fails is True
    # the control by hand: sym_U(Cas^2) differs from sym_U(Cas)^2
    U = enveloping(L)
    cas = casimir_polynomial(L)
    assert sym_U(cas * cas, U) != sym_U(cas, U) * sym_U(cas, U)
    d = duflo_map(L, cas)
    assert duflo_map(L, cas * cas) == d * d


def transgression_formula():
    L = liealg.get("sl2")
    r = transgression(L)
    assert r.via_homotopy == r.closed_form
    assert r.differential == r.target
    A = ncweil(L)
    # D assembled here from the generators
    D = A.zero()
    for a in range(L.dim):
        ea = L.basis_vector(a)
        dual = A.odd(L.dual_vector(a))
        D = D + (A.hat(ea) + A.gamma(ea)) * dual - (A.gamma(ea) * dual).scale(Fraction(2, 3))
    assert quantize(L, r.via_homotopy) == D


def rigidity():
    L = liealg.get("sl2")
    G = NCWeilGDA(L)
    T = TensorGDA(G, G, "left")
    c0 = characteristic_map(T, 4)
    c1 = characteristic_map(T.with_connection("right"), 4)
    assert not (c0 - c1).is_zero()
    psi = rigidity_homotopy(c0, c1)
    checks = rigidity_checks(psi, c0, c1, max_length=3)
    assert len(checks) == 2 + 2 * L.dim
    assert not _failed(checks), _failed(checks)


def vogan():
    L = liealg.get("sl2")
    pair = RelativePair(L, (1,))
    Uk = enveloping(pair.Lk)
    cas, _ = casimir(pair.Lk)
    for z in [Uk.one(), cas, cas * cas]:
        rep = vogan_cocycle_check(pair, z)
        assert rep.ok, rep.bracket
    sq = relative_dirac_square_check(pair)
    assert sq.square == sq.expected and sq.basic


def harish_chandra():
    L = liealg.get("sl2")
    tri = TriangularPair(L)
    rep = hc_diagram_checks(tri, cap=4)
    assert not _failed(rep.checks), _failed(rep.checks)
    for name in ["kappa_W = (tau o kappa_U) x kappa_Cl", "kappa_W(D_g) = D_k",
                 "tau o kappa_U o duflo_g = duflo_k o kappa_S on invariants"]:
        assert rep.check(name).ok, name
    assert rep.invariants_tested >= 2
    # paired control: kappa alone fails, tau o kappa passes
    assert rep.control_fails is True
    h = tri.Uk.gen(0)
    one = tri.Uk.one()
    raw = tri.kappa_U(tri.adapt(duflo_map(L, casimir_polynomial(L))))
    assert raw == ((h + one) * (h + one)).scale(Fraction(1, 2))
    assert tri.tau(raw) == (h * h).scale(Fraction(1, 2))


def _skew(rng, n):
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
            M[i][j], M[j][i] = v, -v
    return M


def contraction_identity():
    rng = random.Random(20240601)
    done = 0
    while done < 50:
        n = (2, 3, 4)[done % 3]
        A, B = _skew(rng, n), _skew(rng, n)
        M = sympy.eye(n) + sympy.Matrix(A) * sympy.Matrix(B)
        if M.det() == 0:
            continue
        r = contract_exponentials(A, B)
        assert r.holds, (A, B)
        assert r.scalar ** 2 == oracles.rat(M.det()), (A, B)
        done += 1


def rouviere():
    for name in ["s_sstar", "n3_semidirect"]:
        sp = SymmetricPair(liealg.get(name))
        c = rouviere_identity_check(sp, 3)
        assert c.ok, (name, c.witness)
    sp = SymmetricPair(liealg.get("n3_cubic"))
    rep = rouviere_multiplicativity_check(sp, cap=4)
    assert not _failed(rep.checks), _failed(rep.checks)
    assert rep.pairs > 0
    kill = ideal_kill_check(sp)
    assert kill.ok, kill.witness


def series_coefficients():
    t = series_tables(10)
    assert (t.b(2), t.b(4)) == (Fraction(1, 24), Fraction(-1, 2880))
    assert (t.c(1), t.c(3)) == (Fraction(1, 12), Fraction(-1, 720))
    assert t.ln_j == oracles.ln_j_coefficients(10)
    assert t.d_ln_j == oracles.d_ln_j_coefficients(9)


def determinism():
    cmd = [sys.executable, "-m", "chernweil", "verify", "--suite", "all", "--format", "json"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    assert all(r.returncode == 0 for r in runs), runs[0].stderr.decode()
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout


CRITERIA = [
    ("1 catalog validity", catalog_validity),
    ("2 gamma homomorphism", gamma_homomorphism),
    ("3 Dirac square", dirac_square),
    ("4 quantization chain map", quantization_chain_map),
    ("5 Duflo factorization", duflo_factorization),
    ("6 Duflo multiplicativity", duflo_multiplicativity),
    ("7 transgression", transgression_formula),
    ("8 rigidity", rigidity),
    ("9 Vogan", vogan),
    ("10 Harish-Chandra", harish_chandra),
    ("11 contraction identity", contraction_identity),
    ("12 Rouviere", rouviere),
    ("13 series coefficients", series_coefficients),
    ("14 determinism", determinism),
]


def _run(label, fn):
    t = time.perf_counter()
    try:
        fn()
    except AssertionError as exc:
        return False, f"FAIL  {label}: {exc!r}"
    return True, f"PASS  {label} ({time.perf_counter() - t:.1f}s)"


@pytest.mark.parametrize("label,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, fn, capsys):
    ok, line = _run(label, fn)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [_run(label, fn) for label, fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
