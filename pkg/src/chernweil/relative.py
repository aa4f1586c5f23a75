"""Constructions relative to a subalgebra k of g.

* quadratic k with p = k-perp: the embedding of Weil algebras, chi, the
  relative Dirac element and its square, the cocycle property of chi(z);
* triangular g = n_- + k + n_+: Harish-Chandra projections and the shift tau;
* symmetric pairs (g, k) from an involution: the quotient U(g)/U(g)k^f and the
  Duflo-type map Sym o J_p^{1/2};
* isotropic k with coisotropic complement: the quotient complex
  W(g)/W(g)k~ and the Chern-Weil cocycles in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .clifford import clifford, gamma
from .core import Element, add_into
from .enveloping import (adjoint_action, apply_dual_operator, casimir, duflo_factor,
                         duflo_map, enveloping, invariant_polynomials, is_invariant,
                         sym_U, symmetric)
from .liealg import Check, QuadraticLieAlgebra, SubalgebraDecomposition
from .weil import ncweil, quantize, weil_algebra


def _span_closed(L, sub, into):
    for a in sub:
        for b in sub:
            if any(k not in into for k in L.c[a][b]):
                return False
    return True


def _moves(L, src, tgt):
    tgt = set(tgt)
    return all(k in tgt for a in src for b in tgt for k in L.c[a][b])


def _pos_map(indices):
    return {g: i for i, g in enumerate(indices)}


def _map_U(x, images, target_one):
    acc: dict = {}
    for m, c in x.terms.items():
        img = target_one
        for i in m:
            img = img * images[i]
        add_into(acc, img.terms, c)
    return Element(target_one.algebra, acc)


# -- quadratic subalgebras ---------------------------------------------------------

class RelativePair:
    """g with a quadratic subalgebra k spanned by basis vectors, p = k-perp."""

    def __init__(self, L: QuadraticLieAlgebra, k):
        self.L = L
        self.k = tuple(sorted(k))
        self.p = tuple(i for i in range(L.dim) if i not in self.k)
        if not L.nondegenerate:
            raise ValueError("relative constructions need a nondegenerate form on g")
        if not _span_closed(L, self.k, set(self.k)):
            raise ValueError("k is not a subalgebra")
        if not _moves(L, self.k, self.p):
            raise ValueError("p is not k-invariant")
        if any(L.B[a][b] for a in self.k for b in self.p):
            raise ValueError("k and p are not B-orthogonal")
        self.Lk = L.subalgebra(self.k, name=f"{L.name}|k")
        if not self.Lk.nondegenerate:
            raise ValueError("B restricted to k is degenerate")
        self.A = ncweil(L)
        self.Ak = ncweil(self.Lk) if self.k else None
        self._hat_images = None

    def include(self, v):
        """Coordinates of a vector of k in g."""
        out = [Fraction(0)] * self.L.dim
        for i, g in enumerate(self.k):
            out[g] = Fraction(v[i])
        return out

    def gamma_p(self, zeta) -> Element:
        """gamma^p(zeta) = gamma_g(zeta) - gamma_k(zeta) for zeta in k (k-coordinates)."""
        return self.A.from_cl(gamma(self.L, self.include(zeta))) - \
            self._embed_cl(gamma(self.Lk, zeta))

    def gamma_p_direct(self, zeta) -> Element:
        """1/2 sum over a basis f_i of p of [zeta, f_i] f^i, the dual basis taken in p."""
        L = self.L
        cl = clifford(L)
        z = self.include(zeta)
        Bp = [[L.B[a][b] for b in self.p] for a in self.p]
        inv = linalg.inverse(Bp)
        out = cl.zero()
        for i, a in enumerate(self.p):
            br = L.bracket(z, L.basis_vector(a))
            dual = [Fraction(0)] * L.dim
            for j, b in enumerate(self.p):
                dual[b] = inv[i][j]
            if any(br):
                out = out + cl.linear(br) * cl.linear(dual)
        return self.A.from_cl(out.scale(Fraction(1, 2)))

    def _embed_cl(self, x) -> Element:
        return Element(self.A, {((), tuple(self.k[i] for i in m)): c
                                for m, c in x.terms.items()})

    def hat_image(self, i) -> Element:
        if self._hat_images is None:
            self._hat_images = []
            for j in range(len(self.k)):
                e = self.Lk.basis_vector(j)
                self._hat_images.append(self.A.hat(self.include(e)) + self.gamma_p(e))
        return self._hat_images[i]

    def embed(self, x: Element) -> Element:
        """The algebra map W(k) -> W(g): zeta -> zeta, zeta^ -> zeta^ + gamma^p(zeta)."""
        acc: dict = {}
        cache: dict = {}
        for (u, c), coeff in x.terms.items():
            img = cache.get(u)
            if img is None:
                img = self.A.one()
                for i in u:
                    img = img * self.hat_image(i)
                cache[u] = img
            cl_part = Element(self.A, {((), tuple(self.k[i] for i in c)): Fraction(1)})
            add_into(acc, (img * cl_part).terms, coeff)
        return Element(self.A, acc)

    def chi(self, z: Element) -> Element:
        """chi on U(k), via U(k) = horizontal part of W(k)."""
        return self.embed(self.Ak.from_U(z))

    def relative_dirac(self) -> Element:
        return self.A.dirac() - self.embed(self.Ak.dirac())


def embed_ncweil(pair: RelativePair, x: Element) -> Element:
    return pair.embed(x)


def chi(pair: RelativePair, z: Element) -> Element:
    return pair.chi(z)


def relative_dirac(pair: RelativePair) -> Element:
    return pair.relative_dirac()


@dataclass
class RelativeSquareReport:
    square: Element
    expected: Element
    basic: bool

    @property
    def ok(self) -> bool:
        return self.square == self.expected and self.basic


def relative_dirac_square_check(pair: RelativePair) -> RelativeSquareReport:
    A = pair.A
    D = pair.relative_dirac()
    cas_g, tr_g = casimir(pair.L)
    cas_k, tr_k = casimir(pair.Lk)
    expected = (A.from_U(cas_g).scale(Fraction(1, 2)) - pair.chi(cas_k).scale(Fraction(1, 2))
                + A.scalar((tr_g - tr_k) / 48))
    kset = set(pair.k)
    no_k_clifford = all(not (set(c) & kset) for (_, c) in D.terms)
    invariant = all(not A.lie(pair.include(pair.Lk.basis_vector(i)), D)
                    for i in range(len(pair.k)))
    horizontal = all(not A.iota(pair.include(pair.Lk.basis_vector(i)), D)
                     for i in range(len(pair.k)))
    return RelativeSquareReport(D * D, expected, no_k_clifford and invariant and horizontal)


@dataclass
class VoganReport:
    bracket: Element

    @property
    def ok(self) -> bool:
        return not self.bracket


def vogan_cocycle_check(pair: RelativePair, z: Element) -> VoganReport:
    if not is_invariant(pair.Lk, z):
        raise ValueError("z is not k-invariant")
    D = pair.relative_dirac()
    return VoganReport(pair.A.supercommutator(D, pair.chi(z)))


# -- bar-PBW bases ---------------------------------------------------------------------

class BarPBW:
    """Ordered products of the generators zetabar (even) and zeta (odd) of
    U(g) (x) Cl(g), in the index order of g: for each index, bars then odd.

    A bar-PBW monomial is written like a normal-form monomial (bars, odds);
    its expansion has exactly that normal-form monomial as the unique term of
    top hat count, so coefficients are found by triangular elimination.
    """

    def __init__(self, A):
        self.A = A
        self.L = A.L
        self._bars = [A.bar(self.L.basis_vector(i)) for i in range(self.L.dim)]
        self._odds = [A.odd(self.L.basis_vector(i)) for i in range(self.L.dim)]
        self._cache: dict = {}

    def expand(self, m) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        u, c = m
        out = self.A.one()
        for i in sorted(set(u) | set(c)):
            for _ in range(u.count(i)):
                out = out * self._bars[i]
            if i in c:
                out = out * self._odds[i]
        self._cache[m] = out
        return out

    def decompose(self, x: Element) -> dict:
        rest = dict(x.terms)
        coeffs: dict = {}
        while rest:
            top = max(len(u) for (u, _) in rest)
            lead = [(m, c) for m, c in rest.items() if len(m[0]) == top]
            for m, c in lead:
                coeffs[m] = coeffs.get(m, 0) + c
                add_into(rest, self.expand(m).terms, -c)
        return {m: c for m, c in coeffs.items() if c}

    def compose(self, coeffs: dict) -> Element:
        acc: dict = {}
        for m, c in coeffs.items():
            add_into(acc, self.expand(m).terms, c)
        return Element(self.A, acc)


# -- triangular decompositions ------------------------------------------------------------

class TriangularPair:
    """g = n_- + k + n_+ with isotropic k-invariant n_pm paired by B.

    All computations happen in the adapted basis n_- < k < n_+ (the algebra
    ``La``); ``adapt`` moves elements of U(g), Cl(g) or U(g) (x) Cl(g) there.
    """

    def __init__(self, L: QuadraticLieAlgebra, dec: SubalgebraDecomposition | None = None):
        dec = dec or L.decomposition
        if dec is None or not (dec.n_minus or dec.n_plus):
            raise ValueError("a triangular decomposition is required")
        L0 = dec.adapted(L)
        nm, k, np_ = tuple(dec.n_minus), tuple(dec.k), tuple(dec.n_plus)
        if sorted(nm + k + np_) != list(range(L0.dim)):
            raise ValueError("n_-, k, n_+ must partition the basis")
        for sub, nm_ in ((nm, "n_-"), (np_, "n_+")):
            if not _span_closed(L0, sub, set(sub)):
                raise ValueError(f"{nm_} is not a subalgebra")
            if not _moves(L0, k, sub):
                raise ValueError(f"{nm_} is not k-invariant")
            if any(L0.B[a][b] for a in sub for b in sub):
                raise ValueError(f"{nm_} is not isotropic")
        if not _span_closed(L0, k, set(k)):
            raise ValueError("k is not a subalgebra")
        if any(L0.B[a][b] for a in k for b in nm + np_):
            raise ValueError("k is not orthogonal to n_- + n_+")
        pairing = [[L0.B[a][b] for b in np_] for a in nm]
        if len(nm) != len(np_) or linalg.det(pairing) == 0:
            raise ValueError("B does not pair n_- with n_+")
        self.original = L0
        self.order = nm + k + np_
        self.La = L0.reorder(self.order, name=f"{L.name}|adapted")
        r, s = len(nm), len(k)
        self.n_minus = tuple(range(r))
        self.k = tuple(range(r, r + s))
        self.n_plus = tuple(range(r + s, L0.dim))
        self.Lk = self.La.subalgebra(self.k, name=f"{L.name}|k")
        # dual bases: b_i in n_-, c_j in n_+ with B(b_i, c_j) = delta_ij
        P = [[self.La.B[a][b] for b in self.n_plus] for a in self.n_minus]
        Pinv = linalg.inverse(P)
        self.b = [self.La.basis_vector(a) for a in self.n_minus]
        self.c = []
        for j in range(len(self.n_plus)):
            v = [Fraction(0)] * self.La.dim
            for l, g in enumerate(self.n_plus):
                v[g] = Pinv[l][j]
            self.c.append(v)
        self.U = enveloping(self.La)
        self.Uk = enveloping(self.Lk)
        self.cl = clifford(self.La)
        self.clk = clifford(self.Lk)
        self.A = ncweil(self.La)
        self.Ak = ncweil(self.Lk)
        self.bar_pbw = BarPBW(self.A)
        self.bar_pbw_k = BarPBW(self.Ak)
        self._shift = None

    # -- moving data into the adapted basis -----------------------------------------
    def adapt(self, x: Element) -> Element:
        pos = _pos_map(self.order)
        alg = x.algebra
        L0 = self.original
        if alg.key == enveloping(L0).key:
            return _map_U(x, [self.U.gen(pos[i]) for i in range(L0.dim)], self.U.one())
        if alg.key == clifford(L0).key:
            return _map_U(x, [self.cl.gen(pos[i]) for i in range(L0.dim)], self.cl.one())
        if alg.key == ncweil(L0).key:
            hats = [self.A.hat(self.La.basis_vector(pos[i])) for i in range(L0.dim)]
            odds = [self.A.odd(self.La.basis_vector(pos[i])) for i in range(L0.dim)]
            acc: dict = {}
            for (u, c), coeff in x.terms.items():
                img = self.A.one()
                for i in u:
                    img = img * hats[i]
                for j in c:
                    img = img * odds[j]
                add_into(acc, img.terms, coeff)
            return Element(self.A, acc)
        if alg.key == symmetric(L0).key:
            S = symmetric(self.La)
            return Element(S, {tuple(sorted(pos[i] for i in m)): c for m, c in x.terms.items()})
        raise ValueError("element does not belong to an algebra of g")

    # -- projections ------------------------------------------------------------------
    def _k_only(self, idx):
        lo, hi = self.k[0] if self.k else 0, (self.k[-1] + 1) if self.k else 0
        return all(lo <= i < hi for i in idx)

    def _to_k(self, idx):
        off = self.k[0] if self.k else 0
        return tuple(i - off for i in idx)

    def kappa_U(self, x: Element) -> Element:
        return Element(self.Uk, {self._to_k(m): c for m, c in x.terms.items()
                                 if self._k_only(m)})

    def kappa_Cl(self, x: Element) -> Element:
        return Element(self.clk, {self._to_k(m): c for m, c in x.terms.items()
                                  if self._k_only(m)})

    def kappa_S(self, p: Element) -> Element:
        Sk = symmetric(self.Lk)
        return Element(Sk, {self._to_k(m): c for m, c in p.terms.items() if self._k_only(m)})

    def kappa_W(self, x: Element) -> Element:
        """Projection along n_- W + W n_+, computed in the bar-PBW basis."""
        coeffs = self.bar_pbw.decompose(x)
        acc: dict = {}
        for (u, c), v in coeffs.items():
            if self._k_only(u) and self._k_only(c):
                add_into(acc, self.bar_pbw_k.expand((self._to_k(u), self._to_k(c))).terms, v)
        return Element(self.Ak, acc)

    def project(self, x: Element) -> Element:
        key = x.algebra.key
        if key == self.U.key:
            return self.kappa_U(x)
        if key == self.cl.key:
            return self.kappa_Cl(x)
        if key == self.A.key:
            return self.kappa_W(x)
        return self.project(self.adapt(x))

    # -- the shift ----------------------------------------------------------------------
    def shift(self, i) -> Fraction:
        """-1/2 tr(ad_zeta on n_+) for the i-th basis vector zeta of k."""
        if self._shift is None:
            self._shift = []
            for g in self.k:
                tr = sum((self.La.c[g][a].get(a, 0) for a in self.n_plus), Fraction(0))
                self._shift.append(-Fraction(tr) / 2)
        return self._shift[i]

    def tau(self, z: Element, inverse=False) -> Element:
        s = -1 if inverse else 1
        images = [self.Uk.gen(i) + self.Uk.scalar(s * self.shift(i))
                  for i in range(len(self.k))]
        return _map_U(z, images, self.Uk.one())


def hc_project(tri: TriangularPair, x: Element) -> Element:
    return tri.project(x)


def tau_shift(tri: TriangularPair, z: Element, inverse=False) -> Element:
    return tri.tau(z, inverse)


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, ok, witness=None):
        self.checks.append(Check(name, bool(ok), None if ok else witness))

    def check(self, name) -> Check:
        return next(c for c in self.checks if c.name == name)


def _ncweil_monomials(A, cap):
    from itertools import combinations, combinations_with_replacement
    n = A.L.dim
    out = []
    for total in range(cap + 1):
        for j in range(min(total, n) + 1):
            for u in combinations_with_replacement(range(n), total - j):
                for c in combinations(range(n), j):
                    out.append((u, c))
    return out


def hc_diagram_checks(tri: TriangularPair, cap=4, invariant_degree=None) -> Report:
    """The four Harish-Chandra assertions plus the unshifted negative control."""
    rep = Report()
    A, Ak = tri.A, tri.Ak
    inv_deg = cap if invariant_degree is None else invariant_degree
    # (i) kappa_W = (tau o kappa_U) (x) kappa_Cl
    bad = None
    for m in _ncweil_monomials(A, cap):
        u, c = m
        lhs = tri.kappa_W(Element(A, {m: Fraction(1)}))
        ku = tri.tau(tri.kappa_U(Element(tri.U, {u: Fraction(1)})))
        kc = tri.kappa_Cl(Element(tri.cl, {c: Fraction(1)}))
        rhs = Ak.from_U(ku) * Ak.from_cl(kc)
        if lhs != rhs:
            bad = (A.format_monomial(m), lhs, rhs)
            break
    rep.add("kappa_W = (tau o kappa_U) x kappa_Cl", bad is None, bad)
    # (ii) Dirac elements
    kd = tri.kappa_W(A.dirac())
    rep.add("kappa_W(D_g) = D_k", kd == Ak.dirac(), (kd, Ak.dirac()))
    # (iii) k-ds homomorphisms
    bad = None
    small = _ncweil_monomials(A, cap - 1)
    for i in range(len(tri.k)):
        xi = tri.La.basis_vector(tri.k[i])
        xk = tri.Lk.basis_vector(i)
        for m in small:
            x = Element(A, {m: Fraction(1)})
            kx = tri.kappa_W(x)
            pairs = ((tri.kappa_W(A.d(x)), Ak.d(kx), "d"),
                     (tri.kappa_W(A.iota(xi, x)), Ak.iota(xk, kx), "iota"),
                     (tri.kappa_W(A.lie(xi, x)), Ak.lie(xk, kx), "lie"))
            for lhs, rhs, nm in pairs:
                if lhs != rhs:
                    bad = (nm, A.format_monomial(m))
                    break
            if bad:
                break
        if bad:
            break
    rep.add("kappa_W commutes with d, iota, L on k", bad is None, bad)
    bad = None
    for i in range(len(tri.k)):
        xi = tri.La.basis_vector(tri.k[i])
        xk = tri.Lk.basis_vector(i)
        gx, gk = gamma(tri.La, xi), gamma(tri.Lk, xk)
        for m in small:
            u, c = m
            ux = Element(tri.U, {u: Fraction(1)})
            if tri.kappa_U(adjoint_action(tri.La, xi, ux)) != \
                    adjoint_action(tri.Lk, xk, tri.kappa_U(ux)):
                bad = ("kappa_U", m)
                break
            cx = Element(tri.cl, {c: Fraction(1)})
            ck = tri.kappa_Cl(cx)
            if tri.kappa_Cl(tri.cl.supercommutator(tri.cl.linear(xi), cx)) != \
                    tri.clk.supercommutator(tri.clk.linear(xk), ck):
                bad = ("kappa_Cl iota", m)
                break
            if tri.kappa_Cl(tri.cl.supercommutator(gx, cx)) != \
                    tri.clk.supercommutator(gk, ck):
                bad = ("kappa_Cl lie", m)
                break
        if bad:
            break
    rep.add("kappa_U, kappa_Cl are k-equivariant", bad is None, bad)
    # (iv) Duflo compatibility and the unshifted control
    bad = None
    control_fails = False
    tested = 0
    for deg in range(1, inv_deg + 1):
        for p in invariant_polynomials(tri.La, deg):
            tested += 1
            lhs_raw = tri.kappa_U(duflo_map(tri.La, p))
            lhs = tri.tau(lhs_raw)
            rhs = duflo_map(tri.Lk, tri.kappa_S(p))
            if lhs != rhs and bad is None:
                bad = (repr(p), lhs, rhs)
            if lhs_raw != rhs:
                control_fails = True
    rep.add("tau o kappa_U o duflo_g = duflo_k o kappa_S on invariants",
            bad is None and tested > 0, bad)
    rep.control_fails = control_fails
    rep.invariants_tested = tested
    return rep


# -- symmetric pairs ------------------------------------------------------------------------

class SymmetricPair:
    """(g, k) with k, p the +1 / -1 eigenspaces of an involution of g.

    Works in the adapted basis p < k (algebra ``La``).
    """

    def __init__(self, L: QuadraticLieAlgebra, involution=None):
        eps = involution if involution is not None else L.involution
        if eps is None:
            raise ValueError("a symmetric pair needs an involution")
        eps = linalg.as_matrix(eps)
        n = L.dim
        if any(eps[i][j] for i in range(n) for j in range(n) if i != j) or \
                any(eps[i][i] not in (1, -1) for i in range(n)):
            raise ValueError("the involution must be diagonal with entries +-1")
        k = tuple(i for i in range(n) if eps[i][i] == 1)
        p = tuple(i for i in range(n) if eps[i][i] == -1)
        for a in range(n):
            for b in range(n):
                if L.B[a][b] and eps[a][a] * eps[b][b] != -1:
                    raise ValueError("the involution does not reverse B")
                for c, v in L.c[a][b].items():
                    if v and eps[c][c] != eps[a][a] * eps[b][b]:
                        raise ValueError("the involution is not a Lie automorphism")
        self.original = L
        self.order = p + k
        self.La = L.reorder(self.order, name=f"{L.name}|adapted")
        self.p = tuple(range(len(p)))
        self.k = tuple(range(len(p), n))
        self.U = enveloping(self.La)
        self.S = symmetric(self.La)
        self.f = []
        for g in self.k:
            tr = sum((self.La.c[g][a].get(a, 0) for a in self.k), Fraction(0))
            self.f.append(Fraction(tr) / 2)

    def f_of(self, g) -> Fraction:
        return self.f[g - len(self.p)]

    def reduce(self, x: Element) -> Element:
        """Normal form modulo U(g) k^f: trailing k-factors xi become -f(xi)."""
        first_k = len(self.p)
        acc: dict = {}
        for m, c in x.terms.items():
            cut = len(m)
            while cut and m[cut - 1] >= first_k:
                cut -= 1
            coeff = c
            for g in m[cut:]:
                coeff *= -self.f_of(g)
                if not coeff:
                    break
            if coeff:
                add_into(acc, {m[:cut]: coeff})
        return Element(self.U, acc)

    def k_f(self, g) -> Element:
        """xi + f(xi) in U(g) for the basis vector xi of index g (in k)."""
        return self.U.gen(g) + self.U.scalar(self.f_of(g))

    def half_J_p(self, M):
        return duflo_factor(self.La, M, support=self.p, block=self.p, scale=2)

    def rouviere_map(self, p: Element, M=None) -> Element:
        if any(i in self.k for m in p.terms for i in m):
            raise ValueError("the input must be a polynomial on p")
        if M is None:
            M = max(self.S.degree(p), 0)
        F = self.half_J_p(M)
        return self.reduce(sym_U(apply_dual_operator(F, p), self.U))

    def invariants(self, degree) -> list:
        return invariant_polynomials(self.La, degree, variables=self.p, acting=self.k)

    def is_k_invariant(self, x: Element) -> bool:
        """Invariance of the class of x in the quotient."""
        return all(not self.reduce(adjoint_action(self.La, self.La.basis_vector(g), x))
                   for g in self.k)


def quotient_reduce(sp: SymmetricPair, x: Element) -> Element:
    return sp.reduce(x)


def rouviere_map(sp: SymmetricPair, p: Element, M=None) -> Element:
    return sp.rouviere_map(p, M)


def rouviere_multiplicativity_check(sp: SymmetricPair, cap=4) -> Report:
    rep = Report()
    invs = []
    for d in range(1, cap + 1):
        invs.extend(sp.invariants(d))
    bad = None
    pairs = 0
    for i, p in enumerate(invs):
        for q in invs[i:]:
            if sp.S.degree(p) + sp.S.degree(q) > cap:
                continue
            pairs += 1
            lhs = sp.rouviere_map(p * q)
            rhs = sp.reduce(sp.rouviere_map(p) * sp.rouviere_map(q))
            if lhs != rhs:
                bad = (repr(p), repr(q), lhs, rhs)
                break
        if bad:
            break
    rep.add("Sym o J_p^1/2 multiplicative on k-invariants", bad is None, bad)
    bad = None
    for p in invs:
        img = sp.rouviere_map(p)
        if not sp.is_k_invariant(img):
            bad = repr(p)
            break
    rep.add("images of invariants are k-invariant", bad is None, bad)
    rep.pairs = pairs
    rep.invariants = invs
    return rep


def ideal_kill_check(sp: SymmetricPair, cap=3) -> Check:
    """reduce(x (xi + f(xi))) = 0 for PBW monomials x of degree < cap and xi in k."""
    from itertools import combinations_with_replacement
    bad = None
    for deg in range(cap):
        for m in combinations_with_replacement(range(sp.La.dim), deg):
            x = Element(sp.U, {m: Fraction(1)})
            for g in sp.k:
                if sp.reduce(x * sp.k_f(g)):
                    bad = (sp.U.format_monomial(m), sp.La.names[g])
                    break
            if bad:
                break
        if bad:
            break
    return Check("quotient_reduce kills U(g) k^f", bad is None, bad)


def p_is_abelian(sp: SymmetricPair) -> bool:
    return not any(sp.La.c[a][b] for a in sp.p for b in sp.p)


def rouviere_identity_check(sp: SymmetricPair, degree=3) -> Check:
    """With [p, p] = 0 the map sends each k-invariant to the same monomials in U(g)."""
    if not p_is_abelian(sp):
        raise ValueError("p is not abelian")
    bad = None
    for d in range(1, degree + 1):
        for p in sp.invariants(d):
            img = sp.rouviere_map(p)
            if img != Element(sp.U, dict(p.terms)):
                bad = (repr(p), img)
                break
        if bad:
            break
    return Check("Sym o J_p^1/2 is the identity when [p, p] = 0", bad is None, bad)


# -- isotropic subalgebras ----------------------------------------------------------------

@dataclass
class QuotientComplexReport:
    checks: list
    dimension_checked: int
    cocycles: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def coadjoint_invariants(Lk: QuadraticLieAlgebra, degree: int) -> list:
    """Basis of the invariant polynomials of degree ``degree`` in the curvature
    generators of W(k), i.e. of S(k*)^k."""
    W = weil_algebra(Lk)
    monos = [m for m in W.monomials(degree, degree) if not m[1]]
    if not monos:
        return []
    rows: dict = {}
    cols = []
    for m in monos:
        col = {}
        for i in range(Lk.dim):
            for mm, c in W.lie(i, Element(W, {m: Fraction(1)})).terms.items():
                key = (i, mm)
                if key not in rows:
                    rows[key] = len(rows)
                col[rows[key]] = c
        cols.append(col)
    if rows:
        mat = [[col.get(r, Fraction(0)) for col in cols] for r in range(len(rows))]
        basis = linalg.nullspace(mat)
    else:
        basis = [[Fraction(int(i == j)) for i in range(len(monos))] for j in range(len(monos))]
    return [Element(W, {m: c for m, c in zip(monos, v) if c}) for v in basis]


def isotropic_quotient(L: QuadraticLieAlgebra, k, p=None, cap=3) -> QuotientComplexReport:
    """The complex W(g)/W(g)k~ with differential induced by [D, .].

    Elements of the quotient are written in the bar-PBW basis with p first and
    k last; the left ideal is spanned by the monomials containing a k-generator.
    """
    k = tuple(sorted(k))
    p = tuple(i for i in range(L.dim) if i not in k) if p is None else tuple(sorted(p))
    if sorted(k + p) != list(range(L.dim)):
        raise ValueError("k and p must partition the basis")
    if any(L.B[a][b] for a in k for b in k):
        raise ValueError("k is not isotropic")
    if not _span_closed(L, k, set(k)):
        raise ValueError("k is not a subalgebra")
    if not _moves(L, k, p):
        raise ValueError("p is not k-invariant")
    order = p + k
    La = L.reorder(order, name=f"{L.name}|iso") if order != tuple(range(L.dim)) else L
    kpos = tuple(range(len(p), L.dim))
    ppos = tuple(range(len(p)))
    # p-perp, which must sit inside p and pair nondegenerately with k
    rows = [La.B[q] for q in ppos]
    perp = linalg.nullspace(rows, ncols=La.dim) if rows else \
        [La.basis_vector(i) for i in range(La.dim)]
    if any(v[i] for v in perp for i in kpos):
        raise ValueError("p is not coisotropic")
    pairing = [[La.form(v, La.basis_vector(g)) for g in kpos] for v in perp]
    if len(perp) != len(kpos) or (kpos and linalg.det(pairing) == 0):
        raise ValueError("p-perp does not pair with k")
    # m = k-perp intersect p, restricted form must be nondegenerate
    m_vecs = linalg.nullspace([La.B[g] for g in kpos] + [La.basis_vector(g) for g in kpos],
                              ncols=La.dim) if kpos else \
        [La.basis_vector(i) for i in range(La.dim)]
    Bm = [[La.form(a, b) for b in m_vecs] for a in m_vecs]
    if m_vecs and linalg.det(Bm) == 0:
        raise ValueError("B restricted to m is degenerate")

    A = ncweil(La)
    bp = BarPBW(A)
    kset = set(kpos)

    def reduce(x):
        return {m: c for m, c in bp.decompose(x).items()
                if not (set(m[0]) & kset or set(m[1]) & kset)}

    def dq(coeffs):
        return reduce(A.d(bp.compose(coeffs)))

    checks = []
    basis = [m for m in _ncweil_monomials(A, cap)
             if not (set(m[0]) & kset or set(m[1]) & kset)]
    bad = None
    for m in basis:
        if dq(dq({m: Fraction(1)})):
            bad = A.format_monomial(m)
            break
    checks.append(Check("d^2 = 0 on the quotient", bad is None, bad))
    # ideal is preserved by d: d(x zeta) and d(x zetabar) reduce to zero
    bad = None
    for m in basis[: min(len(basis), 20)]:
        x = bp.expand(m)
        for g in kpos:
            for gen in (A.odd(La.basis_vector(g)), A.bar(La.basis_vector(g))):
                if reduce(A.d(x * gen)):
                    bad = (A.format_monomial(m), La.names[g])
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("d preserves the left ideal", bad is None, bad))
    # Chern-Weil images through theta: k* = p-perp inside p
    Pinv = linalg.inverse(pairing) if kpos else []
    theta = []
    for i in range(len(kpos)):
        v = [Fraction(0)] * La.dim
        for j, w in enumerate(perp):
            if Pinv[j][i]:
                v = [a + Pinv[j][i] * b for a, b in zip(v, w)]
        theta.append(v)
    cocycles = []
    if kpos:
        Lk = La.subalgebra(kpos, name=f"{L.name}|k-iso")
        Wg = weil_algebra(La)
        K = Wg.koszul
        odd_img = [K.odd_linear(linalg.matvec(La.B, v)) for v in theta]
        bar_img = [K.even_linear(linalg.matvec(La.B, v)) for v in theta]
        curv = []
        for i in range(len(kpos)):
            x = bar_img[i]
            for a in range(len(kpos)):
                for b in range(a + 1, len(kpos)):
                    v = Lk.c[a][b].get(i, 0)
                    if v:
                        x = x + (odd_img[a] * odd_img[b]).scale(v)
            curv.append(x)
        Wk = weil_algebra(Lk)
        bad = None
        for deg in range(1, cap + 1):
            for P in coadjoint_invariants(Lk, deg):
                y = Wk.substitute(P, curv, odd_img, K)
                q = reduce(quantize(La, y))
                cocycles.append((repr(P), len(q)))
                if dq(q):
                    bad = repr(P)
        checks.append(Check("Chern-Weil images are cocycles", bad is None, bad))
    return QuotientComplexReport(checks, len(basis), cocycles)
