"""Exterior and Clifford algebras, Chevalley quantization, the maps gamma and
lambda, contractions, and the contraction identity for Gaussian exponentials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .core import Algebra, Element, add_into, symmetrize
from .liealg import Check, QuadraticLieAlgebra


def _merge_sign(a, b):
    """Sign of sorting the concatenation a + b of two increasing tuples."""
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return -1 if inv % 2 else 1


class ExteriorAlgebra(Algebra):
    """wedge(V) on n generators; monomials are strictly increasing tuples."""

    def __init__(self, n, names=None, label="wedge"):
        self.n = n
        self.names = list(names) if names else [f"v{i}" for i in range(n)]
        self.label = label
        self.key = (label, n, tuple(self.names))

    def mul_monomials(self, a, b):
        if set(a) & set(b):
            return {}
        return {tuple(sorted(a + b)): Fraction(_merge_sign(a, b))}

    def parity(self, m):
        return len(m) % 2

    def format_monomial(self, m):
        return "^".join(self.names[i] for i in m) or "1"

    def gen(self, i) -> Element:
        return Element(self, {(i,): Fraction(1)})

    def linear(self, coeffs) -> Element:
        return Element(self, {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})

    def factors(self, m):
        return list(m)

    def generator(self, g):
        return self.gen(g)

    def generator_parity(self, g):
        return 1

    def degree_part(self, x, k):
        return x.filter(lambda m: len(m) == k)

    def all_monomials(self, max_degree=None):
        from itertools import combinations
        top = self.n if max_degree is None else min(max_degree, self.n)
        return [c for k in range(top + 1) for c in combinations(range(self.n), k)]


class CliffordAlgebra(Algebra):
    """Cl(V, B) with xi xi' + xi' xi = B(xi, xi').

    Normal form: strictly increasing index tuples.  Right multiplication by a
    generator is memoized; the caches are per instance and only ever grow
    with deterministic values, so concurrent readers see consistent data.
    """

    def __init__(self, B, names=None, label="Cl"):
        self.B = [[Fraction(x) for x in row] for row in B]
        self.n = n = len(self.B)
        self.names = list(names) if names else [f"v{i}" for i in range(n)]
        self.label = label
        self.key = (label, n, tuple(self.names), tuple(map(tuple, self.B)))
        self._rmul = lru_cache(maxsize=None)(self._rmul_gen)
        self._mm = lru_cache(maxsize=None)(self._mul_monomials)

    def _rmul_gen(self, mono, j):
        if not mono or mono[-1] < j:
            return {mono + (j,): Fraction(1)}
        i = mono[-1]
        rest = mono[:-1]
        if i == j:
            half = self.B[j][j] / 2
            return {rest: half} if half else {}
        # rest e_i e_j = -(rest e_j) e_i + B_ij rest
        out: dict = {}
        for m, c in self._rmul(rest, j).items():
            out[m + (i,)] = -c
        if self.B[i][j]:
            add_into(out, {rest: self.B[i][j]})
        return out

    def _mul_monomials(self, a, b):
        cur = {a: Fraction(1)}
        for j in b:
            nxt: dict = {}
            for m, c in cur.items():
                add_into(nxt, self._rmul(m, j), c)
            cur = nxt
        return cur

    def mul_monomials(self, a, b):
        return self._mm(a, b)

    def parity(self, m):
        return len(m) % 2

    def format_monomial(self, m):
        return "*".join(self.names[i] for i in m) or "1"

    def gen(self, i) -> Element:
        return Element(self, {(i,): Fraction(1)})

    def linear(self, coeffs) -> Element:
        return Element(self, {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})

    def word(self, indices) -> Element:
        """Product e_{i1} ... e_{ik} in normal form."""
        return Element(self, dict(self._mul_monomials((), tuple(indices))))

    def exterior(self) -> ExteriorAlgebra:
        return ExteriorAlgebra(self.n, self.names, label=f"wedge[{self.label}]")

    def contraction(self, vec, m):
        """[v, e_{m}] as the odd derivation e_j -> B(v, e_j), on a monomial."""
        out: dict = {}
        for p, j in enumerate(m):
            b = sum((vec[a] * self.B[a][j] for a in range(self.n) if vec[a]), Fraction(0))
            if b:
                r = m[:p] + m[p + 1:]
                out[r] = out.get(r, 0) + (-b if p % 2 else b)
        return {k: v for k, v in out.items() if v}


def clifford(L: QuadraticLieAlgebra) -> CliffordAlgebra:
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "cl" not in cache:
        cache["cl"] = CliffordAlgebra(L.B, L.names, label=f"Cl:{L.name}:{id(L)}")
    return cache["cl"]


def exterior_dual(L: QuadraticLieAlgebra) -> ExteriorAlgebra:
    """wedge(g*) on the dual basis mu^a."""
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "wedge*" not in cache:
        cache["wedge*"] = ExteriorAlgebra(L.dim, [f"{nm}*" for nm in L.names],
                                          label=f"wedge*:{L.name}:{id(L)}")
    return cache["wedge*"]


def exterior(L: QuadraticLieAlgebra) -> ExteriorAlgebra:
    """wedge(g) on the basis e_a."""
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "wedge" not in cache:
        cache["wedge"] = ExteriorAlgebra(L.dim, L.names, label=f"wedge:{L.name}:{id(L)}")
    return cache["wedge"]


def cl_mul(x: Element, y: Element) -> Element:
    return x * y


def _quantize_monomial(cl: CliffordAlgebra, m):
    gens = [cl.gen(i) for i in m]
    return symmetrize(gens, [1] * len(m), cl.one())


def chevalley_quantize(x: Element, cl: CliffordAlgebra) -> Element:
    """Symmetrization wedge(V) -> Cl(V), monomial by monomial."""
    acc: dict = {}
    cache = cl.__dict__.setdefault("_q_cache", {})
    for m, c in x.terms.items():
        img = cache.get(m)
        if img is None:
            img = cache[m] = _quantize_monomial(cl, m)
        add_into(acc, img.terms, c)
    return Element(cl, acc)


def cl_symbol(y: Element, ext: ExteriorAlgebra | None = None) -> Element:
    """Inverse of chevalley_quantize by degree-descending elimination."""
    cl = y.algebra
    ext = ext or cl.exterior()
    out: dict = {}
    rest = Element(cl, dict(y.terms))
    while rest:
        top = max(len(m) for m in rest.terms)
        lead = {m: c for m, c in rest.terms.items() if len(m) == top}
        add_into(out, lead)
        rest = rest - chevalley_quantize(Element(ext, lead), cl)
    return Element(ext, out)


def gamma(L: QuadraticLieAlgebra, zeta) -> Element:
    """gamma(zeta) = 1/2 sum_a [zeta, e_a] e^a in Cl(g)."""
    if not L.nondegenerate:
        raise ValueError("gamma needs a nondegenerate form")
    cl = clifford(L)
    out = cl.zero()
    for a in range(L.dim):
        br = L.bracket(zeta, L.basis_vector(a))
        if any(br):
            out = out + cl.linear(br) * cl.linear(L.dual_vector(a))
    return out.scale(Fraction(1, 2))


def lambda_map(L: QuadraticLieAlgebra, mu) -> Element:
    """lambda(mu) in wedge^2 g*, characterized by iota_xi lambda(mu) = -ad*_xi mu.

    Here ad*_xi is the transpose mu -> mu o ad_xi, so the contraction is
    -mu o ad_xi = coadjoint(L, xi, mu) and lambda(mu) = -1/2 sum mu([e_a, e_c]) mu^a mu^c.
    """
    ext = exterior_dual(L)
    out: dict = {}
    for a in range(L.dim):
        for c in range(a + 1, L.dim):
            v = sum((mu[k] * x for k, x in L.c[a][c].items()), Fraction(0))
            if v:
                out[(a, c)] = -v
    return Element(ext, out)


def to_vectors(L: QuadraticLieAlgebra, x: Element) -> Element:
    """B-identification wedge(g*) -> wedge(g), mu^a -> e^a."""
    ext = exterior(L)
    images = [ext.linear(L.dual_vector(a)) for a in range(L.dim)]
    acc: dict = {}
    for m, c in x.terms.items():
        img = ext.one()
        for i in m:
            img = img * images[i]
        add_into(acc, img.terms, c)
    return Element(ext, acc)


def coadjoint(L: QuadraticLieAlgebra, xi, mu):
    """The coadjoint action -mu o ad_xi (minus the transpose of ad_xi), as dual coordinates."""
    return [-sum((mu[k] * sum(xi[a] * L.c[a][b].get(k, 0) for a in range(L.dim))
                  for k in range(L.dim)), Fraction(0)) for b in range(L.dim)]


# -- contractions ----------------------------------------------------------------

def _contract_gen(a, m, pairing):
    """iota of generator a on an increasing monomial (odd derivation)."""
    out: dict = {}
    for p, j in enumerate(m):
        v = pairing[a][j] if pairing is not None else Fraction(int(a == j))
        if v:
            r = m[:p] + m[p + 1:]
            out[r] = out.get(r, 0) + (-v if p % 2 else v)
    return {k: w for k, w in out.items() if w}


def contract(form: Element, x: Element, pairing=None) -> Element:
    """iota(form) x with iota(alpha ^ beta) = iota(alpha) o iota(beta).

    Generators of ``form`` act by odd derivations; ``pairing[a][b]`` is the
    value of generator a on generator b (identity when omitted).
    """
    acc: dict = {}
    for fm, fc in form.terms.items():
        cur = dict(x.terms)
        for a in reversed(fm):
            nxt: dict = {}
            for m, c in cur.items():
                add_into(nxt, _contract_gen(a, m, pairing), c)
            cur = nxt
            if not cur:
                break
        add_into(acc, cur, fc)
    return Element(x.algebra, acc)


def exterior_exp(x: Element) -> Element:
    """exp of an even nilpotent element of an exterior algebra."""
    alg = x.algebra
    out = alg.one()
    power = alg.one()
    k = 0
    while True:
        k += 1
        power = (power * x).scale(Fraction(1, k))
        if not power:
            return out
        out = out + power


def skew_lambda_dual(ext_dual: ExteriorAlgebra, A) -> Element:
    """lambda(A) = 1/2 sum_b A(e_b) ^ e^b for A: V -> V*, in wedge^2 V*."""
    n = len(A)
    return Element(ext_dual, {(a, b): Fraction(A[a][b]) for a in range(n)
                              for b in range(a + 1, n) if A[a][b]})


def skew_lambda(ext: ExteriorAlgebra, Bm) -> Element:
    """lambda(B) = 1/2 sum_a B(e^a) ^ e_a for B: V* -> V, in wedge^2 V."""
    n = len(Bm)
    return Element(ext, {(c, a): Fraction(Bm[c][a]) for c in range(n)
                         for a in range(c + 1, n) if Bm[c][a]})


@dataclass
class ContractionResult:
    scalar: Fraction
    quadratic: Element
    determinant: Fraction
    lhs: Element
    rhs: Element

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs and self.scalar ** 2 == self.determinant


def contract_exponentials(A, Bm) -> ContractionResult:
    """iota(exp lambda(A)) exp lambda(B) versus s * exp lambda(B (I + AB)^-1).

    ``A[a][b]`` is the mu^a-coefficient of A(e_b) and ``Bm[c][a]`` the
    e_c-coefficient of B(mu^a); both must be skew.
    """
    A = linalg.as_matrix(A)
    Bm = linalg.as_matrix(Bm)
    n = len(A)
    for M, nm in ((A, "A"), (Bm, "B")):
        if any(M[i][j] != -M[j][i] for i in range(n) for j in range(n)):
            raise ValueError(f"{nm} is not skew")
    V = ExteriorAlgebra(n, [f"v{i}" for i in range(n)], "wedgeV")
    Vd = ExteriorAlgebra(n, [f"v{i}*" for i in range(n)], "wedgeV*")
    lhs = contract(exterior_exp(skew_lambda_dual(Vd, A)), exterior_exp(skew_lambda(V, Bm)))
    M = linalg.matadd(linalg.identity(n), linalg.matmul(A, Bm))
    d = linalg.det(M)
    if d == 0:
        raise ZeroDivisionError("I + AB is singular")
    newB = linalg.matmul(Bm, linalg.inverse(M))
    s = lhs.constant()
    quad = skew_lambda(V, newB)
    rhs = exterior_exp(quad).scale(s)
    return ContractionResult(s, quad, d, lhs, rhs)


def gamma_checks(L: QuadraticLieAlgebra) -> list:
    """gamma is a Lie algebra map into Cl(g) and [gamma(zeta), .] = ad_zeta on Cl(g)."""
    cl = clifford(L)
    n = L.dim
    gs = [gamma(L, L.basis_vector(a)) for a in range(n)]
    bad = None
    for a in range(n):
        for b in range(a + 1, n):
            lhs = cl.supercommutator(gs[a], gs[b])
            rhs = gamma(L, L.bracket(L.basis_vector(a), L.basis_vector(b)))
            if lhs != rhs:
                bad = ((L.names[a], L.names[b]), lhs, rhs)
                break
        if bad:
            break
    out = [Check("gamma([x, y]) = [gamma(x), gamma(y)]", bad is None, bad)]
    ext = cl.exterior()
    bad = None
    for a in range(n):
        xi = L.basis_vector(a)
        images = [cl.linear(L.bracket(xi, L.basis_vector(j))) for j in range(n)]
        for m in ext.all_monomials():
            x = cl.word(m)
            lhs = cl.supercommutator(gs[a], x)
            rhs = cl.zero()
            for p in range(len(m)):
                rhs = rhs + cl.word(m[:p]) * images[m[p]] * cl.word(m[p + 1:])
            if lhs != rhs:
                bad = (L.names[a], cl.format_monomial(m), lhs, rhs)
                break
        if bad:
            break
    out.append(Check("[gamma(zeta), .] = L_zeta on Cl(g)", bad is None, bad))
    return out
