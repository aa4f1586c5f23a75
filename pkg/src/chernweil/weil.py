"""The commutative Weil algebra W(g), the noncommutative Weil algebra
U(g) (x) Cl(g), the quantization map between them, the cubic Dirac element,
and the convolution calculus used to build explicit homotopies between
characteristic homomorphisms.

W(g) lives in two presentations on the same index set (the dual basis mu^a):

* curvature coordinates: odd mu^a and even mu^a^ (horizontal);
* Koszul coordinates: odd mu^a and even mubar^a = d mu^a.

They are related by mubar = mu^ + lambda(mu).  Elements of ``WeilAlgebra``
are in curvature coordinates; ``WeilAlgebra.koszul`` is the other one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .clifford import (ExteriorAlgebra, chevalley_quantize, clifford, contract,
                       gamma)
from .core import (Algebra, Element, TensorAlgebra, add_into, symmetrize)
from .enveloping import (apply_dual_operator, casimir, duflo_factor, enveloping,
                         series_tables, sym_U, symmetric)
from .liealg import Check, QuadraticLieAlgebra, ad_power_matrices


def _merge_sign(a, b):
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return -1 if inv % 2 else 1


class SuperPolyAlgebra(Algebra):
    """S(V_even) (x) wedge(V_odd) on n + n generators.

    Monomials are pairs (sorted tuple of even indices, increasing tuple of
    odd indices) standing for the product evens * odds.
    """

    one_monomial = ((), ())

    def __init__(self, n, even_names, odd_names, label):
        self.n = n
        self.even_names = list(even_names)
        self.odd_names = list(odd_names)
        self.label = label
        self.key = (label,)

    def mul_monomials(self, a, b):
        if set(a[1]) & set(b[1]):
            return {}
        return {(tuple(sorted(a[0] + b[0])), tuple(sorted(a[1] + b[1]))):
                Fraction(_merge_sign(a[1], b[1]))}

    def parity(self, m):
        return len(m[1]) % 2

    def sort_key(self, m):
        return (len(m[0]) + len(m[1]), m)

    def format_monomial(self, m):
        parts = [self.even_names[i] for i in m[0]] + [self.odd_names[j] for j in m[1]]
        return "*".join(parts) or "1"

    @staticmethod
    def word_length(m):
        return len(m[0]) + len(m[1])

    def even(self, i) -> Element:
        return Element(self, {((i,), ()): Fraction(1)})

    def odd(self, i) -> Element:
        return Element(self, {((), (i,)): Fraction(1)})

    def even_linear(self, v) -> Element:
        return Element(self, {((i,), ()): Fraction(c) for i, c in enumerate(v) if c})

    def odd_linear(self, v) -> Element:
        return Element(self, {((), (i,)): Fraction(c) for i, c in enumerate(v) if c})

    def monomials(self, max_length, min_length=0):
        """All normal-form monomials with word length in the given range."""
        from itertools import combinations, combinations_with_replacement
        out = []
        for k in range(min_length, max_length + 1):
            for j in range(0, min(k, self.n) + 1):
                for ev in combinations_with_replacement(range(self.n), k - j):
                    for od in combinations(range(self.n), j):
                        out.append((ev, od))
        return out

    def derivation(self, gen_image):
        """Extend ``gen_image(("e"|"o", i)) -> Element`` to a derivation.

        On a monomial, moving D(g) to the front costs (-1)^p for the odd
        generator at position p and nothing for even ones, whatever the
        parity of D.
        """
        cache: dict = {}
        images: dict = {}

        def img(g):
            if g not in images:
                images[g] = gen_image(g)
            return images[g]

        def on_monomial(m):
            hit = cache.get(m)
            if hit is not None:
                return hit
            ev, od = m
            acc: dict = {}
            seen = set()
            for pos, i in enumerate(ev):
                if i in seen:
                    continue
                seen.add(i)
                g = img(("e", i))
                if g:
                    rest = Element(self, {(ev[:pos] + ev[pos + 1:], od): Fraction(1)})
                    add_into(acc, (g * rest).terms, ev.count(i))
            for p, j in enumerate(od):
                g = img(("o", j))
                if g:
                    rest = Element(self, {(ev, od[:p] + od[p + 1:]): Fraction(1)})
                    add_into(acc, (g * rest).terms, -1 if p % 2 else 1)
            res = cache[m] = Element(self, acc)
            return res

        def op(x: Element) -> Element:
            acc: dict = {}
            for m, c in x.terms.items():
                add_into(acc, on_monomial(m).terms, c)
            return Element(self, acc)

        op.on_monomial = on_monomial
        return op

    def substitute(self, x: Element, even_images, odd_images, target) -> Element:
        """Algebra map given on generators (images of the evens must be even)."""
        cache: dict = {}
        acc: dict = {}
        for m, c in x.terms.items():
            ev, od = m
            img = cache.get(ev)
            if img is None:
                img = target.one()
                for i in ev:
                    img = img * even_images[i]
                cache[ev] = img
            for j in od:
                img = img * odd_images[j]
            add_into(acc, img.terms, c)
        return Element(target, acc)


def _vec(L, xi):
    if isinstance(xi, int):
        return L.basis_vector(xi)
    return [Fraction(x) for x in xi]


class WeilAlgebra(SuperPolyAlgebra):
    """W(g) = S(g*) (x) wedge(g*) in curvature coordinates (mu^, mu)."""

    def __init__(self, L: QuadraticLieAlgebra):
        n = L.dim
        star = [f"{nm}*" for nm in L.names]
        super().__init__(n, [f"{s}^" for s in star], star, label=f"W:{L.name}:{id(L)}")
        self.L = L
        self.koszul = SuperPolyAlgebra(n, [f"{s}~" for s in star], star,
                                       label=f"Wk:{L.name}:{id(L)}")
        self._ops: dict = {}
        self._conv: dict = {}

    # -- structure maps ------------------------------------------------------
    def lam(self, a, alg=None) -> Element:
        """lambda(mu^a) = -sum_{b<c} f_bc^a mu^b mu^c (odd generators of ``alg``)."""
        alg = alg or self
        L = self.L
        out = {}
        for b in range(L.dim):
            for c in range(b + 1, L.dim):
                v = L.c[b][c].get(a, 0)
                if v:
                    out[((), (b, c))] = -Fraction(v)
        return Element(alg, out)

    def coadjoint_image(self, i, a, kind, alg=None) -> Element:
        """L_{e_i} applied to generator a of the given kind: -sum_b f_ib^a g^b."""
        alg = alg or self
        L = self.L
        out = {}
        for b in range(L.dim):
            v = L.c[i][b].get(a, 0)
            if v:
                key = ((b,), ()) if kind == "e" else ((), (b,))
                out[key] = -Fraction(v)
        return Element(alg, out)

    def _op(self, key, build):
        op = self._ops.get(key)
        if op is None:
            op = self._ops[key] = build()
        return op

    # -- curvature coordinates -------------------------------------------------
    def d(self, x: Element) -> Element:
        def build():
            dmu = {}

            def gen(g):
                kind, a = g
                if kind == "o":
                    if a not in dmu:
                        dmu[a] = self.even(a) + self.lam(a)
                    return dmu[a]
                return -inner(self.lam(a))

            inner = self.derivation(gen)
            return inner
        return self._op("d", build)(x)

    def iota(self, xi, x: Element) -> Element:
        v = _vec(self.L, xi)
        key = ("i", tuple(v))

        def build():
            def gen(g):
                kind, a = g
                if kind == "o" and v[a]:
                    return self.scalar(v[a])
                return self.zero()
            return self.derivation(gen)
        return self._op(key, build)(x)

    def lie(self, xi, x: Element) -> Element:
        v = _vec(self.L, xi)
        key = ("L", tuple(v))

        def build():
            def gen(g):
                kind, a = g
                out = self.zero()
                for i, c in enumerate(v):
                    if c:
                        out = out + self.coadjoint_image(i, a, kind).scale(c)
                return out
            return self.derivation(gen)
        return self._op(key, build)(x)

    def connection(self, a) -> Element:
        return self.odd(a)

    def curvature(self, a) -> Element:
        return self.even(a)

    # -- Koszul coordinates ---------------------------------------------------
    def to_koszul(self, x: Element) -> Element:
        K = self.koszul
        ev = [K.even(a) - self.lam(a, K) for a in range(self.n)]
        od = [K.odd(a) for a in range(self.n)]
        return self.substitute(x, ev, od, K)

    def from_koszul(self, y: Element) -> Element:
        ev = [self.even(a) + self.lam(a) for a in range(self.n)]
        od = [self.odd(a) for a in range(self.n)]
        return self.koszul.substitute(y, ev, od, self)

    def kd(self, y: Element) -> Element:
        K = self.koszul

        def build():
            return K.derivation(lambda g: K.even(g[1]) if g[0] == "o" else K.zero())
        return self._op("kd", build)(y)

    def ks(self, y: Element) -> Element:
        K = self.koszul

        def build():
            return K.derivation(lambda g: K.odd(g[1]) if g[0] == "e" else K.zero())
        return self._op("ks", build)(y)

    def kiota(self, xi, y: Element, t=1) -> Element:
        """Deformed contraction: mu -> t <mu, xi>, mubar -> L_xi mu."""
        K = self.koszul
        v = _vec(self.L, xi)
        t = Fraction(t)
        key = ("ki", tuple(v), t)

        def build():
            def gen(g):
                kind, a = g
                if kind == "o":
                    return K.scalar(t * v[a])
                out = K.zero()
                for i, c in enumerate(v):
                    if c:
                        out = out + self.coadjoint_image(i, a, "o", K).scale(c)
                return out
            return K.derivation(gen)
        return self._op(key, build)(y)

    def klie(self, xi, y: Element) -> Element:
        K = self.koszul
        v = _vec(self.L, xi)
        key = ("kL", tuple(v))

        def build():
            def gen(g):
                kind, a = g
                out = K.zero()
                for i, c in enumerate(v):
                    if c:
                        out = out + self.coadjoint_image(i, a, kind, K).scale(c)
                return out
            return K.derivation(gen)
        return self._op(key, build)(y)

    def koszul_homotopy(self, y: Element) -> Element:
        """h = s / (word length) on positive word length, h(1) = 0."""
        K = self.koszul
        acc: dict = {}
        for m, c in y.terms.items():
            k = K.word_length(m)
            if k:
                add_into(acc, self.ks(Element(K, {m: Fraction(1)})).terms, c / k)
        return Element(K, acc)

    def counit(self, x: Element) -> Fraction:
        return x.constant()

    def coproduct(self, y: Element) -> Element:
        """Delta on the Koszul presentation, as an element of Wk (x) Wk."""
        T = self.tensor_square()
        acc: dict = {}
        for m, c in y.terms.items():
            add_into(acc, self._coproduct_monomial(m), c)
        return Element(T, acc)

    def tensor_square(self) -> TensorAlgebra:
        if "T" not in self._conv:
            self._conv["T"] = TensorAlgebra(self.koszul, self.koszul)
        return self._conv["T"]

    def _coproduct_monomial(self, m):
        hit = self._conv.get(("D", m))
        if hit is not None:
            return hit
        ev, od = m
        gens = [(0, i) for i in ev] + [(1, j) for j in od]
        k = len(gens)
        out: dict = {}
        for mask in range(1 << k):
            left_e, left_o, right_e, right_o = [], [], [], []
            sign = 1
            odd_right = 0
            for p, (par, i) in enumerate(gens):
                if mask >> p & 1:
                    if par:
                        left_o.append(i)
                        if odd_right % 2:
                            sign = -sign
                    else:
                        left_e.append(i)
                else:
                    if par:
                        right_o.append(i)
                        odd_right += 1
                    else:
                        right_e.append(i)
            key = ((tuple(left_e), tuple(left_o)), (tuple(right_e), tuple(right_o)))
            v = out.get(key, 0) + sign
            if v:
                out[key] = v
            else:
                out.pop(key)
        out = {key: Fraction(v) for key, v in out.items()}
        self._conv[("D", m)] = out
        return out


def weil_algebra(L: QuadraticLieAlgebra) -> WeilAlgebra:
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "W" not in cache:
        cache["W"] = WeilAlgebra(L)
    return cache["W"]


def weil_ops(L: QuadraticLieAlgebra):
    """(d, iota, lie) on W(g) in curvature coordinates."""
    W = weil_algebra(L)
    return W.d, W.iota, W.lie


def koszul_homotopy(x: Element) -> Element:
    """The standard homotopy, applied to an element in curvature coordinates."""
    W = x.algebra
    return W.from_koszul(W.koszul_homotopy(W.to_koszul(x)))


def _hat_casimir(L, W):
    """sum_a e^_a e^^a written in curvature coordinates, i.e. sum B_ab mu^b^ mu^a^."""
    out = W.zero()
    for a in range(L.dim):
        for b in range(L.dim):
            if L.B[a][b]:
                out = out + (W.even(b) * W.even(a)).scale(L.B[a][b])
    return out


@dataclass
class TransgressionReport:
    via_homotopy: Element
    closed_form: Element
    differential: Element
    target: Element

    @property
    def ok(self) -> bool:
        return self.via_homotopy == self.closed_form and self.differential == self.target


def transgression(L: QuadraticLieAlgebra) -> TransgressionReport:
    """D = h(sum e^_a e^^a) against sum ebar_a e^a - 2/3 sum lambda(e_a) e^a."""
    if not L.nondegenerate:
        raise ValueError("transgression needs a nondegenerate form")
    W = weil_algebra(L)
    target = _hat_casimir(L, W)
    via_h = koszul_homotopy(target)
    closed = W.zero()
    for a in range(L.dim):
        for b in range(L.dim):
            if L.B[a][b]:
                bar_b = W.even(b) + W.lam(b)
                closed = closed + (bar_b * W.odd(a)).scale(L.B[a][b])
                closed = closed - (W.lam(b) * W.odd(a)).scale(Fraction(2, 3) * L.B[a][b])
    return TransgressionReport(via_h, closed, W.d(via_h), target)


# -- noncommutative Weil algebra ------------------------------------------------

class NCWeilAlgebra(Algebra):
    """U(g) (x) Cl(g); monomials (PBW tuple of hat generators, Clifford tuple)."""

    one_monomial = ((), ())

    def __init__(self, L: QuadraticLieAlgebra):
        if not L.nondegenerate:
            raise ValueError("the noncommutative Weil algebra needs a nondegenerate form")
        self.L = L
        self.U = enveloping(L)
        self.cl = clifford(L)
        self.key = (f"NCW:{L.name}:{id(L)}",)
        self._mm = lru_cache(maxsize=None)(self._mul_monomials)
        self.sym_cache: dict = {}
        self._dirac = None

    def _mul_monomials(self, a, b):
        cpart = self.cl.mul_monomials(a[1], b[1])
        if not cpart:
            return {}
        upart = self.U.mul_monomials(a[0], b[0])
        return {(u, c): cu * cc for u, cu in upart.items() for c, cc in cpart.items()}

    def mul_monomials(self, a, b):
        return self._mm(a, b)

    def parity(self, m):
        return len(m[1]) % 2

    def sort_key(self, m):
        return (len(m[0]) + len(m[1]), m)

    def format_monomial(self, m):
        u = "*".join(self.L.names[i] + "^" for i in m[0])
        c = "*".join(self.L.names[i] for i in m[1])
        return "*".join(p for p in (u, c) if p) or "1"

    def from_U(self, u: Element) -> Element:
        return Element(self, {(m, ()): c for m, c in u.terms.items()})

    def from_cl(self, x: Element) -> Element:
        return Element(self, {((), m): c for m, c in x.terms.items()})

    def hat(self, v) -> Element:
        return Element(self, {((i,), ()): Fraction(c) for i, c in enumerate(v) if c})

    def odd(self, v) -> Element:
        return Element(self, {((), (i,)): Fraction(c) for i, c in enumerate(v) if c})

    def gamma(self, v) -> Element:
        return self.from_cl(gamma(self.L, v))

    def bar(self, v) -> Element:
        """zetabar = zeta^ + gamma(zeta)."""
        return self.hat(v) + self.gamma(v)

    def commutator(self, x, y):
        return self.supercommutator(x, y)

    def dirac(self) -> Element:
        if self._dirac is None:
            L = self.L
            out = self.zero()
            for a in range(L.dim):
                ea = L.basis_vector(a)
                dual = self.odd(L.dual_vector(a))
                out = out + self.bar(ea) * dual
                out = out - (self.gamma(ea) * dual).scale(Fraction(2, 3))
            self._dirac = out
        return self._dirac

    def iota(self, xi, x: Element) -> Element:
        return self.supercommutator(self.odd(_vec(self.L, xi)), x)

    def lie(self, xi, x: Element) -> Element:
        return self.supercommutator(self.bar(_vec(self.L, xi)), x)

    def d(self, x: Element) -> Element:
        return self.supercommutator(self.dirac(), x)


def ncweil(L: QuadraticLieAlgebra) -> NCWeilAlgebra:
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "NCW" not in cache:
        cache["NCW"] = NCWeilAlgebra(L)
    return cache["NCW"]


def ncweil_mul(x: Element, y: Element) -> Element:
    return x * y


def dirac(L: QuadraticLieAlgebra) -> Element:
    return ncweil(L).dirac()


def ncweil_ops(L: QuadraticLieAlgebra):
    """(d, iota, lie) on the noncommutative Weil algebra."""
    A = ncweil(L)
    return A.d, A.iota, A.lie


@dataclass
class DiracSquareReport:
    square: Element
    expected: Element
    trace: Fraction
    quantized_casimir: Element
    expected_quantized_casimir: Element

    @property
    def ok(self) -> bool:
        return (self.square == self.expected
                and self.quantized_casimir == self.expected_quantized_casimir)


def dirac_square_check(L: QuadraticLieAlgebra) -> DiracSquareReport:
    A = ncweil(L)
    D = A.dirac()
    cas, tr = casimir(L)
    expected = A.from_U(cas).scale(Fraction(1, 2)) + A.scalar(tr / 48)
    W = weil_algebra(L)
    qc = quantize(L, _hat_casimir(L, W))
    return DiracSquareReport(D * D, expected, tr, qc, A.from_U(cas) + A.scalar(tr / 24))


def quantize(L: QuadraticLieAlgebra, w: Element, cap=8) -> Element:
    """Q: W(g) -> U(g) (x) Cl(g), super-symmetrizing in Koszul generators.

    mu^a goes to the Clifford generator e^a and mubar^a to ebar^a.
    """
    A = ncweil(L)
    W = weil_algebra(L)
    y = W.to_koszul(w) if w.algebra.key == W.key else w
    bars = [A.bar(L.dual_vector(a)) for a in range(L.dim)]
    odds = [A.odd(L.dual_vector(a)) for a in range(L.dim)]
    acc: dict = {}
    for m, c in y.terms.items():
        ev, od = m
        factors = [bars[i] for i in ev] + [odds[j] for j in od]
        labels = [("b", i) for i in ev] + [("o", j) for j in od]
        parities = [0] * len(ev) + [1] * len(od)
        img = symmetrize(factors, parities, A.one(), labels=labels,
                         cache=A.sym_cache, cap=cap)
        add_into(acc, img.terms, c)
    return Element(A, acc)


def quantization_chain_checks(L: QuadraticLieAlgebra, max_length: int) -> list:
    """Q intertwines d, iota_i and L_i on Koszul monomials up to ``max_length``."""
    W = weil_algebra(L)
    K = W.koszul
    A = ncweil(L)
    bad = {"d": None, "iota": None, "lie": None}
    for m in K.monomials(max_length):
        y = Element(K, {m: Fraction(1)})
        q = quantize(L, y)
        if bad["d"] is None and quantize(L, W.kd(y)) != A.d(q):
            bad["d"] = K.format_monomial(m)
        for i in range(L.dim):
            if bad["iota"] is None and quantize(L, W.kiota(i, y)) != A.iota(i, q):
                bad["iota"] = (L.names[i], K.format_monomial(m))
            if bad["lie"] is None and quantize(L, W.klie(i, y)) != A.lie(i, q):
                bad["lie"] = (L.names[i], K.format_monomial(m))
    return [Check("Q(dw) = dQ(w)", bad["d"] is None, bad["d"]),
            Check("Q(iota w) = iota Q(w)", bad["iota"] is None, bad["iota"]),
            Check("Q(L w) = L Q(w)", bad["lie"] is None, bad["lie"])]


def dirac_checks(L: QuadraticLieAlgebra) -> list:
    """[D, zeta] = zetabar, [D, zetabar] = 0 and D is invariant."""
    A = ncweil(L)
    D = A.dirac()
    out = []
    bad = None
    for i in range(L.dim):
        v = L.basis_vector(i)
        if A.supercommutator(D, A.odd(v)) != A.bar(v):
            bad = L.names[i]
            break
    out.append(Check("[D, zeta] = zetabar", bad is None, bad))
    bad = None
    for i in range(L.dim):
        if A.supercommutator(D, A.bar(L.basis_vector(i))):
            bad = L.names[i]
            break
    out.append(Check("[D, zetabar] = 0", bad is None, bad))
    bad = next((L.names[i] for i in range(L.dim) if A.lie(i, D)), None)
    out.append(Check("D is invariant", bad is None, bad))
    return out


# -- factorization of Q through the Duflo-type operator --------------------------

@dataclass
class FactorizationReport:
    max_degree: int
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _vector_weil(L):
    """S(g) (x) wedge(g) in g-coordinates (hat generators and odd generators)."""
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "Wg" not in cache:
        cache["Wg"] = SuperPolyAlgebra(L.dim, [f"{nm}^" for nm in L.names], L.names,
                                       label=f"Wg:{L.name}:{id(L)}")
    return cache["Wg"]


def duflo_kernel(L: QuadraticLieAlgebra, M: int) -> Element:
    """S(xi) = J^{1/2}(xi) exp(r(xi)) in S(g*) (x) wedge(g), polynomial degree <= M.

    r(xi) = lambda((ln j)'(ad_xi)) with lambda(A) = 1/2 sum_a A(e_a) ^ e^a.
    """
    S = L.dual_coordinates
    ext = ExteriorAlgebra(L.dim, L.names, label=f"wedge-k:{L.name}:{id(L)}")
    T = TensorAlgebra(S, ext)
    half_j = duflo_factor(L, M).poly
    out = T.tensor(half_j, ext.one())
    if M < 1:
        return out
    table = series_tables(max(M, 2))
    odd_powers = [k for k in range(1, M + 1, 2) if table.c(k)]
    mats = ad_power_matrices(L, odd_powers) if odd_powers else {}
    Binv = L.B_inv
    n = L.dim
    r: dict = {}
    for k in odd_powers:
        R = mats[k]
        ck = table.c(k)
        for b in range(n):
            for a in range(n):
                if not R[b][a]:
                    continue
                for c in range(n):
                    if not Binv[a][c] or b == c:
                        continue
                    w = (b, c) if b < c else (c, b)
                    sgn = 1 if b < c else -1
                    for pm, pc in R[b][a].items():
                        key = (pm, w)
                        v = r.get(key, 0) + sgn * ck * pc * Binv[a][c] / 2
                        if v:
                            r[key] = v
                        else:
                            r.pop(key)
    r_el = Element(T, r)
    power = T.one()
    k = 0
    exp_r = T.one()
    while True:
        k += 1
        power = (power * r_el).filter(lambda m: len(m[0]) <= M).scale(Fraction(1, k))
        if not power:
            break
        exp_r = exp_r + power
    return (out * exp_r).filter(lambda m: len(m[0]) <= M)


def _apply_kernel(L, kernel: Element, x: Element) -> Element:
    """iota^(S) on S(g) (x) wedge(g), result in U(g) (x) Cl(g) after sym_U (x) q."""
    A = ncweil(L)
    Sg = symmetric(L)
    T = kernel.algebra
    ext = T.B
    acc: dict = {}
    for (ev, od), c in x.terms.items():
        hat_part = Element(Sg, {ev: Fraction(1)})
        odd_part = Element(ext, {od: Fraction(1)})
        hat_img: dict = {}
        odd_img: dict = {}
        for (pm, wm), kc in kernel.terms.items():
            if len(pm) > len(ev) or len(wm) > len(od):
                continue
            h = hat_img.get(pm)
            if h is None:
                h = hat_img[pm] = apply_dual_operator(Element(T.A, {pm: Fraction(1)}), hat_part)
            if not h:
                continue
            o = odd_img.get(wm)
            if o is None:
                o = odd_img[wm] = contract(Element(ext, {wm: Fraction(1)}), odd_part,
                                           pairing=L.B)
            if not o:
                continue
            u = sym_U(h, A.U)
            q = chevalley_quantize(Element(A.cl, dict(o.terms)), A.cl)
            for um, uc in u.terms.items():
                for qm, qc in q.terms.items():
                    key = (um, qm)
                    v = acc.get(key, 0) + c * kc * uc * qc
                    if v:
                        acc[key] = v
                    else:
                        acc.pop(key)
    return Element(A, acc)


def duflo_factorization_check(L: QuadraticLieAlgebra, max_deg: int) -> FactorizationReport:
    """Compare Q with (sym_U (x) q) o iota^(S) on all monomials of degree <= max_deg.

    Degree counts hat generators and odd generators alike.
    """
    W = weil_algebra(L)
    Wg = _vector_weil(L)
    kernel = duflo_kernel(L, max_deg)
    Binv = L.B_inv
    to_g_even = [Wg.even_linear(Binv[a]) for a in range(L.dim)]
    to_g_odd = [Wg.odd_linear(Binv[a]) for a in range(L.dim)]
    report = FactorizationReport(max_deg, 0)
    for m in W.monomials(max_deg):
        w = Element(W, {m: Fraction(1)})
        lhs = quantize(L, w)
        xg = W.substitute(w, to_g_even, to_g_odd, Wg)
        rhs = _apply_kernel(L, kernel, xg)
        report.checked += 1
        if lhs != rhs:
            report.failures.append((W.format_monomial(m), lhs, rhs))
    return report


# -- g-differential algebras and the convolution calculus -------------------------

class GDA:
    """A g-differential algebra with a connection, operations memoized per monomial.

    Subclasses provide ``algebra``, ``L`` and the monomial-level maps
    ``_d_mono``, ``_iota_mono``, ``_lie_mono`` and ``theta``.
    """

    def __init__(self, L, algebra):
        self.L = L
        self.algebra = algebra
        self._memo: dict = {}

    def _lin(self, key, fn, x: Element) -> Element:
        memo = self._memo.setdefault(key, {})
        acc: dict = {}
        for m, c in x.terms.items():
            img = memo.get(m)
            if img is None:
                img = memo[m] = fn(m)
            add_into(acc, img.terms, c)
        return Element(self.algebra, acc)

    def unit(self) -> Element:
        return self.algebra.one()

    def mono(self, m) -> Element:
        return Element(self.algebra, {m: Fraction(1)})

    def d(self, x):
        return self._lin("d", self._d_mono, x)

    def iota(self, i, x):
        return self._lin(("i", i), lambda m: self._iota_mono(i, m), x)

    def lie(self, i, x):
        return self._lin(("L", i), lambda m: self._lie_mono(i, m), x)

    def theta(self, a) -> Element:
        raise ValueError(f"{type(self).__name__} has no connection")


class WeilGDA(GDA):
    """W(g) in Koszul coordinates with its tautological connection."""

    def __init__(self, L):
        self.W = weil_algebra(L)
        super().__init__(L, self.W.koszul)

    def _d_mono(self, m):
        return self.W.kd(self.mono(m))

    def _iota_mono(self, i, m):
        return self.W.kiota(i, self.mono(m))

    def _lie_mono(self, i, m):
        return self.W.klie(i, self.mono(m))

    def theta(self, a):
        return self.algebra.odd(a)


class NCWeilGDA(GDA):
    """U(g) (x) Cl(g) with inner derivations and the connection mu^a -> e^a."""

    def __init__(self, L):
        self.A = ncweil(L)
        super().__init__(L, self.A)

    def _d_mono(self, m):
        return self.A.d(self.mono(m))

    def _iota_mono(self, i, m):
        return self.A.iota(i, self.mono(m))

    def _lie_mono(self, i, m):
        return self.A.lie(i, self.mono(m))

    def theta(self, a):
        return self.A.odd(self.L.dual_vector(a))


class TensorGDA(GDA):
    """A (x) B with d(a (x) b) = da (x) b + (-1)^|a| a (x) db; ``connection``
    picks theta (x) 1 ("left") or 1 (x) theta ("right")."""

    def __init__(self, first: GDA, second: GDA, connection="left"):
        if connection not in ("left", "right"):
            raise ValueError("connection must be 'left' or 'right'")
        self.first = first
        self.second = second
        self.connection = connection
        super().__init__(first.L, TensorAlgebra(first.algebra, second.algebra))

    def with_connection(self, connection) -> "TensorGDA":
        other = TensorGDA.__new__(TensorGDA)
        other.__dict__.update(self.__dict__)
        other.connection = connection
        return other

    def _odd(self, op1, op2, m):
        a, b = m
        T = self.algebra
        A1 = self.first.mono(a)
        B1 = self.second.mono(b)
        out = T.tensor(op1(A1), B1)
        sign = -1 if T.A.parity(a) else 1
        return out + T.tensor(A1, op2(B1)).scale(sign)

    def _d_mono(self, m):
        return self._odd(self.first.d, self.second.d, m)

    def _iota_mono(self, i, m):
        return self._odd(lambda x: self.first.iota(i, x), lambda x: self.second.iota(i, x), m)

    def _lie_mono(self, i, m):
        a, b = m
        T = self.algebra
        A1 = self.first.mono(a)
        B1 = self.second.mono(b)
        return T.tensor(self.first.lie(i, A1), B1) + T.tensor(A1, self.second.lie(i, B1))

    def theta(self, a):
        T = self.algebra
        if self.connection == "left":
            return T.left(self.first.theta(a))
        return T.right(self.second.theta(a))


class TruncatedConvolutionMap:
    """A linear map W(g) -> target, given on Koszul monomials of length <= cap."""

    def __init__(self, weil: WeilAlgebra, target: GDA, cap: int, images: dict, parity=0):
        self.weil = weil
        self.target = target
        self.cap = cap
        self.images = images
        self.parity = parity % 2

    @classmethod
    def from_function(cls, weil, target, cap, fn, parity=0):
        return cls(weil, target, cap,
                   {m: fn(m) for m in weil.koszul.monomials(cap)}, parity)

    def __call__(self, y: Element) -> Element:
        acc: dict = {}
        for m, c in y.terms.items():
            img = self.images.get(m)
            if img is None:
                raise ValueError(f"monomial {m} is outside the truncation cap {self.cap}")
            add_into(acc, img.terms, c)
        return Element(self.target.algebra, acc)

    def _compatible(self, other):
        if self.cap != other.cap or self.target.algebra.key != other.target.algebra.key:
            raise ValueError("maps have different caps or targets")

    def __add__(self, other):
        self._compatible(other)
        return TruncatedConvolutionMap(self.weil, self.target, self.cap,
                                       {m: v + other.images[m] for m, v in self.images.items()},
                                       self.parity)

    def __sub__(self, other):
        self._compatible(other)
        return TruncatedConvolutionMap(self.weil, self.target, self.cap,
                                       {m: v - other.images[m] for m, v in self.images.items()},
                                       self.parity)

    def scale(self, c):
        return TruncatedConvolutionMap(self.weil, self.target, self.cap,
                                       {m: v.scale(c) for m, v in self.images.items()},
                                       self.parity)

    def agrees(self, other, max_length=None) -> bool:
        top = self.cap if max_length is None else max_length
        K = self.weil.koszul
        return all(self.images[m] == other.images[m]
                   for m in self.images if K.word_length(m) <= top)

    def is_zero(self, max_length=None) -> bool:
        top = self.cap if max_length is None else max_length
        K = self.weil.koszul
        return all(not v for m, v in self.images.items() if K.word_length(m) <= top)

    def compose(self, op, parity=0):
        """phi o op for a linear operator on the Koszul presentation."""
        K = self.weil.koszul
        return TruncatedConvolutionMap(
            self.weil, self.target, self.cap,
            {m: self(op(Element(K, {m: Fraction(1)}))) for m in self.images},
            self.parity + parity)


def unit_map(weil: WeilAlgebra, target: GDA, cap: int) -> TruncatedConvolutionMap:
    """1_L = i o pi."""
    one = target.unit()
    zero = target.algebra.zero()
    return TruncatedConvolutionMap.from_function(
        weil, target, cap, lambda m: one if m == ((), ()) else zero)


def convolution(phi1: TruncatedConvolutionMap, phi2: TruncatedConvolutionMap):
    phi1._compatible(phi2)
    W = phi1.weil
    K = W.koszul
    images = {}
    for m in phi1.images:
        acc = phi1.target.algebra.zero()
        for (m1, m2), c in W._coproduct_monomial(m).items():
            sign = -1 if (phi2.parity and K.parity(m1)) else 1
            a = phi1.images[m1]
            if not a:
                continue
            b = phi2.images[m2]
            if not b:
                continue
            acc = acc + (a * b).scale(sign * c)
        images[m] = acc
    return TruncatedConvolutionMap(W, phi1.target, phi1.cap, images,
                                   phi1.parity + phi2.parity)


def convolution_inverse(phi: TruncatedConvolutionMap) -> TruncatedConvolutionMap:
    """phi^-1 = sum_N (-1)^N (phi - 1_L)^N, for phi(1) = 1."""
    one = unit_map(phi.weil, phi.target, phi.cap)
    if phi.images[((), ())] != phi.target.unit():
        raise ValueError("only maps sending 1 to 1 are inverted")
    u = phi - one
    out = one
    power = one
    for N in range(1, phi.cap + 1):
        power = convolution(power, u)
        out = out + power.scale((-1) ** N)
    return out


def deformed_contraction(phi: TruncatedConvolutionMap, t, i) -> TruncatedConvolutionMap:
    """iota^t_i(phi) = iota_i o phi - (-1)^|phi| phi o iota^t_i."""
    W = phi.weil
    K = W.koszul
    A = phi.target
    sign = -1 if phi.parity else 1
    images = {}
    for m, v in phi.images.items():
        images[m] = A.iota(i, v) - phi(W.kiota(i, Element(K, {m: Fraction(1)}), t)).scale(sign)
    return TruncatedConvolutionMap(W, A, phi.cap, images, phi.parity + 1)


def map_differential(phi: TruncatedConvolutionMap) -> TruncatedConvolutionMap:
    """d(phi) = d o phi - (-1)^|phi| phi o d."""
    W = phi.weil
    K = W.koszul
    A = phi.target
    sign = -1 if phi.parity else 1
    images = {m: A.d(v) - phi(W.kd(Element(K, {m: Fraction(1)}))).scale(sign)
              for m, v in phi.images.items()}
    return TruncatedConvolutionMap(W, A, phi.cap, images, phi.parity + 1)


def map_lie(phi: TruncatedConvolutionMap, i) -> TruncatedConvolutionMap:
    W = phi.weil
    K = W.koszul
    A = phi.target
    images = {m: A.lie(i, v) - phi(W.klie(i, Element(K, {m: Fraction(1)})))
              for m, v in phi.images.items()}
    return TruncatedConvolutionMap(W, A, phi.cap, images, phi.parity)


def characteristic_map(target: GDA, cap: int, theta=None) -> TruncatedConvolutionMap:
    """c^theta: mu -> theta(mu), mubar -> d theta(mu), symmetrized on words."""
    theta = theta or target.theta
    W = weil_algebra(target.L)
    n = W.n
    th = [theta(a) for a in range(n)]
    dth = [target.d(t) for t in th]
    cache: dict = {}
    one = target.unit()

    def image(m):
        ev, od = m
        factors = [dth[i] for i in ev] + [th[j] for j in od]
        labels = [("b", i) for i in ev] + [("o", j) for j in od]
        return symmetrize(factors, [0] * len(ev) + [1] * len(od), one,
                          labels=labels, cache=cache, cap=max(8, cap))

    return TruncatedConvolutionMap.from_function(W, target, cap, image)


def ds_hom_checks(phi: TruncatedConvolutionMap, max_length=None) -> list:
    """d, iota_i and L_i commute with phi on words of length <= max_length."""
    top = phi.cap if max_length is None else max_length
    n = phi.weil.n
    checks = []

    def vanish(name, psi):
        bad = [m for m, v in psi.images.items()
               if phi.weil.koszul.word_length(m) <= top and v]
        checks.append(Check(name, not bad, bad[0] if bad else None))

    vanish("d", map_differential(phi))
    for i in range(n):
        vanish(f"iota_{i}", deformed_contraction(phi, 1, i))
        vanish(f"lie_{i}", map_lie(phi, i))
    return checks


def rigidity_homotopy(c0: TruncatedConvolutionMap, c1: TruncatedConvolutionMap,
                      cap=None) -> TruncatedConvolutionMap:
    """psi with d(psi) = c0 - c1 and psi basic.

    With c = c0 - c1 and phi = c1 (invertible since phi(1) = 1):
    psi = ((c . phi^-1) o h) . phi.
    """
    c0._compatible(c1)
    if cap is not None and cap != c0.cap:
        raise ValueError("cap differs from the cap of the given maps")
    one = ((), ())
    if c0.images[one] != c1.images[one]:
        raise ValueError("c0 and c1 differ on the unit")
    W = c0.weil
    c = c0 - c1
    phi = c1
    x = convolution(c, convolution_inverse(phi))
    y = x.compose(W.koszul_homotopy, parity=1)
    return convolution(y, phi)


def rigidity_checks(psi, c0, c1, max_length=None) -> list:
    top = psi.cap - 1 if max_length is None else max_length
    K = psi.weil.koszul
    checks = []

    def compare(name, lhs, rhs):
        bad = [m for m in lhs.images if K.word_length(m) <= top
               and lhs.images[m] != rhs.images[m]]
        checks.append(Check(name, not bad, bad[0] if bad else None))

    zero = TruncatedConvolutionMap.from_function(
        psi.weil, psi.target, psi.cap, lambda m: psi.target.algebra.zero())
    compare("d(psi) = c0 - c1", map_differential(psi), c0 - c1)
    for i in range(psi.weil.n):
        compare(f"L_{i}(psi) = 0", map_lie(psi, i), zero)
        compare(f"iota_{i}(psi) = 0", deformed_contraction(psi, 1, i), zero)
    checks.append(Check("psi(1) = 0", not psi.images[((), ())], None))
    return checks
