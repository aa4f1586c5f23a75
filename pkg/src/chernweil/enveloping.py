"""Universal enveloping algebras in PBW normal form, symmetrization,
differential operators with constant coefficients, the Duflo factor and
the Duflo map."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import linalg
from .core import Algebra, Element, add_into, derivation_extend, symmetrize
from .liealg import Check, QuadraticLieAlgebra, ad_power_traces
from .symmetric import SymmetricAlgebra, exp_series


class EnvelopingAlgebra(Algebra):
    """U(g) with monomials = non-decreasing index tuples.

    Right multiplication by a generator is straightened recursively with
    e_i e_j = e_j e_i + [e_i, e_j] and memoized per instance.
    """

    def __init__(self, L: QuadraticLieAlgebra, label=None):
        self.L = L
        self.n = L.dim
        self.names = L.names
        self.label = label or f"U:{L.name}:{id(L)}"
        self.key = (self.label,)
        self._rmul = lru_cache(maxsize=None)(self._rmul_gen)
        self._mm = lru_cache(maxsize=None)(self._mul_monomials)
        self.sym_cache: dict = {}

    def _rmul_gen(self, mono, j):
        if not mono or mono[-1] <= j:
            return {mono + (j,): Fraction(1)}
        i = mono[-1]
        rest = mono[:-1]
        out: dict = {}
        for m, c in self._rmul(rest, j).items():
            add_into(out, self._rmul(m, i), c)
        for k, v in self.L.c[i][j].items():
            add_into(out, self._rmul(rest, k), v)
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
        return 0

    def format_monomial(self, m):
        if not m:
            return "1"
        out = []
        i = 0
        while i < len(m):
            j = i
            while j < len(m) and m[j] == m[i]:
                j += 1
            out.append(self.names[m[i]] + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return "*".join(out)

    def gen(self, i) -> Element:
        return Element(self, {(i,): Fraction(1)})

    def linear(self, coeffs) -> Element:
        return Element(self, {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})

    def word(self, indices) -> Element:
        return Element(self, dict(self._mul_monomials((), tuple(indices))))

    def commutator(self, x, y):
        return x * y - y * x


def enveloping(L: QuadraticLieAlgebra) -> EnvelopingAlgebra:
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "U" not in cache:
        cache["U"] = EnvelopingAlgebra(L)
    return cache["U"]


def symmetric(L: QuadraticLieAlgebra) -> SymmetricAlgebra:
    """S(g) on the basis e_a."""
    cache = L.__dict__.setdefault("_alg_cache", {})
    if "S" not in cache:
        cache["S"] = SymmetricAlgebra(L.dim, L.names, label=f"S:{L.name}:{id(L)}")
    return cache["S"]


def pbw_mul(x: Element, y: Element) -> Element:
    return x * y


def sym_U(p: Element, U: EnvelopingAlgebra) -> Element:
    """Symmetrization S(g) -> U(g): average of the products over all orderings."""
    acc: dict = {}
    for m, c in p.terms.items():
        gens = [U.gen(i) for i in m]
        img = symmetrize(gens, [0] * len(m), U.one(), labels=list(m),
                         cache=U.sym_cache, cap=max(8, len(m)))
        add_into(acc, img.terms, c)
    return Element(U, acc)


@dataclass(frozen=True)
class TruncatedDualSeries:
    """A polynomial on g (element of S(g*)) standing for a series cut at ``order``."""

    poly: Element
    order: int


def apply_dual_operator(F, p: Element) -> Element:
    """F^(p): each monomial mu^{a1}..mu^{am} of F acts as d_{a1} ... d_{am}."""
    poly = F.poly if isinstance(F, TruncatedDualSeries) else F
    S = p.algebra
    acc: dict = {}
    for fm, fc in poly.terms.items():
        cur = p
        for a in fm:
            cur = S.derivative(cur, a)
            if not cur:
                break
        add_into(acc, cur.terms, fc)
    return Element(S, acc)


@dataclass(frozen=True)
class SeriesTable:
    """Coefficients of ln j(z) (even powers) and (ln j)'(z) (odd powers)."""

    order: int
    j: dict
    ln_j: dict
    d_ln_j: dict

    def b(self, k):
        return self.ln_j.get(k, Fraction(0))

    def c(self, k):
        return self.d_ln_j.get(k, Fraction(0))


def _series_mul(p, q, order):
    out = [Fraction(0)] * (order + 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q[:order + 1 - i]):
                out[i + j] += a * b
    return out


@lru_cache(maxsize=None)
def series_tables(order: int) -> SeriesTable:
    """j(z) = sinh(z/2)/(z/2), ln j and (ln j)' as exact power series."""
    if order < 2:
        raise ValueError("series order must be at least 2")
    j = [Fraction(0)] * (order + 1)
    for k in range(0, order // 2 + 1):
        j[2 * k] = Fraction(1, 4 ** k * factorial(2 * k + 1))
    u = list(j)
    u[0] = Fraction(0)
    ln = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        power = _series_mul(power, u, order)
        if not any(power):
            break
        sign = 1 if n % 2 else -1
        for i in range(order + 1):
            ln[i] += sign * power[i] / n
    ln_j = {i: c for i, c in enumerate(ln) if c}
    d_ln_j = {i - 1: i * c for i, c in ln_j.items() if i - 1 <= order}
    return SeriesTable(order, {i: c for i, c in enumerate(j) if c}, ln_j, d_ln_j)


def duflo_factor(L: QuadraticLieAlgebra, M: int, support=None, block=None,
                 scale=1) -> TruncatedDualSeries:
    """J^{1/2} = exp(1/2 sum_k b_2k tr((scale ad)^2k)) up to degree M.

    ``support``/``block`` restrict xi to a coordinate subspace and the trace
    to a diagonal block (used for symmetric pairs).
    """
    S = L.dual_coordinates
    if M < 2:
        return TruncatedDualSeries(S.one(), M)
    table = series_tables(M)
    powers = {k for k in range(2, M + 1, 2)}
    traces = ad_power_traces(L, powers, support=support, block=block, scale=scale)
    log = S.zero()
    for k in sorted(powers):
        if traces[k]:
            log = log + Element(S, dict(traces[k])).scale(table.b(k) / 2)
    return TruncatedDualSeries(exp_series(S, log, M), M)


def duflo_map(L: QuadraticLieAlgebra, p: Element, M=None) -> Element:
    """sym_U o J^{1/2}^ : S(g) -> U(g).

    The operator only lowers degree, so truncating the series at deg(p)
    loses nothing.
    """
    if M is None:
        M = max(p.algebra.degree(p), 0)
    F = duflo_factor(L, M)
    return sym_U(apply_dual_operator(F, p), enveloping(L))


def casimir_polynomial(L: QuadraticLieAlgebra) -> Element:
    """sum_a e_a e^a in S(g)."""
    S = symmetric(L)
    out = S.zero()
    for a in range(L.dim):
        out = out + S.gen(a) * S.linear(L.dual_vector(a))
    return out


def casimir(L: QuadraticLieAlgebra):
    """(Cas = sum_a e_a e^a in U(g), tr of Cas in the adjoint representation)."""
    U = enveloping(L)
    cas = U.zero()
    trace = Fraction(0)
    for a in range(L.dim):
        dual = L.dual_vector(a)
        cas = cas + U.gen(a) * U.linear(dual)
        ad_a = L.ad_matrix(L.basis_vector(a))
        ad_d = L.ad_matrix(dual)
        trace += sum(linalg.matmul(ad_a, ad_d)[i][i] for i in range(L.dim))
    return cas, trace


def adjoint_action(L: QuadraticLieAlgebra, xi, x: Element) -> Element:
    """Derivation extension of ad_xi to S(g) or U(g)."""
    alg = x.algebra
    if isinstance(alg, EnvelopingAlgebra):
        v = alg.linear(xi)
        return v * x - x * v
    images = {}

    def img(g):
        if g not in images:
            images[g] = alg.linear(L.bracket(xi, L.basis_vector(g)))
        return images[g]

    return derivation_extend(alg, img, 0)(x)


def is_invariant(L: QuadraticLieAlgebra, x: Element, acting=None) -> bool:
    acting = range(L.dim) if acting is None else acting
    return all(not adjoint_action(L, L.basis_vector(a), x) for a in acting)


def invariant_polynomials(L: QuadraticLieAlgebra, degree: int, variables=None,
                          acting=None) -> list:
    """Basis of the homogeneous invariants of S^degree(span of ``variables``).

    ``acting`` (default: all of g) must preserve the span of ``variables``.
    """
    S = symmetric(L)
    variables = list(range(L.dim)) if variables is None else list(variables)
    acting = list(range(L.dim)) if acting is None else list(acting)
    sub = SymmetricAlgebra(len(variables))
    monos = [tuple(variables[i] for i in m) for m in sub.monomials(degree)]
    if not monos:
        return []
    rows_index: dict = {}
    columns = []
    for m in monos:
        col: dict = {}
        for a in acting:
            img = adjoint_action(L, L.basis_vector(a), Element(S, {m: Fraction(1)}))
            for mm, c in img.terms.items():
                key = (a, mm)
                if key not in rows_index:
                    rows_index[key] = len(rows_index)
                col[rows_index[key]] = c
        columns.append(col)
    mat = [[col.get(r, Fraction(0)) for col in columns] for r in range(len(rows_index))]
    basis = linalg.nullspace(mat, ncols=len(monos)) if mat else [
        [Fraction(int(i == j)) for i in range(len(monos))] for j in range(len(monos))]
    return [Element(S, {m: c for m, c in zip(monos, v) if c}) for v in basis]


def duflo_multiplicativity_check(L: QuadraticLieAlgebra, max_degree: int):
    """duflo_map(p q) = duflo_map(p) duflo_map(q) for p, q powers of the Casimir
    polynomial with deg p + deg q <= max_degree.

    Returns ``(Check, control_fails)``; the control is the same identity with
    sym_U in place of duflo_map.  ``control_fails`` is None when no pair fits
    within ``max_degree``.
    """
    U = enveloping(L)
    cas = casimir_polynomial(L)
    powers = [symmetric(L).one()]
    while 2 * len(powers) <= max_degree:
        powers.append(powers[-1] * cas)
    bad = None
    control_fails = False
    pairs = 0
    for i in range(1, len(powers)):
        for j in range(i, len(powers)):
            if 2 * (i + j) > max_degree:
                continue
            pairs += 1
            p, q = powers[i], powers[j]
            lhs = duflo_map(L, p * q)
            rhs = duflo_map(L, p) * duflo_map(L, q)
            if lhs != rhs and bad is None:
                bad = (f"Cas^{i}", f"Cas^{j}", lhs, rhs)
            if sym_U(p * q, U) != sym_U(p, U) * sym_U(q, U):
                control_fails = True
    if not pairs:
        control_fails = None
    return Check("duflo_map multiplicative on Casimir powers", bad is None, bad), control_fails
