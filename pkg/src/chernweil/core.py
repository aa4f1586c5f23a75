"""Exact scalars, elements of graded algebras, Koszul signs and the generic
symmetrization / derivation machinery shared by every algebra in the package.

An *algebra* here is any object exposing

    key          hashable identity used to compare owning algebras
    one_monomial the monomial of the unit
    mul_monomials(a, b) -> dict monomial -> Fraction
    parity(m)    0 or 1
    sort_key(m)  deterministic ordering key for printing/serialization
    format_monomial(m)

Elements are finitely supported ``{monomial: Fraction}`` dicts without zero
coefficients, wrapped in :class:`Element`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

EVEN, ODD = 0, 1


def frac(x) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return Fraction(x)


def add_into(acc: dict, terms: dict, coeff=1) -> dict:
    """acc += coeff * terms, in place, dropping zeros."""
    if not coeff:
        return acc
    for m, c in terms.items():
        v = acc.get(m, 0) + coeff * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def clean(terms: dict) -> dict:
    return {m: frac(c) for m, c in terms.items() if c}


class Element:
    """A linear combination of normal-form monomials of one algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_terms(cls, algebra, terms) -> "Element":
        return cls(algebra, clean(dict(terms)))

    # -- linear structure ------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Element):
            raise TypeError(f"cannot combine Element with {type(other).__name__}")
        if other.algebra.key != self.algebra.key:
            raise ValueError(
                f"algebra mismatch: {self.algebra.key!r} vs {other.algebra.key!r}")

    def __add__(self, other):
        if not isinstance(other, Element):
            return self + self.algebra.scalar(other)
        self._check(other)
        return Element(self.algebra, add_into(dict(self.terms), other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Element):
            return self - self.algebra.scalar(other)
        self._check(other)
        return Element(self.algebra, add_into(dict(self.terms), other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Element":
        c = frac(c)
        if not c:
            return Element(self.algebra, {})
        return Element(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / frac(other))

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra.key == other.algebra.key and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == self.algebra.scalar(other)

    def __hash__(self):
        return hash((self.algebra.key, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- inspection ------------------------------------------------------
    def items(self):
        """Terms in deterministic order."""
        return sorted(self.terms.items(), key=lambda t: self.algebra.sort_key(t[0]))

    def coefficient(self, m) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient(self.algebra.one_monomial)

    def parity(self):
        """0/1 for homogeneous elements, None for mixed ones (0 for zero)."""
        ps = {self.algebra.parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def filter(self, pred) -> "Element":
        return Element(self.algebra, {m: c for m, c in self.terms.items() if pred(m)})

    def map_terms(self, f) -> "Element":
        """Apply a linear map given on monomials, ``f(m) -> Element``."""
        acc: dict = {}
        target = None
        for m, c in self.terms.items():
            img = f(m)
            target = img.algebra
            add_into(acc, img.terms, c)
        if target is None:
            return None
        return Element(target, acc)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.items():
            word = self.algebra.format_monomial(m)
            if word == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(word)
            elif c == -1:
                parts.append("-" + word)
            else:
                parts.append(f"{c}*{word}")
        return " + ".join(parts).replace("+ -", "- ")


def linear_map(f, x: Element, target) -> Element:
    """Extend ``f: monomial -> Element of target`` linearly."""
    acc: dict = {}
    for m, c in x.terms.items():
        add_into(acc, f(m).terms, c)
    return Element(target, acc)


class Algebra:
    """Shared plumbing; subclasses provide ``mul_monomials`` and friends."""

    one_monomial = ()

    def one(self) -> Element:
        return Element(self, {self.one_monomial: Fraction(1)})

    def zero(self) -> Element:
        return Element(self, {})

    def scalar(self, c) -> Element:
        c = frac(c)
        return Element(self, {self.one_monomial: c} if c else {})

    def monomial(self, m, c=1) -> Element:
        return Element(self, {m: frac(c)})

    def mul(self, x: Element, y: Element) -> Element:
        acc: dict = {}
        mm = self.mul_monomials
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                add_into(acc, mm(a, b), ca * cb)
        return Element(self, acc)

    def sort_key(self, m):
        return (len(m), m)

    def format_monomial(self, m) -> str:
        return "*".join(map(str, m)) or "1"

    def supercommutator(self, x: Element, y: Element) -> Element:
        """[x, y] = xy - (-1)^{|x||y|} yx, split over homogeneous parts."""
        out = self.mul(x, y)
        xe, xo = split_parity(x)
        ye, yo = split_parity(y)
        out = out - self.mul(y, x)
        if xo and yo:
            out = out + self.mul(yo, xo).scale(2)
        return out

    def __repr__(self):
        return f"<{type(self).__name__} {self.key!r}>"


def split_parity(x: Element):
    even, odd = {}, {}
    par = x.algebra.parity
    for m, c in x.terms.items():
        (odd if par(m) else even)[m] = c
    return Element(x.algebra, even), Element(x.algebra, odd)


def koszul_sign(perm, parities) -> int:
    """Sign of reordering ``v_0..v_{k-1}`` into ``v_perm[0] .. v_perm[k-1]``.

    Counts pairs of odd entries whose relative order is reversed.
    """
    perm = list(perm)
    if len(perm) != len(parities):
        raise ValueError("permutation and parity list differ in length")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation: {perm}")
    n = 0
    for p in range(len(perm)):
        if not parities[perm[p]] % 2:
            continue
        for q in range(p + 1, len(perm)):
            if parities[perm[q]] % 2 and perm[p] > perm[q]:
                n += 1
    return -1 if n % 2 else 1


def symmetrize_naive(factors, parities, one):
    """Literal (1/k!) sum over all orderings; reference implementation."""
    k = len(factors)
    acc = one.scale(0)
    count = 0
    for perm in permutations(range(k)):
        term = one
        for i in perm:
            term = term * factors[i]
        acc = acc + term.scale(koszul_sign(perm, parities))
        count += 1
    return acc.scale(Fraction(1, count))


def symmetrize(factors, parities, one, labels=None, cache=None, cap=8):
    """Super-symmetrized product of ``factors``.

    Equal to (1/k!) sum_sigma sign * product in permuted order, evaluated by
    peeling off the first factor:  sym(S) = 1/|S| sum_i sign_i f_i sym(S - i).
    With ``labels`` the sub-results are memoized by the multiset of labels, so
    repeated factors and shared sub-words are computed once (``cache`` may be
    shared between calls over the same target).
    """
    k = len(factors)
    if k > cap:
        raise ValueError(f"symmetrization of {k} factors exceeds cap {cap}")
    if len(parities) != k:
        raise ValueError("factor and parity lists differ in length")
    if cache is None:
        cache = {}
    if labels is None:
        labels = list(range(k))
        local = {}
    else:
        local = cache

    def rec(idx):
        if not idx:
            return one
        key = tuple(labels[i] for i in idx)
        hit = local.get(key)
        if hit is not None:
            return hit
        acc = None
        seen = set()
        odd_before = 0
        for pos, i in enumerate(idx):
            lab = labels[i]
            odd = parities[i] % 2
            if odd or lab not in seen:
                seen.add(lab)
                # equal even factors give equal contributions
                mult = 1 if odd else sum(1 for j in idx if labels[j] == lab)
                sign = -1 if (odd and odd_before % 2) else 1
                rest = idx[:pos] + idx[pos + 1:]
                term = (factors[i] * rec(rest)).scale(sign * mult)
                acc = term if acc is None else acc + term
            if odd:
                odd_before += 1
        res = acc.scale(Fraction(1, len(idx)))
        local[key] = res
        return res

    return rec(tuple(range(k)))


def derivation_extend(algebra, gen_image, parity: int):
    """Extend ``gen_image(g) -> Element`` to a (super-)derivation of ``algebra``.

    ``algebra.factors(m)`` must return the generator list whose ordered
    product is the monomial ``m`` (with coefficient +1), and
    ``algebra.generator(g)`` / ``algebra.generator_parity(g)`` describe them.
    """

    def on_monomial(m) -> Element:
        gens = algebra.factors(m)
        n = len(gens)
        if n == 0:
            return algebra.zero()
        elems = [algebra.generator(g) for g in gens]
        suffix = [algebra.one()] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = elems[i] * suffix[i + 1]
        acc: dict = {}
        prefix = algebra.one()
        prefix_parity = 0
        for i, g in enumerate(gens):
            img = gen_image(g)
            if img is None:
                raise KeyError(f"generator {g!r} has no image")
            if img:
                sign = -1 if (parity % 2 and prefix_parity % 2) else 1
                add_into(acc, (prefix * img * suffix[i + 1]).terms, sign)
            prefix = prefix * elems[i]
            prefix_parity += algebra.generator_parity(g)
        return Element(algebra, acc)

    def op(x: Element) -> Element:
        acc: dict = {}
        for m, c in x.terms.items():
            add_into(acc, on_monomial(m).terms, c)
        return Element(algebra, acc)

    op.on_monomial = on_monomial
    return op


class TensorAlgebra(Algebra):
    """Graded tensor product A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'."""

    def __init__(self, A, B):
        self.A = A
        self.B = B
        self.key = ("tensor", A.key, B.key)
        self.one_monomial = (A.one_monomial, B.one_monomial)

    def mul_monomials(self, a, b):
        sign = -1 if (self.B.parity(a[1]) and self.A.parity(b[0])) else 1
        left = self.A.mul_monomials(a[0], b[0])
        if not left:
            return {}
        right = self.B.mul_monomials(a[1], b[1])
        return {(m1, m2): sign * c1 * c2 for m1, c1 in left.items()
                for m2, c2 in right.items()}

    def parity(self, m):
        return (self.A.parity(m[0]) + self.B.parity(m[1])) % 2

    def sort_key(self, m):
        return (self.A.sort_key(m[0]), self.B.sort_key(m[1]))

    def format_monomial(self, m):
        a = self.A.format_monomial(m[0])
        b = self.B.format_monomial(m[1])
        if b == "1":
            return a
        return f"({a})#({b})" if a != "1" else f"1#({b})"

    def tensor(self, x: Element, y: Element) -> Element:
        return Element(self, {(a, b): ca * cb for a, ca in x.terms.items()
                              for b, cb in y.terms.items()})

    def left(self, x: Element) -> Element:
        return self.tensor(x, self.B.one())

    def right(self, y: Element) -> Element:
        return self.tensor(self.A.one(), y)
