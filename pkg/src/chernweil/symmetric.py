"""Commutative polynomial algebras S(V) with monomials as sorted index tuples.

The same class serves S(g) (hat generators) and S(g*) (polynomial functions
on g, written in the dual coordinates).
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial

from .core import Algebra, Element, add_into


class SymmetricAlgebra(Algebra):
    def __init__(self, n: int, names=None, label="S"):
        self.n = n
        self.names = list(names) if names else [f"x{i}" for i in range(n)]
        self.label = label
        self.key = (label, n, tuple(self.names))

    def mul_monomials(self, a, b):
        return {tuple(sorted(a + b)): Fraction(1)}

    def mul(self, x, y):
        acc: dict = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                m = tuple(sorted(a + b))
                v = acc.get(m, 0) + ca * cb
                if v:
                    acc[m] = v
                else:
                    acc.pop(m, None)
        return Element(self, acc)

    def parity(self, m):
        return 0

    def format_monomial(self, m):
        if not m:
            return "1"
        c = Counter(m)
        return "*".join(
            self.names[i] + (f"^{k}" if k > 1 else "") for i, k in sorted(c.items()))

    # generators / derivation interface
    def gen(self, i) -> Element:
        return Element(self, {(i,): Fraction(1)})

    def factors(self, m):
        return list(m)

    def generator(self, g):
        return self.gen(g)

    def generator_parity(self, g):
        return 0

    def linear(self, coeffs) -> Element:
        return Element(self, {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})

    def degree(self, x: Element) -> int:
        return max((len(m) for m in x.terms), default=-1)

    def homogeneous(self, x: Element, k: int) -> Element:
        return x.filter(lambda m: len(m) == k)

    def truncate(self, x: Element, k: int) -> Element:
        return x.filter(lambda m: len(m) <= k)

    def monomials(self, degree: int):
        """All monomials of the given degree in increasing order."""
        out = []

        def rec(start, left, acc):
            if not left:
                out.append(tuple(acc))
                return
            for i in range(start, self.n):
                rec(i, left - 1, acc + [i])

        rec(0, degree, [])
        return out

    def derivative(self, x: Element, i: int) -> Element:
        acc: dict = {}
        for m, c in x.terms.items():
            k = m.count(i)
            if k:
                pos = m.index(i)
                r = m[:pos] + m[pos + 1:]
                acc[r] = acc.get(r, 0) + k * c
        return Element(self, {m: c for m, c in acc.items() if c})

    def substitute(self, x: Element, images, target) -> Element:
        """Algebra map sending generator i to ``images[i]`` in ``target``."""
        acc: dict = {}
        for m, c in x.terms.items():
            img = target.one()
            for i in m:
                img = img * images[i]
            add_into(acc, img.terms, c)
        return Element(target, acc)

    def linear_change(self, x: Element, matrix) -> Element:
        """Substitute x_i -> sum_j matrix[i][j] x_j."""
        images = [self.linear(row) for row in matrix]
        return self.substitute(x, images, self)


def exp_series(alg: SymmetricAlgebra, x: Element, order: int) -> Element:
    """exp(x) truncated to polynomial degree ``order``; x without constant term."""
    if x.constant():
        raise ValueError("exp_series needs a series without constant term")
    out = alg.one()
    power = alg.one()
    for k in range(1, order + 1):
        power = alg.truncate(power * x, order)
        if not power:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return alg.truncate(out, order)
