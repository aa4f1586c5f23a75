"""Quadratic Lie algebras: structure constants, invariant forms, validation,
standard constructions and a small catalog of rational examples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .core import Element
from .symmetric import SymmetricAlgebra


class InputError(ValueError):
    """Malformed Lie algebra input."""


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            m = tuple(sorted(a + b))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m)
    return out


def _poly_add(acc: dict, p: dict) -> dict:
    for m, c in p.items():
        v = acc.get(m, 0) + c
        if v:
            acc[m] = v
        else:
            acc.pop(m)
    return acc


class QuadraticLieAlgebra:
    """Structure constants ``c[a][b] = {k: coeff}`` and a symmetric form B.

    Instances are treated as immutable.  ``bracket`` may list each pair once;
    the antisymmetric partner is filled in when missing.
    """

    def __init__(self, dim, bracket=None, bilinear=None, name="", names=None,
                 decomposition=None, involution=None):
        if dim < 1:
            raise InputError("dimension must be positive")
        self.dim = n = dim
        self.name = name
        self.names = list(names) if names else [f"e{i}" for i in range(n)]
        c = [[{} for _ in range(n)] for _ in range(n)]
        given = set()
        for (a, b), row in (bracket or {}).items():
            for k, v in row.items():
                v = Fraction(v)
                if v:
                    c[a][b][k] = v
            given.add((a, b))
        for (a, b) in list(given):
            if (b, a) not in given:
                for k, v in c[a][b].items():
                    c[b][a][k] = -v
        self.c = c
        B = linalg.zeros(n)
        if bilinear is not None:
            for a in range(n):
                for b in range(n):
                    B[a][b] = Fraction(bilinear[a][b])
        self.B = B
        self.decomposition = decomposition
        self.involution = involution

    def __repr__(self):
        return f"QuadraticLieAlgebra({self.name or 'unnamed'}, dim={self.dim})"

    # -- basic structure ---------------------------------------------------
    def bracket_basis(self, a, b) -> dict:
        return self.c[a][b]

    def bracket(self, x, y):
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for k, v in self.c[a][b].items():
                    out[k] += xa * yb * v
        return out

    def form(self, x, y) -> Fraction:
        return sum((x[a] * self.B[a][b] * y[b] for a in range(self.dim)
                    for b in range(self.dim) if x[a] and y[b]), Fraction(0))

    def basis_vector(self, i):
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def ad_matrix(self, xi):
        """Matrix of [xi, .]; column b holds the coordinates of [xi, e_b]."""
        if len(xi) != self.dim:
            raise ValueError("coordinate vector has wrong length")
        n = self.dim
        m = linalg.zeros(n)
        for a, xa in enumerate(xi):
            if not xa:
                continue
            for b in range(n):
                for k, v in self.c[a][b].items():
                    m[k][b] += xa * v
        return m

    @cached_property
    def nondegenerate(self) -> bool:
        return linalg.det(self.B) != 0

    @cached_property
    def B_inv(self):
        if not self.nondegenerate:
            raise ValueError(f"{self.name}: bilinear form is degenerate")
        return linalg.inverse(self.B)

    def dual_vector(self, a):
        """Coordinates of e^a, the B-dual of e_a."""
        return list(self.B_inv[a])

    @cached_property
    def dual_coordinates(self) -> SymmetricAlgebra:
        return SymmetricAlgebra(self.dim, [f"{nm}*" for nm in self.names],
                                label=f"S*:{self.name}:{id(self)}")

    @cached_property
    def is_abelian(self) -> bool:
        return not any(self.c[a][b] for a in range(self.dim) for b in range(self.dim))

    # -- derived algebras ----------------------------------------------------
    def change_basis(self, P, names=None, name=None) -> "QuadraticLieAlgebra":
        """Algebra written in the basis f_i = sum_j P[i][j] e_j."""
        P = linalg.as_matrix(P)
        n = self.dim
        Pinv = linalg.inverse(P)
        bracket = {}
        for i in range(n):
            for j in range(i + 1, n):
                v = self.bracket(P[i], P[j])
                # coordinates w.r.t. f: solve v = sum_k w_k P[k]
                w = linalg.matvec(linalg.transpose(Pinv), v)
                row = {k: x for k, x in enumerate(w) if x}
                if row:
                    bracket[(i, j)] = row
        B = linalg.matmul(linalg.matmul(P, self.B), linalg.transpose(P))
        invol = None
        if self.involution is not None:
            E = linalg.as_matrix(self.involution)
            # involution acts on coordinates, and old coordinates are P^T times new ones
            Pt = linalg.transpose(P)
            invol = linalg.matmul(linalg.matmul(linalg.transpose(Pinv), E), Pt)
        return QuadraticLieAlgebra(n, bracket, B, name or self.name, names,
                                   involution=invol)

    def reorder(self, order, name=None) -> "QuadraticLieAlgebra":
        """Same algebra with basis e_{order[0]}, e_{order[1]}, ..."""
        P = [self.basis_vector(i) for i in order]
        names = [self.names[i] for i in order]
        return self.change_basis(P, names, name)

    def subalgebra(self, indices, name=None) -> "QuadraticLieAlgebra":
        """Restriction to an index-aligned subalgebra (must be closed)."""
        idx = list(indices)
        pos = {g: i for i, g in enumerate(idx)}
        bracket = {}
        for i, a in enumerate(idx):
            for j, b in enumerate(idx):
                row = {}
                for k, v in self.c[a][b].items():
                    if k not in pos:
                        raise ValueError(f"indices {idx} do not span a subalgebra")
                    row[pos[k]] = v
                if row:
                    bracket[(i, j)] = row
        B = [[self.B[a][b] for b in idx] for a in idx]
        return QuadraticLieAlgebra(len(idx), bracket, B, name or f"{self.name}|k",
                                   [self.names[a] for a in idx])

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        br = []
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                for k, v in sorted(self.c[a][b].items()):
                    br.append([a, b, k, str(v)])
        bl = [[a, b, str(self.B[a][b])] for a in range(self.dim)
              for b in range(self.dim) if self.B[a][b]]
        out = {"name": self.name, "names": list(self.names), "dim": self.dim,
               "bracket": br, "bilinear": bl}
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition.to_json()
        if self.involution is not None:
            E = self.involution
            if all(E[i][j] == 0 for i in range(self.dim) for j in range(self.dim) if i != j):
                out["involution"] = [int(E[i][i]) for i in range(self.dim)]
        return out


@dataclass(frozen=True)
class SubalgebraDecomposition:
    """Index data for g = n_- + k + n_+ (or g = k + p when n_pm are empty).

    ``basis_change`` (rows = new basis vectors) is applied first; the index
    sets refer to the changed basis.
    """

    k: tuple
    n_minus: tuple = ()
    n_plus: tuple = ()
    basis_change: tuple | None = None
    p_override: tuple | None = field(default=None)

    def p(self, dim):
        if self.p_override is not None:
            return tuple(self.p_override)
        return tuple(i for i in range(dim) if i not in self.k)

    def adapted(self, L: QuadraticLieAlgebra) -> QuadraticLieAlgebra:
        if self.basis_change is None:
            return L
        return L.change_basis([list(r) for r in self.basis_change])

    def to_json(self):
        out = {"k": list(self.k)}
        if self.n_minus or self.n_plus:
            out["n_minus"] = list(self.n_minus)
            out["n_plus"] = list(self.n_plus)
        if self.basis_change is not None:
            out["basis_change"] = [[str(x) for x in r] for r in self.basis_change]
        return out


# -- validation ---------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class ValidationReport:
    algebra: str
    checks: list

    @property
    def ok(self):
        """A Lie algebra with invariant symmetric form (possibly degenerate)."""
        return all(c.ok for c in self.checks if c.name != "nondegenerate")

    @property
    def quadratic(self):
        return all(c.ok for c in self.checks)

    def check(self, name) -> Check:
        return next(c for c in self.checks if c.name == name)


def validate(L: QuadraticLieAlgebra) -> ValidationReport:
    n = L.dim
    checks = []

    bad = None
    for a in range(n):
        for b in range(n):
            keys = set(L.c[a][b]) | set(L.c[b][a])
            if any(L.c[a][b].get(k, 0) != -L.c[b][a].get(k, 0) for k in keys):
                bad = (a, b)
                break
        if bad:
            break
    checks.append(Check("antisymmetry", bad is None,
                        "" if bad is None else f"c[{bad[0]}][{bad[1]}] != -c[{bad[1]}][{bad[0]}]"))

    bad = None
    for a in range(n):
        for b in range(n):
            for c in range(n):
                ea, eb, ec = L.basis_vector(a), L.basis_vector(b), L.basis_vector(c)
                s = [x + y + z for x, y, z in zip(
                    L.bracket(ea, L.bracket(eb, ec)),
                    L.bracket(eb, L.bracket(ec, ea)),
                    L.bracket(ec, L.bracket(ea, eb)))]
                if any(s):
                    bad = (a, b, c)
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("jacobi", bad is None, "" if bad is None else f"triple {bad}"))

    bad = next(((a, b) for a in range(n) for b in range(n) if L.B[a][b] != L.B[b][a]), None)
    checks.append(Check("symmetric_form", bad is None, "" if bad is None else f"pair {bad}"))

    bad = None
    for a in range(n):
        for b in range(n):
            for c in range(n):
                ea, eb, ec = L.basis_vector(a), L.basis_vector(b), L.basis_vector(c)
                if L.form(L.bracket(ea, eb), ec) + L.form(eb, L.bracket(ea, ec)):
                    bad = (a, b, c)
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("invariant_form", bad is None, "" if bad is None else f"triple {bad}"))

    nd = L.nondegenerate
    checks.append(Check("nondegenerate", nd, "" if nd else "det B = 0"))
    return ValidationReport(L.name, checks)


def decomposition_checks(L: QuadraticLieAlgebra, dec: SubalgebraDecomposition) -> list:
    """Closure / invariance / isotropy conditions of a decomposition."""
    M = dec.adapted(L)
    n = M.dim
    k, p = set(dec.k), set(dec.p(n))
    out = []

    def closed(sub, into):
        for a in sub:
            for b in sub:
                if any(x not in into for x in M.c[a][b]):
                    return (a, b)
        return None

    def moves(src, tgt, into):
        for a in src:
            for b in tgt:
                if any(x not in into for x in M.c[a][b]):
                    return (a, b)
        return None

    bad = closed(k, k)
    out.append(Check("k_subalgebra", bad is None, "" if bad is None else f"pair {bad}"))
    bad = moves(k, p, p)
    out.append(Check("k_preserves_p", bad is None, "" if bad is None else f"pair {bad}"))
    for label, part in (("n_minus", dec.n_minus), ("n_plus", dec.n_plus)):
        if not part:
            continue
        s = set(part)
        bad = closed(s, s)
        out.append(Check(f"{label}_subalgebra", bad is None, "" if bad is None else f"pair {bad}"))
        bad = moves(k, s, s)
        out.append(Check(f"{label}_k_invariant", bad is None, "" if bad is None else f"pair {bad}"))
        iso = all(M.B[a][b] == 0 for a in s for b in s)
        out.append(Check(f"{label}_isotropic", iso))
    return out


# -- ad powers and traces -------------------------------------------------------

def ad_power_matrices(L: QuadraticLieAlgebra, powers, support=None, scale=1):
    """Matrices (scale * ad_xi)^m with polynomial entries, for m in ``powers``.

    Entry [i][j] is a dict monomial -> coefficient in the coordinates of xi;
    ``support`` limits xi to a coordinate subspace.
    """
    n = L.dim
    sup = range(n) if support is None else support
    scale = Fraction(scale)
    ad = [[{} for _ in range(n)] for _ in range(n)]
    for a in sup:
        for b in range(n):
            for k, v in L.c[a][b].items():
                ad[k][b][(a,)] = ad[k][b].get((a,), 0) + scale * v
    ad = [[{m: c for m, c in e.items() if c} for e in row] for row in ad]
    powers = set(powers)
    out = {}
    cur = ad
    for m in range(1, max(powers) + 1):
        if m > 1:
            nxt = [[{} for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    acc: dict = {}
                    for l in range(n):
                        if cur[i][l] and ad[l][j]:
                            _poly_add(acc, _poly_mul(cur[i][l], ad[l][j]))
                    nxt[i][j] = acc
            cur = nxt
        if m in powers:
            out[m] = cur
    return out


def ad_power_traces(L: QuadraticLieAlgebra, powers, support=None, block=None, scale=1):
    """Polynomials xi -> tr((scale * ad_xi)^m restricted to ``block``).

    ``support`` limits xi to a coordinate subspace (indices of L); the
    polynomials live in S(g*) over all coordinates.  ``block`` is a list of
    indices whose diagonal block is traced (default: all).
    """
    blk = list(range(L.dim)) if block is None else list(block)
    out = {}
    for m, mat in ad_power_matrices(L, powers, support, scale).items():
        tr: dict = {}
        for i in blk:
            _poly_add(tr, mat[i][i])
        out[m] = tr
    return out


def dual_coordinates(L: QuadraticLieAlgebra) -> SymmetricAlgebra:
    """Polynomial functions on g, in the coordinates xi^a."""
    return L.dual_coordinates


def trace_power_polynomial(L: QuadraticLieAlgebra, m: int):
    """The polynomial xi -> tr(ad_xi^m) as an element of S(g*)."""
    if m < 2 or m % 2:
        raise ValueError("trace_power_polynomial needs an even power m >= 2")
    poly = ad_power_traces(L, {m})[m]
    return Element(dual_coordinates(L), poly)


# -- constructions ----------------------------------------------------------------

def lie_algebra(dim, bracket, name="", names=None):
    """A Lie algebra without form (B = 0)."""
    return QuadraticLieAlgebra(dim, bracket, None, name, names)


def _matrix_bracket_check(s, action):
    n = len(action[0])
    for i in range(s.dim):
        for j in range(s.dim):
            comm = linalg.matadd(linalg.matmul(action[i], action[j]),
                                 linalg.matmul(action[j], action[i]), -1)
            expect = linalg.zeros(n)
            for k, v in s.c[i][j].items():
                expect = linalg.matadd(expect, action[k], v)
            if comm != expect:
                return (i, j)
    return None


def double_extension(a: QuadraticLieAlgebra, s: QuadraticLieAlgebra, action,
                     name="", names=None) -> QuadraticLieAlgebra:
    """g = s + a + s*, with s acting on a by B_a-skew derivations.

    ``action[i][k][j]`` is the coefficient of a_k in s_i . a_j.  Brackets:
    [s_i, a_j] = s_i.a_j, [s_i, s^j] = coadjoint, and
    [a_j, a_k] = [a_j, a_k]_a + sum_i B_a(s_i.a_j, a_k) s^i.
    """
    p, q = s.dim, a.dim
    action = [linalg.as_matrix(D) for D in action]
    if len(action) != p or any(len(D) != q for D in action):
        raise ValueError("action must give one q x q matrix per basis vector of s")
    for i, D in enumerate(action):
        for x in range(q):
            for y in range(q):
                ex, ey = a.basis_vector(x), a.basis_vector(y)
                lhs = linalg.matvec(D, a.bracket(ex, ey))
                rhs = [u + v for u, v in zip(a.bracket(linalg.matvec(D, ex), ey),
                                              a.bracket(ex, linalg.matvec(D, ey)))]
                if lhs != rhs:
                    raise ValueError(f"action of s_{i} is not a derivation of a")
                if a.form(linalg.matvec(D, ex), ey) + a.form(ex, linalg.matvec(D, ey)):
                    raise ValueError(f"action of s_{i} does not preserve B_a")
    if _matrix_bracket_check(s, action) is not None:
        raise ValueError("action is not a Lie algebra homomorphism")

    S0, A0, D0 = 0, p, p + q
    n = 2 * p + q
    bracket: dict = {}

    def put(x, y, k, v):
        if v:
            row = bracket.setdefault((x, y), {})
            row[k] = row.get(k, 0) + v

    for i in range(p):
        for j in range(p):
            for k, v in s.c[i][j].items():
                put(S0 + i, S0 + j, S0 + k, v)
            # [s_i, s^j] = -s^j o ad_{s_i}
            for l in range(p):
                put(S0 + i, D0 + j, D0 + l, -s.c[i][l].get(j, 0))
        for j in range(q):
            for k in range(q):
                put(S0 + i, A0 + j, A0 + k, action[i][k][j])
    for j in range(q):
        for k in range(q):
            for m, v in a.c[j][k].items():
                put(A0 + j, A0 + k, A0 + m, v)
            for i in range(p):
                sa = linalg.matvec(action[i], a.basis_vector(j))
                put(A0 + j, A0 + k, D0 + i, a.form(sa, a.basis_vector(k)))
    # complete antisymmetrically for the pairs with s on the left
    full: dict = {}
    for (x, y), row in bracket.items():
        full[(x, y)] = dict(row)
    for (x, y), row in bracket.items():
        if (y, x) not in bracket:
            full[(y, x)] = {k: -v for k, v in row.items()}
    B = linalg.zeros(n)
    for j in range(q):
        for k in range(q):
            B[A0 + j][A0 + k] = a.B[j][k]
    for i in range(p):
        B[S0 + i][D0 + i] = B[D0 + i][S0 + i] = Fraction(1)
    if names is None:
        names = list(s.names) + list(a.names) + [f"{nm}*" for nm in s.names]
    g = QuadraticLieAlgebra(n, full, B, name or f"dext({a.name},{s.name})", names)
    rep = validate(g)
    if not rep.quadratic:
        failed = [c for c in rep.checks if not c.ok]
        raise ValueError(f"double extension failed validation: {failed}")
    return g


def cubic_invariant(k: QuadraticLieAlgebra, C) -> tuple | None:
    """First basis triple violating ad-invariance of C in wedge^3 k, else None."""
    m = k.dim
    for x in range(m):
        for i in range(m):
            for j in range(m):
                for l in range(m):
                    v = Fraction(0)
                    for t in range(m):
                        v += (k.c[x][t].get(i, 0) * C[t][j][l]
                              + k.c[x][t].get(j, 0) * C[i][t][l]
                              + k.c[x][t].get(l, 0) * C[i][j][t])
                    if v:
                        return (x, i, j, l)
    return None


def from_cubic(k: QuadraticLieAlgebra, C=None, name="", names=None) -> QuadraticLieAlgebra:
    """g = k + k* with [mu, mu'] = C(mu, mu', .) and the pairing form.

    ``C[i][j][l]`` is the alternating trilinear form on k* evaluated on the
    dual basis; ``None`` means C = 0.  The result records the involution
    (+1 on k, -1 on k*) and the decomposition k + p.
    """
    m = k.dim
    if C is None:
        C = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    C = [[[Fraction(x) for x in r] for r in M] for M in C]
    for i in range(m):
        for j in range(m):
            for l in range(m):
                if C[i][j][l] != -C[j][i][l] or C[i][j][l] != -C[i][l][j]:
                    raise ValueError("C is not alternating")
    bad = cubic_invariant(k, C)
    if bad is not None:
        raise ValueError(f"C is not invariant (witness {bad})")
    n = 2 * m
    bracket: dict = {}
    for i in range(m):
        for j in range(m):
            if k.c[i][j]:
                bracket[(i, j)] = dict(k.c[i][j])
            row = {m + l: -k.c[i][l].get(j, 0) for l in range(m) if k.c[i][l].get(j, 0)}
            if row:
                bracket[(i, m + j)] = row
                bracket[(m + j, i)] = {x: -v for x, v in row.items()}
            row = {l: C[i][j][l] for l in range(m) if C[i][j][l]}
            if row:
                bracket[(m + i, m + j)] = row
    B = linalg.zeros(n)
    for i in range(m):
        B[i][m + i] = B[m + i][i] = Fraction(1)
    invol = linalg.zeros(n)
    for i in range(m):
        invol[i][i] = Fraction(1)
        invol[m + i][m + i] = Fraction(-1)
    if names is None:
        names = list(k.names) + [f"{nm}*" for nm in k.names]
    g = QuadraticLieAlgebra(n, bracket, B, name or f"cubic({k.name})", names,
                            decomposition=SubalgebraDecomposition(tuple(range(m))),
                            involution=invol)
    rep = validate(g)
    if not rep.quadratic:
        failed = [c for c in rep.checks if not c.ok]
        raise ValueError(f"from_cubic: result is not a quadratic Lie algebra: {failed}")
    return g


def wedge3(m, triples):
    """Alternating trilinear form from a list of ((i, j, l), coeff) wedges."""
    C = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    perms = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
             ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]
    for idx, coeff in triples:
        for p, s in perms:
            i, j, l = (idx[p[0]], idx[p[1]], idx[p[2]])
            C[i][j][l] += s * Fraction(coeff)
    return C


# -- catalog ---------------------------------------------------------------------

def abelian(n: int) -> QuadraticLieAlgebra:
    """Abelian algebra with hyperbolic form (one extra diagonal 1 if n is odd)."""
    B = linalg.zeros(n)
    for i in range(0, n - 1, 2):
        B[i][i + 1] = B[i + 1][i] = Fraction(1)
    if n % 2:
        B[n - 1][n - 1] = Fraction(1)
    return QuadraticLieAlgebra(n, {}, B, f"abelian{n}")


def sl2(form="trace") -> QuadraticLieAlgebra:
    """Basis (e, h, f); trace form B(e,f)=1, B(h,h)=2 or the Killing form."""
    bracket = {(1, 0): {0: 2}, (1, 2): {2: -2}, (0, 2): {1: 1}}
    s = {"trace": 1, "killing": 4}[form]
    B = [[0, 0, s], [0, 2 * s, 0], [s, 0, 0]]
    name = "sl2" if form == "trace" else "sl2_killing"
    dec = SubalgebraDecomposition(k=(1,), n_minus=(2,), n_plus=(0,))
    return QuadraticLieAlgebra(3, bracket, B, name, ["e", "h", "f"], decomposition=dec)


def _heisenberg_extension(split: bool) -> QuadraticLieAlgebra:
    if split:
        a = QuadraticLieAlgebra(2, {}, [[0, 1], [1, 0]], "F2h", ["e1", "e2"])
        D = [[1, 0], [0, -1]]
    else:
        a = QuadraticLieAlgebra(2, {}, [[1, 0], [0, 1]], "F2", ["e1", "e2"])
        D = [[0, -1], [1, 0]]
    s = lie_algebra(1, {}, "F", ["r"])
    g = double_extension(a, s, [D], names=["r", "e1", "e2", "c"])
    return g


def fxh1() -> QuadraticLieAlgebra:
    """F x H_1: rotation r.e1 = e2, r.e2 = -e1, [e1,e2] = c, B(c,r) = 1.

    The rotation preserves the Euclidean form on span(e1, e2), so that is
    the form used on that plane.
    """
    g = _heisenberg_extension(split=False)
    g.name = "fxh1"
    g.decomposition = SubalgebraDecomposition(k=(0, 3))
    return g


def fxh1_split() -> QuadraticLieAlgebra:
    """Rational split form of F x H_1: r.e1 = e1, r.e2 = -e2, B(e1,e2) = B(c,r) = 1.

    Over C this is F x H_1 in the basis e2 +- i e1; here n_+ = span(e1) and
    n_- = span(e2) are isotropic k-invariant lines for k = span(r, c).
    """
    g = _heisenberg_extension(split=True)
    g.name = "fxh1_split"
    g.decomposition = SubalgebraDecomposition(k=(0, 3), n_minus=(2,), n_plus=(1,))
    return g


def aff2() -> QuadraticLieAlgebra:
    """Two-dimensional nonabelian Lie algebra [x, y] = y (no form)."""
    return lie_algebra(2, {(0, 1): {1: 1}}, "aff2", ["x", "y"])


def n3() -> QuadraticLieAlgebra:
    """Strictly upper triangular 3x3 matrices, basis E12, E13, E23."""
    return lie_algebra(3, {(0, 2): {1: 1}}, "n3", ["E12", "E13", "E23"])


def sl2_cubic(sign=1) -> QuadraticLieAlgebra:
    """k = sl2 with C(mu,mu',mu'') = sign * B([x,x'],x'') under k* = k."""
    k = sl2()
    m = 3
    C = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    duals = [k.dual_vector(i) for i in range(m)]
    for i in range(m):
        for j in range(m):
            for l in range(m):
                C[i][j][l] = sign * k.form(k.bracket(duals[i], duals[j]), duals[l])
    return from_cubic(k, C, "sl2_plus" if sign > 0 else "sl2_minus")


def dext_sl2() -> QuadraticLieAlgebra:
    """Double extension of sl2 by a line acting through ad_h."""
    a = sl2()
    s = lie_algebra(1, {}, "F", ["t"])
    g = double_extension(a, s, [a.ad_matrix(a.basis_vector(1))], name="dext_sl2",
                         names=["t", "e", "h", "f", "t*"])
    return g


def catalog() -> dict:
    """Named rational examples; every entry passes ``validate``."""
    entries = [
        abelian(2),
        abelian(4),
        sl2(),
        sl2("killing"),
        fxh1(),
        fxh1_split(),
        from_cubic(aff2(), None, "s_sstar"),
        from_cubic(n3(), None, "n3_semidirect"),
        from_cubic(n3(), wedge3(3, [((0, 1, 2), 1)]), "n3_cubic"),
        sl2_cubic(1),
        sl2_cubic(-1),
        dext_sl2(),
    ]
    return {g.name: g for g in entries}


def get(name: str) -> QuadraticLieAlgebra:
    cat = catalog()
    if name not in cat:
        raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(cat)}")
    return cat[name]


# -- JSON input ---------------------------------------------------------------------

def _rat(x, where):
    try:
        if isinstance(x, bool) or isinstance(x, float):
            raise ValueError
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"{where}: {x!r} is not an exact rational") from None


def _index(x, n, where):
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
        raise InputError(f"{where}: index {x!r} out of range 0..{n - 1}")
    return x


def from_dict(obj, name="input") -> QuadraticLieAlgebra:
    if not isinstance(obj, dict):
        raise InputError("top level must be an object")
    n = obj.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("dim must be a positive integer")
    bracket: dict = {}
    for pos, entry in enumerate(obj.get("bracket", [])):
        if not isinstance(entry, list) or len(entry) != 4:
            raise InputError(f"bracket[{pos}] must be [a, b, k, \"p/q\"]")
        a, b, k = (_index(entry[i], n, f"bracket[{pos}]") for i in range(3))
        v = _rat(entry[3], f"bracket[{pos}]")
        if a == b and v:
            raise InputError(f"bracket[{pos}]: [e_{a}, e_{a}] must vanish")
        row = bracket.setdefault((a, b), {})
        row[k] = row.get(k, 0) + v
    B = linalg.zeros(n)
    seen = set()
    for pos, entry in enumerate(obj.get("bilinear", [])):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError(f"bilinear[{pos}] must be [a, b, \"p/q\"]")
        a, b = (_index(entry[i], n, f"bilinear[{pos}]") for i in range(2))
        v = _rat(entry[2], f"bilinear[{pos}]")
        B[a][b] = v
        if (b, a) not in seen:
            B[b][a] = v
        seen.add((a, b))
    dec = None
    if "decomposition" in obj:
        d = obj["decomposition"]
        if not isinstance(d, dict) or "k" not in d:
            raise InputError("decomposition must be an object with a 'k' list")
        k = tuple(_index(i, n, "decomposition.k") for i in d["k"])
        nm = tuple(_index(i, n, "decomposition.n_minus") for i in d.get("n_minus", []))
        npl = tuple(_index(i, n, "decomposition.n_plus") for i in d.get("n_plus", []))
        if len(set(k + nm + npl)) != len(k + nm + npl):
            raise InputError("decomposition index sets overlap")
        if (nm or npl) and len(k + nm + npl) != n:
            raise InputError("n_minus, k, n_plus must cover all indices")
        bc = d.get("basis_change")
        if bc is not None:
            if len(bc) != n or any(len(r) != n for r in bc):
                raise InputError("basis_change must be an n x n matrix")
            bc = tuple(tuple(_rat(x, "basis_change") for x in r) for r in bc)
            if linalg.det([list(r) for r in bc]) == 0:
                raise InputError("basis_change is singular")
        dec = SubalgebraDecomposition(k, nm, npl, bc)
    invol = None
    if "involution" in obj:
        signs = obj["involution"]
        if not isinstance(signs, list) or len(signs) != n or \
                any(x not in (1, -1) or isinstance(x, bool) for x in signs):
            raise InputError("involution must be a list of dim entries +1 or -1")
        invol = [[Fraction(signs[i]) if i == j else Fraction(0) for j in range(n)]
                 for i in range(n)]
    return QuadraticLieAlgebra(n, bracket, B, obj.get("name", name), obj.get("names"),
                               decomposition=dec, involution=invol)


def load(path) -> QuadraticLieAlgebra:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return from_dict(obj, name=str(path))
