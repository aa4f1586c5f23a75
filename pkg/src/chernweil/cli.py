"""Command-line runner: load a Lie algebra, run checks, report.

Every check record carries a name, a short anchor describing the identity
being tested, a status and, on failure, a witness.  Checks run per task; a
task is a group of checks sharing one computation.  With ``--jobs N`` tasks
run in worker processes, each of which reloads the algebra from its source.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, factorial

from . import liealg
from .clifford import contract_exponentials, gamma_checks
from .core import Element
from .enveloping import (casimir, duflo_factor, duflo_map, duflo_multiplicativity_check,
                         enveloping, invariant_polynomials, series_tables, symmetric)
from .liealg import Check, InputError
from .relative import (RelativePair, SymmetricPair, TriangularPair, hc_diagram_checks,
                       ideal_kill_check, isotropic_quotient, p_is_abelian,
                       relative_dirac_square_check, rouviere_identity_check,
                       rouviere_multiplicativity_check, vogan_cocycle_check)
from .weil import (NCWeilGDA, TensorGDA, characteristic_map, dirac_checks,
                   dirac_square_check, duflo_factorization_check, ncweil, quantize,
                   quantization_chain_checks, rigidity_checks, rigidity_homotopy,
                   transgression, weil_algebra)

ANCHORS = {
    "validate": "Lie algebra axioms and invariant symmetric form",
    "gamma": "gamma is a Lie map into the Clifford algebra implementing ad",
    "series": "power series of ln j and its derivative",
    "contraction": "contraction of Gaussian exponentials in exterior algebras",
    "duflo": "multiplicativity of the Duflo map",
    "dirac": "the cubic Dirac element generates the differential",
    "dirac_square": "square of the cubic Dirac element",
    "transgression": "transgression of the quadratic Casimir",
    "quantize_chain": "quantization map commutes with d, contractions and Lie derivatives",
    "factorization": "factorization of the quantization map through the Duflo operator",
    "rigidity": "homotopy between characteristic homomorphisms",
    "vogan": "relative Dirac element and the cocycle property of chi",
    "hc": "Harish-Chandra projections and the rho shift",
    "rouviere": "Duflo-Rouviere map for symmetric pairs",
    "isotropic": "Chern-Weil cocycles in the quotient by an isotropic subalgebra",
    "quantize": "quantization map commutes with d, contractions and Lie derivatives",
}

SUITES = {
    "core": ("validate", "gamma", "series", "contraction", "duflo"),
    "weil": ("dirac", "dirac_square", "transgression", "quantize_chain", "factorization",
             "rigidity"),
    "relative": ("vogan", "hc", "rouviere", "isotropic"),
}
SUITES["all"] = SUITES["core"] + SUITES["weil"] + SUITES["relative"]

COMMAND_TASKS = {
    "validate": "validate",
    "duflo": "duflo",
    "dirac": "dirac",
    "dirac-square": "dirac_square",
    "hc": "hc",
    "vogan": "vogan",
    "rouviere": "rouviere",
    "rigidity": "rigidity",
}


class UsageError(Exception):
    """Malformed input or a command that does not apply to the input."""


def load_source(source):
    kind, value = source
    if kind == "catalog":
        return liealg.get(value)
    return liealg.load(value)


def fmt(w):
    if w is None or w == "":
        return None
    if isinstance(w, (tuple, list)):
        return "; ".join(str(fmt(x)) for x in w)
    return str(w)


# -- applicability ---------------------------------------------------------------

def _quadratic_pair(L):
    dec = L.decomposition
    if dec is None or not dec.k:
        return None
    try:
        return RelativePair(dec.adapted(L), dec.k)
    except ValueError:
        return None


def _isotropic_k(L):
    dec = L.decomposition
    if dec is None or not dec.k or dec.basis_change is not None:
        return None
    if any(L.B[a][b] for a in dec.k for b in dec.k):
        return None
    return dec.k


def applicable(task, L):
    """None if ``task`` applies to L, else the reason it does not."""
    nondeg = L.nondegenerate
    needs_form = {"gamma", "dirac", "dirac_square", "transgression", "quantize_chain",
                  "factorization", "rigidity", "vogan", "hc", "isotropic", "quantize"}
    if task in needs_form and not nondeg:
        return "the invariant form is degenerate"
    if task == "vogan" and _quadratic_pair(L) is None:
        return "no decomposition with a quadratic subalgebra k"
    if task == "hc":
        dec = L.decomposition
        if dec is None or not (dec.n_minus or dec.n_plus):
            return "no triangular decomposition"
    if task == "rouviere":
        if L.involution is None:
            return "no involution"
        try:
            SymmetricPair(L)
        except ValueError as exc:
            return str(exc)
    if task == "isotropic" and _isotropic_k(L) is None:
        return "no isotropic subalgebra in the decomposition"
    return None


# -- tasks --------------------------------------------------------------------------
# Each returns (list of Check, dict of named results).

def task_validate(L, max_degree):
    rep = liealg.validate(L)
    checks = list(rep.checks)
    if L.decomposition is not None and rep.ok:
        checks.extend(liealg.decomposition_checks(L, L.decomposition))
    return checks, {}


def task_gamma(L, max_degree):
    return gamma_checks(L), {}


def _bernoulli(n):
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B


def task_series(L, max_degree):
    order = 2 * max(max_degree, 4)
    table = series_tables(order)
    B = _bernoulli(order)
    bad = None
    for k in range(1, order // 2 + 1):
        want_d = B[2 * k] / factorial(2 * k)
        want = want_d / (2 * k)
        if table.c(2 * k - 1) != want_d or table.b(2 * k) != want:
            bad = (2 * k, table.b(2 * k), want)
            break
    odd_zero = all(not table.b(2 * k + 1) for k in range(order // 2))
    checks = [Check("ln j matches the Bernoulli numbers", bad is None, bad),
              Check("ln j is even", odd_zero, None)]
    return checks, {"b2": str(table.b(2)), "b4": str(table.b(4)),
                    "c1": str(table.c(1)), "c3": str(table.c(3))}


def _random_skew(rng, n):
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            M[i][j], M[j][i] = v, -v
    return M


def task_contraction(L, max_degree):
    rng = random.Random(84)
    done = 0
    bad = None
    dims = (2, 3, 4)
    while done < 50:
        n = dims[done % 3]
        A, Bm = _random_skew(rng, n), _random_skew(rng, n)
        try:
            res = contract_exponentials(A, Bm)
        except ZeroDivisionError:
            continue
        done += 1
        if not res.holds and bad is None:
            bad = (A, Bm, res.lhs, res.rhs)
    return [Check("contraction identity on 50 random skew pairs", bad is None, bad)], {}


def task_duflo(L, max_degree):
    mult, control_fails = duflo_multiplicativity_check(L, max_degree)
    checks = [] if control_fails is None else [mult]
    F = duflo_factor(L, max_degree).poly
    if control_fails is not None and F != F.algebra.one():
        checks.append(Check("control: sym_U alone is not multiplicative", control_fails,
                            None if control_fails else "sym_U is multiplicative"))
    U = enveloping(L)
    bad = None
    for deg in range(1, max_degree + 1):
        for p in invariant_polynomials(L, deg):
            z = duflo_map(L, p)
            for i in range(L.dim):
                if U.commutator(U.gen(i), z):
                    bad = (repr(p), L.names[i])
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("duflo_map sends invariants to the center", bad is None, bad))
    return checks, {"J^1/2": repr(F)}


def task_dirac(L, max_degree):
    return dirac_checks(L), {"D": repr(ncweil(L).dirac())}


def task_dirac_square(L, max_degree):
    r = dirac_square_check(L)
    checks = [Check("D^2 = 1/2 Cas + tr(Cas)/48", r.square == r.expected,
                    (r.square, r.expected)),
              Check("Q(sum e^_a e^^a) = Cas + tr(Cas)/24",
                    r.quantized_casimir == r.expected_quantized_casimir,
                    (r.quantized_casimir, r.expected_quantized_casimir))]
    cas, _ = casimir(L)
    return checks, {"D^2": repr(r.square), "1/2 Cas": repr(cas.scale(Fraction(1, 2))),
                    "trace term tr(Cas)/48": str(r.trace / 48)}


def task_transgression(L, max_degree):
    r = transgression(L)
    q = quantize(L, r.via_homotopy)
    D = ncweil(L).dirac()
    checks = [Check("h(sum e^_a e^^a) equals the closed formula",
                    r.via_homotopy == r.closed_form, (r.via_homotopy, r.closed_form)),
              Check("d h(sum e^_a e^^a) = sum e^_a e^^a", r.differential == r.target,
                    (r.differential, r.target)),
              Check("Q(h(sum e^_a e^^a)) = D", q == D, (q, D))]
    return checks, {"h(sum e^_a e^^a)": repr(r.via_homotopy)}


def task_quantize_chain(L, max_degree):
    return quantization_chain_checks(L, max_degree), {}


def task_factorization(L, max_degree):
    rep = duflo_factorization_check(L, max_degree)
    w = rep.failures[0] if rep.failures else None
    checks = [Check(f"Q = (sym_U x q) o iota(S) on {rep.checked} monomials", rep.ok, w)]
    W = weil_algebra(L)
    A = ncweil(L)
    S = symmetric(L)
    hats = [W.even_linear(L.B[a]) for a in range(L.dim)]
    bad = None
    for deg in range(max_degree + 1):
        for m in S.monomials(deg):
            p = Element(S, {m: Fraction(1)})
            lhs = quantize(L, S.substitute(p, hats, W))
            rhs = A.from_U(duflo_map(L, p))
            if lhs != rhs:
                bad = (S.format_monomial(m), lhs, rhs)
                break
        if bad:
            break
    checks.append(Check("Q restricted to S(g) is the Duflo map", bad is None, bad))
    return checks, {}


def task_rigidity(L, max_degree):
    G = NCWeilGDA(L)
    T = TensorGDA(G, G, "left")
    c0 = characteristic_map(T, max_degree)
    c1 = characteristic_map(T.with_connection("right"), max_degree)
    psi = rigidity_homotopy(c0, c1)
    checks = rigidity_checks(psi, c0, c1)
    d = next(c for c in checks if c.name.startswith("d(psi)"))
    lie = [c for c in checks if c.name.startswith("L_")]
    iota = [c for c in checks if c.name.startswith("iota_")]
    unit = next(c for c in checks if c.name == "psi(1) = 0")

    def first_bad(cs):
        return next((f"{c.name}: {c.witness}" for c in cs if not c.ok), None)

    out = [d,
           Check("L(psi) = 0", all(c.ok for c in lie), first_bad(lie)),
           Check("iota(psi) = 0", all(c.ok for c in iota), first_bad(iota)),
           unit]
    return out, {}


def task_vogan(L, max_degree):
    pair = _quadratic_pair(L)
    r = relative_dirac_square_check(pair)
    checks = [Check("D_(g,k)^2 = 1/2 Cas_g - 1/2 chi(Cas_k) + (tr_g - tr_k)/48",
                    r.square == r.expected, (r.square, r.expected)),
              Check("D_(g,k) is k-basic", r.basic, None if r.basic else "not basic")]
    bad = None
    for k in range(pair.Lk.dim):
        if pair.gamma_p(pair.Lk.basis_vector(k)) != pair.gamma_p_direct(pair.Lk.basis_vector(k)):
            bad = pair.Lk.names[k]
    checks.append(Check("gamma_p = gamma_g - gamma_k", bad is None, bad))
    Uk = enveloping(pair.Lk)
    cas, _ = casimir(pair.Lk)
    zs = [("1", Uk.one())]
    power = Uk.one()
    for e in range(1, max(2, max_degree // 2) + 1):
        power = power * cas
        zs.append((f"Cas_k^{e}", power))
    bad = None
    for label, z in zs:
        rep = vogan_cocycle_check(pair, z)
        if not rep.ok:
            bad = (label, rep.bracket)
            break
    checks.append(Check("[D_(g,k), chi(z)] = 0 for powers of Cas_k", bad is None, bad))
    return checks, {"D_(g,k)": repr(pair.relative_dirac())}


def task_hc(L, max_degree):
    tri = TriangularPair(L)
    rep = hc_diagram_checks(tri, cap=max_degree)
    checks = list(rep.checks)
    if any(tri.shift(i) for i in range(len(tri.k))):
        checks.append(Check("control: kappa_U without tau fails", rep.control_fails,
                            None if rep.control_fails else "unshifted identity holds"))
    tau = {tri.Lk.names[i]: str(tri.shift(i)) for i in range(len(tri.k))}
    return checks, {"tau shift": json.dumps(tau, sort_keys=True)}


def task_rouviere(L, max_degree):
    sp = SymmetricPair(L)
    rep = rouviere_multiplicativity_check(sp, cap=max_degree)
    checks = list(rep.checks) + [ideal_kill_check(sp)]
    if p_is_abelian(sp):
        checks.append(rouviere_identity_check(sp, min(3, max_degree)))
    return checks, {"invariants tested": str(len(rep.invariants)),
                    "pairs tested": str(rep.pairs)}


def task_isotropic(L, max_degree):
    k = _isotropic_k(L)
    try:
        rep = isotropic_quotient(L, k, cap=min(max_degree, 2))
    except ValueError as exc:
        return [Check("isotropic quotient hypotheses", False, str(exc))], {}
    return list(rep.checks), {"quotient basis checked": str(rep.dimension_checked)}


TASKS = {
    "validate": task_validate,
    "gamma": task_gamma,
    "series": task_series,
    "contraction": task_contraction,
    "duflo": task_duflo,
    "dirac": task_dirac,
    "dirac_square": task_dirac_square,
    "transgression": task_transgression,
    "quantize_chain": task_quantize_chain,
    "factorization": task_factorization,
    "rigidity": task_rigidity,
    "vogan": task_vogan,
    "hc": task_hc,
    "rouviere": task_rouviere,
    "isotropic": task_isotropic,
}


# -- quantize -------------------------------------------------------------------------

_TOKEN = re.compile(r"^(b|h)?x(\d+)$")


def parse_monomial(L, tokens):
    """Product of generator tokens as an element of W(g) in Koszul coordinates."""
    W = weil_algebra(L)
    K = W.koszul
    out = K.one()
    for tok in tokens:
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise UsageError(f"cannot parse generator token {tok!r}")
        i = int(m.group(2))
        if i >= L.dim:
            raise UsageError(f"token {tok!r}: index out of range 0..{L.dim - 1}")
        row = L.B[i]
        if m.group(1) is None:
            g = K.odd_linear(row)
        elif m.group(1) == "b":
            g = K.even_linear(row)
        else:
            g = W.to_koszul(W.even_linear(row))
        out = out * g
    return out


def task_quantize(L, tokens):
    y = parse_monomial(L, tokens)
    W = weil_algebra(L)
    A = ncweil(L)
    q = quantize(L, y, cap=max(8, sum(len(a) + len(b) for a, b in y.terms)))
    checks = []
    lhs, rhs = quantize(L, W.kd(y)), A.d(q)
    checks.append(Check("Q(dw) = dQ(w)", lhs == rhs, (lhs, rhs)))
    bad = None
    for i in range(L.dim):
        lhs, rhs = quantize(L, W.kiota(i, y)), A.iota(i, q)
        if lhs != rhs:
            bad = (L.names[i], lhs, rhs)
            break
    checks.append(Check("Q(iota w) = iota Q(w)", bad is None, bad))
    bad = None
    for i in range(L.dim):
        lhs, rhs = quantize(L, W.klie(i, y)), A.lie(i, q)
        if lhs != rhs:
            bad = (L.names[i], lhs, rhs)
            break
    checks.append(Check("Q(L w) = L Q(w)", bad is None, bad))
    return checks, {"w": repr(y), "Q(w)": repr(q)}


# -- running ----------------------------------------------------------------------------

def run_task(source, task, max_degree, extra=None):
    """Worker entry point; returns plain data so it can cross process boundaries."""
    L = load_source(source)
    start = time.perf_counter()
    if task == "quantize":
        checks, results = task_quantize(L, extra)
    else:
        checks, results = TASKS[task](L, max_degree)
    elapsed = time.perf_counter() - start
    records = []
    for c in checks:
        records.append({
            "name": f"{task}: {c.name}",
            "paper_anchor": ANCHORS[task],
            "status": "pass" if c.ok else "fail",
            "witness": None if c.ok else (fmt(c.witness) or "check failed"),
            "wall_time": elapsed,
        })
    return records, {f"{task}: {k}": v for k, v in results.items()}


def build_report(config):
    """Run the configured command; returns (report dict, exit code)."""
    source = config["source"]
    L = load_source(source)
    command = config["command"]
    max_degree = config["max_degree"]
    if command != "validate":
        rep = liealg.validate(L)
        if not rep.ok:
            bad = next(c for c in rep.checks if not c.ok)
            raise UsageError(f"input fails validation ({bad.name}: {bad.witness})")
    if command == "verify":
        tasks = [t for t in SUITES[config["suite"]] if applicable(t, L) is None]
    elif command == "quantize":
        tasks = ["quantize"]
    else:
        tasks = [COMMAND_TASKS[command]]
    for t in tasks:
        reason = applicable(t, L)
        if reason is not None:
            raise UsageError(f"{command} does not apply to {L.name}: {reason}")
    if command == "quantize":
        parse_monomial(L, config["monomial"])
    extra = config.get("monomial")
    start = time.perf_counter()
    jobs = config.get("jobs", 1)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_task, source, t, max_degree, extra) for t in tasks]
            outputs = [f.result() for f in futures]
    else:
        outputs = [run_task(source, t, max_degree, extra) for t in tasks]
    seconds = time.perf_counter() - start
    records = sorted((r for recs, _ in outputs for r in recs), key=lambda r: r["name"])
    results = {}
    for _, res in outputs:
        results.update(res)
    if not config.get("timings"):
        for r in records:
            r["wall_time"] = None
        seconds = None
    else:
        seconds = round(seconds, 3)
        for r in records:
            r["wall_time"] = round(r["wall_time"], 3)
    failed = sum(r["status"] == "fail" for r in records)
    label = command
    if command == "verify":
        label = f"verify --suite {config['suite']}"
    elif command == "quantize":
        label = "quantize " + " ".join(config["monomial"])
    report = {
        "algebra": L.name,
        "command": label,
        "checks": records,
        "results": dict(sorted(results.items())),
        "summary": {"passed": len(records) - failed, "failed": failed, "seconds": seconds},
    }
    return report, (1 if failed else 0)


def render_text(report):
    lines = [f"algebra: {report['algebra']}", f"command: {report['command']}"]
    for r in report["checks"]:
        status = "PASS" if r["status"] == "pass" else "FAIL"
        t = "" if r["wall_time"] is None else f"  ({r['wall_time']:.3f} s)"
        lines.append(f"{status}  {r['name']}  [{r['paper_anchor']}]{t}")
        if r["witness"] is not None:
            lines.append(f"      witness: {r['witness']}")
    for k, v in report["results"].items():
        lines.append(f"{k} = {v}")
    s = report["summary"]
    tail = "" if s["seconds"] is None else f" in {s['seconds']:.3f} s"
    lines.append(f"summary: {s['passed']} passed, {s['failed']} failed{tail}")
    return "\n".join(lines) + "\n"


def render_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _add_common(p, defaults):
    """Shared flags.  Subcommands use SUPPRESS so flags given before the
    command are not reset by the subparser defaults."""
    def d(value):
        return value if defaults else argparse.SUPPRESS

    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", default=d(None),
                     help="Lie algebra description file (JSON)")
    src.add_argument("--catalog", metavar="NAME", default=d(None),
                     help="catalog entry (default sl2)")
    p.add_argument("--max-degree", type=_positive, default=d(4), metavar="N")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--jobs", type=_positive, default=d(1), metavar="N")
    p.add_argument("--timings", action="store_true", default=d(False),
                   help="include wall-clock times (makes output nondeterministic)")


def make_parser():
    parser = argparse.ArgumentParser(prog="chernweil",
                                     description="Exact checks for quadratic Lie algebras.")
    _add_common(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _add_common(p, False)
        return p

    for name in ("validate", "dirac", "dirac-square", "hc", "vogan", "rouviere", "rigidity"):
        add(name)
    add("duflo").add_argument("degree", type=_positive)
    add("quantize").add_argument("monomial", nargs="+",
                                 help="tokens x3 (odd), bx3 (bar), hx3 (hat)")
    add("verify").add_argument("--suite", choices=("core", "weil", "relative", "all"),
                               default="all")
    add("catalog", help="list catalog entries")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog":
        for name in sorted(liealg.catalog()):
            print(name)
        return 0
    source = ("file", args.input) if args.input else ("catalog", args.catalog or "sl2")
    config = {
        "source": source,
        "command": args.command,
        "max_degree": args.degree if args.command == "duflo" else args.max_degree,
        "format": args.format,
        "jobs": args.jobs,
        "timings": args.timings,
        "suite": getattr(args, "suite", None),
        "monomial": getattr(args, "monomial", None),
    }
    try:
        report, code = build_report(config)
    except (InputError, UsageError) as exc:
        print(f"chernweil: error: {exc}", file=sys.stderr)
        return 2
    out = render_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(out)
    if code:
        first = next(r for r in report["checks"] if r["status"] == "fail")
        print(f"chernweil: FAILED {first['name']} [{first['paper_anchor']}]: "
              f"{first['witness']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
