"""Command-line entry point: ``sievelab <subcommand> [options]``.

Reports are TSV with ``#``-prefixed metadata lines (spec hash, truncation,
window, seed) followed by a header row, or one JSON object with ``meta`` and
``rows`` under ``--json``. Exit status: 0 success, 1 domain error (an
``error<TAB>REASON<TAB>message`` line on stderr), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import analysis, dynamics, pnt, polysieve, structure
from .analysis import Window
from .dsl import format_sieve, load_sieve, parse_sieve
from .errors import CertificateError, DslError, SieveError
from .model import Sieve, SieveSpec, level_for_primes, materialize
from .residue import as_point

DEFAULT_SEED = 20240601
# parse-time failures that are semantic rather than syntactic exit 1
DOMAIN_PARSE_ERRORS = {"FullClass", "CoprimalityViolation", "BoundExceeded", "InvalidModulus"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


class Report:
    def __init__(self, columns: Sequence[str], meta: dict | None = None):
        self.columns = list(columns)
        self.meta = dict(meta or {})
        self.rows: list[list[Any]] = []

    def add(self, *values):
        self.rows.append(list(values))

    def emit(self, as_json: bool, out=None):
        out = out or sys.stdout
        if as_json:
            obj = {
                "meta": {k: _jsonable(v) for k, v in self.meta.items()},
                "rows": [{c: _jsonable(v) for c, v in zip(self.columns, r)} for r in self.rows],
            }
            out.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
            return
        for k, v in self.meta.items():
            out.write(f"# {k}: {_cell(v)}\n")
        out.write("\t".join(self.columns) + "\n")
        for r in self.rows:
            out.write("\t".join(_cell(v) for v in r) + "\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, Fraction):
        return f"{float(v):.12g}"
    if isinstance(v, (list, tuple)):
        return ",".join(_cell(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if hasattr(v, "item"):
        return v.item()
    return str(v)


def _pt(p) -> str:
    return str(p[0]) if len(p) == 1 else "(" + ",".join(map(str, p)) + ")"


# ---------------------------------------------------------------------------
# input helpers


def parse_points(text: str | None, k: int = 1) -> list[tuple[int, ...]]:
    """``"2,4"`` for Z, ``"(1,2);(3,4)"`` for Z^k; empty string is the empty set."""
    if text is None or not text.strip():
        return []
    text = text.strip()
    if "(" in text:
        pts = [tuple(int(x) for x in m.split(",")) for m in re.findall(r"\(([^)]*)\)", text)]
    else:
        pts = [(int(x),) for x in text.split(",") if x.strip()]
    return [as_point(p, k) for p in pts]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _load_spec(path: str) -> SieveSpec:
    try:
        return load_sieve(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _sieve(args, which: str = "spec") -> Sieve:
    spec = getattr(args, which, None)
    cls_text = getattr(args, "cls", None) if which == "spec" else None
    if spec is None and cls_text:
        spec_obj = parse_sieve(f"ring {args.ring}\n" + "\n".join("class " + c for c in cls_text))
    elif spec is None:
        raise UsageError(f"--{which} is required")
    else:
        spec_obj = _load_spec(spec)
    Lname = "L" if which == "spec" else "L2"
    L = getattr(args, Lname, None)
    if L is None and which == "spec2":
        L = getattr(args, "L", None)
    pmax = getattr(args, "pmax", None)
    if L is None and pmax is not None:
        L = level_for_primes(spec_obj, pmax)
    if L is None:
        if not spec_obj.is_finite:
            raise UsageError("infinite spec: give --L or --pmax")
        return materialize(spec_obj, 10**9, strict=False)
    return materialize(spec_obj, L)


def _base_meta(args, sieve: Sieve | None = None, **extra) -> dict:
    meta = {"command": args.command}
    if sieve is not None:
        meta["spec_hash"] = sieve.spec.digest()
        meta["L"] = sieve.L
    meta.update(extra)
    return meta


def _window(args, k: int) -> Window:
    if not getattr(args, "window", None):
        raise UsageError("--window is required")
    w = Window.parse(args.window)
    if w.k != k:
        raise UsageError(f"window has {w.k} coordinates, ring has {k}")
    return w


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SIEVELAB_SEED")
    return int(env) if env else DEFAULT_SEED


# ---------------------------------------------------------------------------
# analysis commands


def cmd_enumerate(args):
    s = _sieve(args)
    w = _window(args, s.k)
    rep = analysis.enumerate_free(s, w)
    out = Report(["point", "free", "excluded_by"], _base_meta(args, s, window=str(w), free=rep.count, size=w.size))
    if args.count_only:
        out.columns = ["free", "size", "ratio"]
        out.add(rep.count, w.size, rep.ratio)
        return out
    pts = w.points()
    flat = rep.excluded_by.ravel()
    for p, e in zip(pts, flat):
        if e == 0 or args.all:
            out.add(_pt(tuple(int(v) for v in p)), int(e == 0), int(e))
    return out


def cmd_density(args):
    s = _sieve(args)
    br = analysis.product_density(s)
    out = Report(["kind", "N", "value", "lower", "upper", "certified"], _base_meta(args, s))
    out.add("product", "-", br.upper, br.lower if br.certified else None, br.upper, br.certified)
    if args.N:
        for N, r in analysis.empirical_density(s, args.family, _ints(args.N)):
            out.add("empirical", N, r, None, None, "-")
    return out


def cmd_tails(args):
    s = _sieve(args)
    w = _window(args, s.k)
    Ls = _ints(args.levels)
    rows = analysis.tails_profile(s, w, Ls)
    meta = _base_meta(args, s, window=str(w), L_max=s.L, note="lower bounds for the untruncated tails")
    out = Report(["L", "weak", "strong", "weak_ratio", "strong_ratio"], meta)
    for r in rows:
        out.add(r.L, r.weak, r.strong, r.weak_ratio, r.strong_ratio)
    return out


def cmd_admissible(args):
    s = _sieve(args)
    A = parse_points(args.A, s.k)
    v = analysis.is_admissible(A, s)
    out = Report(["A", "verdict"], _base_meta(args, s))
    out.add(";".join(map(_pt, A)), str(v))
    return out


def cmd_pattern(args):
    s = _sieve(args)
    w = _window(args, s.k)
    A, B = parse_points(args.A, s.k), parse_points(args.B, s.k)
    count, ratio = analysis.pattern_count(A, B, s, w)
    out = Report(["A", "B", "count", "ratio"], _base_meta(args, s, window=str(w)))
    out.add(";".join(map(_pt, A)), ";".join(map(_pt, B)), count, ratio)
    return out


# ---------------------------------------------------------------------------
# structure commands


def cmd_stabilizer(args):
    s = _sieve(args)
    out = Report(["index", "modulus", "order", "stabilizer_index", "elements"], _base_meta(args, s))
    for c in s.classes:
        st = structure.stabilizer(c.residues)
        elems = ";".join(map(_pt, st.elements)) if st.order <= 64 else f"<{st.order} elements>"
        out.add(c.index, str(c.modulus), st.order, st.index if not c.residues.is_empty() else None, elems)
    return out


def cmd_minimal(args):
    s = _sieve(args)
    out = Report(["index", "modulus", "verdict", "parts"], _base_meta(args, s))
    for c in s.classes:
        v = structure.minimal_class(c.residues)
        if isinstance(v, structure.Minimal):
            out.add(c.index, str(c.modulus), "Minimal", None)
        else:
            parts = " ".join(f"{d}:{{{';'.join(map(_pt, r.residues))}}}" for d, r in v.parts)
            out.add(c.index, str(c.modulus), "Decomposition", parts or "[]")
    return out


def cmd_contract(args):
    s = _sieve(args)
    c = structure.contract_sieve(s)
    text = format_sieve(c.spec)
    if args.out:
        Path(args.out).write_text(text)
    out = Report(["index", "modulus", "residues"], _base_meta(args, s, contracted_hash=c.spec.digest(), classes=c.L))
    out.text = text
    for cl in c.classes:
        out.add(cl.index, str(cl.modulus), ";".join(map(_pt, cl.residues.residues)))
    return out


def cmd_equiv(args):
    s1, s2 = _sieve(args), _sieve(args, "spec2")
    v = structure.check_equivalent(s1, s2)
    meta = _base_meta(args, s1, spec2_hash=s2.spec.digest(), L2=s2.L)
    out = Report(["verdict", "side", "index", "witness"], meta)
    out.add(str(v).split("(")[0], v.side, v.index, _pt(v.witness) if v.witness else None)
    out.meta["verdict"] = str(v)
    return out


def cmd_union(args):
    s1, s2 = _sieve(args), _sieve(args, "spec2")
    res = structure.union_sieves(s1, s2)
    if args.out:
        Path(args.out).write_text(format_sieve(res.sieve.spec))
    meta = _base_meta(args, s1, spec2_hash=s2.spec.digest(), union_hash=res.sieve.spec.digest())
    out = Report(["component", "left", "right", "modulus", "size"], meta)
    for j, (a, b, m, size) in enumerate(res.rows(), 1):
        out.add(j, a, b, str(m), size)
    return out


def cmd_lambda(args):
    s = _sieve(args)
    rows = structure.lambda_profile(s)
    out = Report(["index", "lambda", "running_max", "record"], _base_meta(args, s))
    for r in rows:
        out.add(r.index, r.gap, r.running_max, int(r.record))
    out.meta["growing"] = structure.lambda_growing(rows)
    return out


# ---------------------------------------------------------------------------
# dynamics commands


def _patterns(args, k) -> list:
    pats = []
    for text in args.pattern or []:
        a, _, b = text.partition("|")
        pats.append(dynamics.Pattern.of(parse_points(a, k), parse_points(b, k), k))
    if not pats and args.A is not None:
        pats.append(dynamics.Pattern.of(parse_points(args.A, k), parse_points(args.B, k), k))
    if not pats:
        raise UsageError("give --pattern 'A|B' (repeatable) or --A/--B")
    return pats


def cmd_mirsky(args):
    s = _sieve(args)
    seed = _seed(args)
    pats = _patterns(args, s.k)
    t = dynamics.mirsky_sample(s, pats, args.n, seed)
    out = Report(["A", "B", "hits", "frequency", "stderr", "cylinder"], _base_meta(args, s, seed=seed, n=args.n))
    for p, hits, f, se in t.rows():
        cyl = dynamics.cylinder_measure(p, s)
        out.add(";".join(map(_pt, p.A)), ";".join(map(_pt, p.B)), hits, f, se, float(cyl.value))
    return out


def cmd_cylinder(args):
    s = _sieve(args)
    out = Report(["A", "B", "value", "lower", "upper", "exact_zero", "certified"], _base_meta(args, s))
    for p in _patterns(args, s.k):
        c = dynamics.cylinder_measure(p, s)
        val = str(c.value) if isinstance(c.value, Fraction) and args.exact else float(c.value)
        out.add(
            ";".join(map(_pt, p.A)), ";".join(map(_pt, p.B)), val,
            c.bracket.lower, c.bracket.upper, int(c.exact_zero), int(c.bracket.certified),
        )
    return out


def cmd_xr_test(args):
    s = _sieve(args)
    A, B = parse_points(args.A, s.k), parse_points(args.B, s.k)
    res = dynamics.xr_window_test(A, B, s)
    out = Report(["verdict", "assignment", "witnesses"], _base_meta(args, s))
    if isinstance(res, dynamics.NoCertificate):
        out.add(str(res), None, None)
        return out
    if args.cert:
        Path(args.cert).write_text(res.to_json() + "\n")
    wit = ";".join(f"{i}:{_pt(x)}" for i, x in sorted(res.witnesses.items()))
    out.add("Certificate", list(res.assignment), wit)
    out.meta["valid"] = dynamics.verify_certificate(res, s)
    return out


def cmd_verify_cert(args):
    try:
        cert = dynamics.XrCertificate.from_json(Path(args.cert).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {args.cert}: {e.strerror}") from e
    s = _sieve(args) if args.spec else None
    ok = dynamics.verify_certificate(cert, s)
    out = Report(["valid", "points", "indices"], _base_meta(args, s, cert=args.cert))
    out.add(int(ok), len(cert.B), len(set(cert.assignment)))
    if not ok:
        out.emit(args.json)
        raise CertificateError("certificate failed re-check")
    return out


def cmd_spectrum(args):
    s = _sieve(args)
    rep = dynamics.spectrum(s)
    meta = _base_meta(args, s, statement=rep.describe())
    out = Report(["index", "modulus", "stabilizer_order", "invariant_factors", "exponent"], meta)
    for r in rep.rows:
        out.add(r.index, str(r.modulus), r.stabilizer_order, list(r.invariants) or [1], r.exponent)
    return out


def cmd_sumset(args):
    s = _sieve(args)
    w = _window(args, s.k)
    seed = _seed(args)
    A = parse_points(args.A, s.k)
    st = dynamics.sample_shifted_sieves(s, A, w, n=args.n, seed=seed, strategy=args.strategy,
                                        L_check=args.L_check, threshold=args.threshold)
    meta = _base_meta(args, s, window=str(w), seed=seed, strategy=args.strategy, verified=st.verified)
    if args.strategy == "greedy":
        out = Report(["B_count", "B_density", "B_first"], meta)
        out.add(st.B_count, st.B_density, ";".join(map(_pt, st.B_sample)))
    else:
        out = Report(["sample", "weak_ratio"], meta)
        out.meta.update(L_check=st.L_check, below_fraction=st.below_fraction, below_stderr=st.below_stderr)
        for j, r in enumerate(st.weak_ratios):
            out.add(j, r)
    if not st.verified:
        raise SieveError("sumset inclusion A+B in F_R(g) failed")
    return out


# ---------------------------------------------------------------------------
# polynomial commands


def _polys(args) -> list:
    if not args.poly:
        raise UsageError("--poly is required")
    return [polysieve.IntPolynomial.parse(p) for p in args.poly]


def cmd_poly_sieve(args):
    fs = _polys(args)
    ps = polysieve.build_poly_sieve(fs, args.l, args.pmax)
    text = ps.dsl()
    if args.out:
        Path(args.out).write_text(text)
    out = Report(["p", "modulus", "roots"], {"command": args.command, "c_max": ps.c_max,
                                              "exceptional": list(ps.exceptional) or None})
    out.text = text
    for p, q, roots in ps.classes:
        out.add(p, q, list(roots))
    return out


def cmd_poly_density(args):
    fs = _polys(args)
    d = polysieve.multi_poly_density(fs, args.l, args.pmax)
    out = Report(["lower", "upper", "primes", "label"], {"command": args.command, "P_max": args.pmax, "l": args.l})
    out.add(d.bracket.lower, d.bracket.upper, d.primes, d.label)
    return out


def cmd_poly_count(args):
    fs = _polys(args)
    c = polysieve.count_joint_lfree(fs, args.l, args.N)
    out = Report(["N", "count", "ratio"], {"command": args.command, "l": args.l})
    out.add(args.N, c, c / args.N if args.N else 0.0)
    return out


def cmd_resultant(args):
    fs = _polys(args)
    if len(fs) == 1:
        out = Report(["discriminant"], {"command": args.command})
        out.add(polysieve.discriminant(fs[0]))
        return out
    if len(fs) != 2:
        raise UsageError("resultant takes two --poly arguments (one for the discriminant)")
    out = Report(["resultant"], {"command": args.command})
    out.add(polysieve.resultant(fs[0], fs[1]))
    return out


# ---------------------------------------------------------------------------
# pnt commands


def cmd_omega(args):
    t = pnt.omega_table(args.N)
    out = Report(["m", "Omega"], {"command": args.command, "N": args.N,
                                  "liouville_mean": pnt.liouville_mean(args.N, t)})
    ms = _ints(args.at) if args.at else range(1, min(args.N, args.limit) + 1)
    for m in ms:
        out.add(m, t[m])
    return out


def _maybe_sieve(args) -> Sieve:
    if args.spec or getattr(args, "cls", None):
        return _sieve(args)
    return materialize(SieveSpec(1), 0)


def cmd_pnt_average(args):
    s = _maybe_sieve(args)
    rot = pnt.FiniteRotation.parse(args.q, args.f, args.x0)
    r = pnt.ergodic_average(s, args.N, rot)
    meta = _base_meta(args, s, N=args.N, q=args.q, f=args.f, x0=args.x0,
                      lhs_exact=str(r.lhs), rhs_exact=str(r.rhs))
    out = Report(["lhs", "rhs", "abs_diff", "free_count"], meta)
    out.add(r.lhs, r.rhs, r.error, r.free_count)
    return out


def cmd_besicovitch(args):
    s = _sieve(args)
    e = pnt.besicovitch_error(s, args.L_inner, args.N)
    out = Report(["L_inner", "N", "error", "count"], _base_meta(args, s, window=f"1..{args.N}"))
    out.add(args.L_inner, args.N, e, int(e * args.N))
    return out


# ---------------------------------------------------------------------------
# parser


def _sieve_opts(p, second: bool = False):
    p.add_argument("--spec", help="sieve DSL file")
    p.add_argument("--class", dest="cls", action="append", metavar="TEXT",
                   help="inline class, e.g. 'modulus 4 residues {0,2}' (repeatable, instead of --spec)")
    p.add_argument("--ring", default="Z", help="ring for inline classes (Z or Z^k)")
    p.add_argument("--L", type=int, help="truncation level (number of classes)")
    p.add_argument("--pmax", type=int, help="choose L to cover stream primes <= PMAX")
    if second:
        p.add_argument("--spec2", required=True, help="second sieve DSL file")
        p.add_argument("--L2", type=int, help="truncation for the second sieve (default --L)")


COMMANDS = {}


def _cmd(sub, name, func, help, sieve=True, second=False, window=False, seed=False):
    p = sub.add_parser(name, help=help, description=help)
    if sieve:
        _sieve_opts(p, second)
    if window:
        p.add_argument("--window", help="a..b or a..b,c..d (inclusive)")
    if seed:
        p.add_argument("--seed", type=int, help=f"RNG seed (default $SIEVELAB_SEED or {DEFAULT_SEED})")
    p.add_argument("--json", action="store_true", help="emit JSON {meta, rows}")
    COMMANDS[name] = func
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sievelab", description="Erdős sieves and B-free numbers")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = _cmd(sub, "enumerate", cmd_enumerate, "free points of a window (columns: point, free, excluded_by)", window=True)
    p.add_argument("--all", action="store_true", help="list non-free points too")
    p.add_argument("--count-only", action="store_true")
    p = _cmd(sub, "density", cmd_density, "product density bracket, optionally empirical densities")
    p.add_argument("--N", help="comma list of window sizes for empirical densities")
    p.add_argument("--family", default="interval1", choices=["interval1", "interval0", "box"])
    p = _cmd(sub, "tails", cmd_tails, "weak/strong tail counts at levels L < L_max (columns: L, weak, strong, ratios)",
             window=True)
    p.add_argument("--levels", required=True, help="comma list of levels L")
    p = _cmd(sub, "admissible", cmd_admissible, "admissibility verdict for a finite set")
    p.add_argument("--A", required=True)
    p = _cmd(sub, "pattern", cmd_pattern, "count x with x+A free and x+B sieved", window=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", default="")

    _cmd(sub, "stabilizer", cmd_stabilizer, "stabilizer subgroup of each class")
    _cmd(sub, "minimal", cmd_minimal, "minimality verdict and decomposition of each class")
    p = _cmd(sub, "contract", cmd_contract, "contract to a minimal sieve; prints sieve DSL")
    p.add_argument("--out", help="also write the contracted sieve here")
    _cmd(sub, "equiv", cmd_equiv, "equivalence test of two sieve prefixes", second=True)
    p = _cmd(sub, "union", cmd_union, "union sieve over a common basis", second=True)
    p.add_argument("--out", help="write the union sieve DSL here")
    _cmd(sub, "lambda", cmd_lambda, "minimal-gap profile lambda(R_i)")

    p = _cmd(sub, "mirsky", cmd_mirsky, "Monte-Carlo cylinder frequencies under the Mirsky measure", seed=True)
    p.add_argument("--pattern", action="append", help="'A|B', e.g. '2,4|3' (repeatable)")
    p.add_argument("--A")
    p.add_argument("--B", default="")
    p.add_argument("--n", type=int, default=100_000)
    p = _cmd(sub, "cylinder", cmd_cylinder, "truncated Mirsky measure of C_{A,B} with bracket")
    p.add_argument("--pattern", action="append")
    p.add_argument("--A")
    p.add_argument("--B", default="")
    p.add_argument("--exact", action="store_true", help="print exact rationals when available")
    p = _cmd(sub, "xr-test", cmd_xr_test, "search an X_R membership certificate")
    p.add_argument("--A", required=True, help="finite admissible set A'")
    p.add_argument("--B", required=True, help="excluded points b_1..b_l")
    p.add_argument("--cert", help="write the certificate JSON here")
    _cmd(sub, "spectrum", cmd_spectrum, "invariant factors of Z^k / F(R_i) per class")
    p = _cmd(sub, "sumset", cmd_sumset, "shifted-sieve statistics for -A + R(g)", window=True, seed=True)
    p.add_argument("--A", required=True)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--strategy", choices=["uniform", "greedy"], default="uniform")
    p.add_argument("--L-check", dest="L_check", type=int)
    p.add_argument("--threshold", type=float, default=0.05)

    for name, func, help in [
        ("poly-sieve", cmd_poly_sieve, "sieve of l-free values of polynomials; prints sieve DSL"),
        ("poly-density", cmd_poly_density, "density bracket for jointly l-free values"),
        ("poly-count", cmd_poly_count, "exact count of 1<=m<=N with all f_i(m) l-free"),
        ("resultant", cmd_resultant, "resultant of two polynomials, or discriminant of one"),
    ]:
        p = _cmd(sub, name, func, help, sieve=False)
        p.add_argument("--poly", action="append", help="coefficients low to high, e.g. 1,0,1 = X^2+1")
        if name != "resultant":
            p.add_argument("--l", type=int, default=2)
        if name in ("poly-sieve", "poly-density"):
            p.add_argument("--pmax", type=int, default=1000)
        if name == "poly-sieve":
            p.add_argument("--out")
        if name == "poly-count":
            p.add_argument("--N", type=int, required=True)

    p = _cmd(sub, "omega", cmd_omega, "Omega(m) table", sieve=False)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--at", help="comma list of m to print")
    p.add_argument("--limit", type=int, default=100, help="rows printed without --at")
    p = _cmd(sub, "pnt-average", cmd_pnt_average, "ergodic PNT average over free numbers in [1..N]")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--f", default="1,-1", help="observable values on Z/q")
    p.add_argument("--x0", type=int, default=0)
    p = _cmd(sub, "besicovitch", cmd_besicovitch, "L1 distance between levels L_inner and L on [1..N]")
    p.add_argument("--L-inner", dest="L_inner", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p = _cmd(sub, "verify-cert", cmd_verify_cert, "re-check an X_R certificate")
    p.add_argument("--cert", required=True)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) if e.code in (0, None) else 2
    try:
        out = COMMANDS[args.command](args)
        if getattr(out, "text", None) is not None and not args.json:
            for k, v in out.meta.items():
                sys.stdout.write(f"# {k}: {_cell(v)}\n")
            sys.stdout.write(out.text if out.text.endswith("\n") else out.text + "\n")
        else:
            out.emit(args.json)
        return 0
    except SieveError as e:
        sys.stderr.write(f"error\t{e.token()}\t{e}\n")
        return 1
    except DslError as e:
        sys.stderr.write(f"error\t{e.token()}\t{e}\n")
        return 1 if e.reason in DOMAIN_PARSE_ERRORS else 2
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
