"""Line-oriented sieve description language: parser and canonical printer.

Example::

    ring Z
    stream P = primes
    family i in 1..: modulus P(i)^2 residues {0}
    override i == 1: residues {}

``format_sieve(parse_sieve(text))`` is the canonical form of ``text`` and is
a fixed point of parse-then-print.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

from .errors import DslError, SieveError
from .model import (
    Affine,
    ClassEntry,
    CosetTerm,
    ExplicitTerm,
    FamilyRule,
    ModComponent,
    PrimeStream,
    ResidueSpec,
    SieveSpec,
    StreamFactor,
    _StreamCache,
    eval_modexpr,
    eval_residues,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\.\.|==|[{}(),:^*+\-|=]))")


@dataclass
class _Tok:
    kind: str  # "int" | "ident" | "op" | "eol"
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks, pos = [], 0
    code = line.split("#", 1)[0].rstrip()
    while pos < len(code):
        m = _TOKEN.match(code, pos)
        if not m or m.end() == pos:
            col = pos + len(code[pos:]) - len(code[pos:].lstrip()) + 1
            raise DslError("SyntaxError", f"unexpected character {code[col - 1]!r}", lineno, col)
        col = m.start(m.lastindex) + 1
        if m.group(1):
            toks.append(_Tok("int", m.group(1), col))
        elif m.group(2):
            toks.append(_Tok("ident", m.group(2), col))
        else:
            toks.append(_Tok("op", m.group(3), col))
        pos = m.end()
    toks.append(_Tok("eol", "", len(code) + 1))
    return toks


class _LineParser:
    def __init__(self, toks: list[_Tok], lineno: int, k: int, var: str | None, streams: dict):
        self.toks = toks
        self.pos = 0
        self.lineno = lineno
        self.k = k
        self.var = var
        self.streams = streams

    # -- token helpers ------------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, reason: str, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise DslError(reason, message, self.lineno, tok.col)

    def peek(self, text: str) -> bool:
        return self.tok.kind != "eol" and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if not self.peek(text):
            found = self.tok.text or "end of line"
            self.error("SyntaxError", f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def integer(self, signed: bool = False) -> int:
        neg = signed and self.accept("-")
        if self.tok.kind != "int":
            self.error("SyntaxError", f"expected integer, found {self.tok.text or 'end of line'!r}")
        v = int(self.tok.text)
        self.pos += 1
        return -v if neg else v

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error("SyntaxError", f"expected identifier, found {self.tok.text or 'end of line'!r}")
        v = self.tok.text
        self.pos += 1
        return v

    def end(self):
        if self.tok.kind != "eol":
            self.error("SyntaxError", f"unexpected {self.tok.text!r}")

    # -- expressions ----------------------------------------------------------
    def affine(self) -> Affine:
        slope = const = 0
        sign = -1 if self.accept("-") else 1
        while True:
            if self.tok.kind == "int":
                v = self.integer()
                if self.accept("*"):
                    self._var_ref()
                    slope += sign * v
                else:
                    const += sign * v
            elif self.tok.kind == "ident":
                self._var_ref()
                slope += sign
            else:
                self.error("SyntaxError", "expected affine expression")
            if self.accept("+"):
                sign = -1 if self.accept("-") else 1
            elif self.accept("-"):
                sign = -1
            else:
                return Affine(slope, const)

    def _var_ref(self):
        tok = self.tok
        name = self.ident()
        if name != self.var:
            if self.var is None:
                self.error("SyntaxError", f"index variable {name!r} used outside a family", tok)
            self.error("SyntaxError", f"unknown index variable {name!r} (family uses {self.var!r})", tok)

    def factor(self, comp: list):
        if self.tok.kind == "int":
            v = self.integer()
            if self.accept("^"):
                v = v ** self.integer()
            comp[0] *= v
            return
        tok = self.tok
        name = self.ident()
        if name not in self.streams:
            self.error("UnknownStream", f"unknown stream {name!r}", tok)
        self.expect("(")
        arg = self.affine()
        self.expect(")")
        power = self.integer() if self.accept("^") else 1
        if power < 1:
            self.error("SyntaxError", "stream powers must be >= 1")
        comp[1].append(StreamFactor(name, arg, power))

    def component(self) -> ModComponent:
        comp = [1, []]
        self.factor(comp)
        while self.accept("*"):
            self.factor(comp)
        if comp[0] < 1:
            self.error("SyntaxError", "modulus constants must be positive")
        return ModComponent(comp[0], tuple(comp[1]))

    def modexpr(self) -> tuple:
        start = self.tok
        if self.accept("("):
            comps = [self.component()]
            while self.accept(","):
                comps.append(self.component())
            self.expect(")")
        else:
            comps = [self.component()]
        if len(comps) != self.k:
            self.error("ArityMismatch", f"modulus has {len(comps)} components, ring has {self.k}", start)
        return tuple(comps)

    def point(self) -> tuple:
        start = self.tok
        if self.accept("("):
            pt = [self.affine()]
            while self.accept(","):
                pt.append(self.affine())
            self.expect(")")
        else:
            pt = [self.affine()]
        if len(pt) != self.k:
            self.error("ArityMismatch", f"point has {len(pt)} coordinates, ring has {self.k}", start)
        return tuple(pt)

    def resterm(self):
        if self.accept("{"):
            pts = []
            if not self.peek("}"):
                pts.append(self.point())
                while self.accept(","):
                    pts.append(self.point())
            self.expect("}")
            return ExplicitTerm(tuple(pts)) if pts else None
        if self.accept("coset"):
            off = self.point()
            self.expect("mod")
            return CosetTerm(off, self.modexpr())
        self.error("SyntaxError", "expected '{' or 'coset'")

    def resset(self) -> ResidueSpec:
        terms = [self.resterm()]
        while self.accept("|") or self.accept("union"):
            terms.append(self.resterm())
        return ResidueSpec(tuple(t for t in terms if t is not None))


def parse_sieve(text: str) -> SieveSpec:
    """Parse sieve-DSL source into a :class:`SieveSpec`."""
    k = None
    streams: dict[str, PrimeStream] = {}
    classes: list[tuple[ClassEntry, int]] = []
    families: list[FamilyRule] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokenize(line, lineno)
        if toks[0].kind == "eol":
            continue
        head = toks[0]
        p = _LineParser(toks, lineno, k or 1, None, streams)
        if head.text != "ring" and k is None:
            p.error("SyntaxError", "the first statement must be 'ring'")
        p.pos = 1
        if head.text == "ring":
            if k is not None:
                p.error("SyntaxError", "duplicate 'ring' statement", head)
            p.expect("Z")
            k = p.integer() if p.accept("^") else 1
            if k < 1:
                p.error("SyntaxError", "ring dimension must be >= 1")
            p.end()
        elif head.text == "stream":
            name_tok = p.tok
            name = p.ident()
            if name in streams:
                p.error("SyntaxError", f"stream {name!r} redefined", name_tok)
            p.expect("=")
            if p.accept("primes"):
                mod, res = 1, 0
                if p.accept("where"):
                    p.expect("mod")
                    mod_tok = p.tok
                    mod = p.integer()
                    p.expect("==")
                    res = p.integer()
                    if mod < 1 or math.gcd(res, mod) != 1:
                        p.error("NonCoprimeFilter", f"filter {res} mod {mod} is not coprime", mod_tok)
                    res %= mod
                stream = PrimeStream(name, "primes", mod, res)
            elif p.accept("list"):
                p.expect("{")
                vals = []
                while not p.peek("}"):
                    vals.append(p.integer())
                    p.accept(",")
                p.expect("}")
                stream = PrimeStream(name, "list", values=tuple(vals))
            else:
                p.error("SyntaxError", "expected 'primes' or 'list'")
            p.end()
            streams[name] = stream
        elif head.text == "class":
            p.expect("modulus")
            mod = p.modexpr()
            p.expect("residues")
            res = p.resset()
            p.end()
            classes.append((ClassEntry(mod, res), lineno))
        elif head.text == "family":
            var = p.ident()
            p.var = var
            p.expect("in")
            start = p.integer()
            p.expect("..")
            stop = p.integer() if p.tok.kind == "int" else None
            p.expect(":")
            p.expect("modulus")
            mod = p.modexpr()
            p.expect("residues")
            res = p.resset()
            bound = p.integer() if p.accept("bound") else None
            p.end()
            if stop is not None and stop < start:
                p.error("SyntaxError", "empty index range", head)
            families.append(FamilyRule(var, start, stop, mod, res, bound))
        elif head.text == "override":
            var_tok = p.tok
            var = p.ident()
            target = next((n for n in range(len(families) - 1, -1, -1) if families[n].var == var), None)
            if target is None:
                p.error("SyntaxError", f"no family with index variable {var!r}", var_tok)
            p.var = var
            p.expect("==")
            idx = p.integer()
            p.expect(":")
            p.expect("residues")
            res = p.resset()
            p.end()
            fam = families[target]
            if fam.override_for(idx) is not None:
                p.error("SyntaxError", f"duplicate override for {var} == {idx}", head)
            families[target] = replace(fam, overrides=fam.overrides + ((idx, res),))
        else:
            p.error("SyntaxError", f"unknown statement {head.text!r}", head)
    if k is None:
        raise DslError("SyntaxError", "missing 'ring' statement", 1, 1)
    spec = SieveSpec(k, tuple(streams.values()), tuple(c for c, _ in classes), tuple(families))
    caches = {s.name: _StreamCache(s) for s in spec.streams}
    for entry, lineno in classes:
        try:
            m = eval_modexpr(entry.modulus, None, caches)
            rs = eval_residues(entry.residues, m, None, caches)
        except SieveError as exc:
            raise DslError(exc.reason, str(exc), lineno, 1) from exc
        if rs.is_full():
            raise DslError("FullClass", f"class modulo {m} covers every residue", lineno, 1)
    return spec


# ---------------------------------------------------------------------------
# printing


def _fmt_affine(a: Affine, var: str | None) -> str:
    if a.slope == 0:
        return str(a.const)
    if a.slope == 1:
        s = var
    elif a.slope == -1:
        s = f"-{var}"
    else:
        s = f"{a.slope}*{var}"
    if a.const > 0:
        s += f"+{a.const}"
    elif a.const < 0:
        s += f"-{-a.const}"
    return s


def _fmt_component(c: ModComponent, var: str | None) -> str:
    parts = [] if c.const == 1 and c.factors else [str(c.const)]
    for f in c.factors:
        parts.append(f"{f.stream}({_fmt_affine(f.arg, var)})" + (f"^{f.power}" if f.power != 1 else ""))
    return "*".join(parts)


def _fmt_modexpr(expr, var) -> str:
    if len(expr) == 1:
        return _fmt_component(expr[0], var)
    return "(" + ", ".join(_fmt_component(c, var) for c in expr) + ")"


def _fmt_point(pt, var) -> str:
    if len(pt) == 1:
        return _fmt_affine(pt[0], var)
    return "(" + ", ".join(_fmt_affine(a, var) for a in pt) + ")"


def _fmt_resset(spec: ResidueSpec, var) -> str:
    if not spec.terms:
        return "{}"
    out = []
    for t in spec.terms:
        if isinstance(t, ExplicitTerm):
            out.append("{" + ", ".join(_fmt_point(p, var) for p in t.points) + "}")
        else:
            out.append(f"coset {_fmt_point(t.offset, var)} mod {_fmt_modexpr(t.divisor, var)}")
    return " | ".join(out)


def format_sieve(spec: SieveSpec) -> str:
    """Canonical DSL text of ``spec``."""
    lines = ["ring Z" if spec.k == 1 else f"ring Z^{spec.k}"]
    for s in spec.streams:
        lines.append(f"stream {s.name} = {s.describe()}")
    for c in spec.classes:
        lines.append(f"class modulus {_fmt_modexpr(c.modulus, None)} residues {_fmt_resset(c.residues, None)}")
    for f in spec.families:
        rng = f"{f.start}..{f.stop if f.stop is not None else ''}"
        line = (
            f"family {f.var} in {rng}: modulus {_fmt_modexpr(f.modulus, f.var)} "
            f"residues {_fmt_resset(f.residues, f.var)}"
        )
        if f.bound is not None:
            line += f" bound {f.bound}"
        lines.append(line)
        for idx, res in f.overrides:
            lines.append(f"override {f.var} == {idx}: residues {_fmt_resset(res, f.var)}")
    return "\n".join(lines) + "\n"


def load_sieve(path) -> SieveSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_sieve(fh.read())
