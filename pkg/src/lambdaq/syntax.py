"""Concrete syntax: parser and printer for all three calculi.

Surface tokens::

    \\x.M   λx.M   lambda x.M     abstraction (scope extends right, stops at ',')
    M N                           application, left associative
    M, N                          collection, lowest precedence, right associative
    ~M  ¬M                        negative sign (λᑫ only)
    3                             Church numeral sugar
    let NAME = M ;                binding prelude (files and REPL)
    # ...                         comment to end of line
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import CalculusViolation, ParseError
from .substitution import apply_sign
from .terms import Abs, App, Coll, Sign, Term, Var, collection


class Calculus(str, enum.Enum):
    LAMBDA = "lambda"
    LAMBDA_P = "lambda_p"
    LAMBDA_Q = "lambda_q"

    @classmethod
    def coerce(cls, value) -> "Calculus":
        if value is None:
            return cls.LAMBDA_Q
        return value if isinstance(value, cls) else cls(value)


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<input>"


@dataclass
class Program:
    bindings: list = field(default_factory=list)
    term: Term | None = None


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<lam>\\|λ)
  | (?P<dot>\.)
  | (?P<comma>,)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<neg>~|¬)
  | (?P<eq>=)
  | (?P<semi>;)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'?\-]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"lambda": "lam", "let": "let"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, origin: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, origin)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "ident" and s in _KEYWORDS:
                kind = _KEYWORDS[s]
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def church_numeral(n: int) -> Term:
    body: Term = Var("y")
    for _ in range(n):
        body = App(Var("x"), body)
    return Abs("x", Abs("y", body))


class _Parser:
    def __init__(self, text: str, origin: str, calculus: Calculus):
        self.toks = _tokenize(text, origin)
        self.i = 0
        self.origin = origin
        self.calculus = calculus

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != kind:
            want = {"rp": "')'", "dot": "'.'", "ident": "identifier", "eq": "'='", "semi": "';'", "eof": "end of input"}
            self.fail(f"expected {want.get(kind, kind)}, found {tok.text or 'end of input'!r}", tok)
        self.i += 1
        return tok

    def fail(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(msg, tok.line, tok.col, self.origin)

    def program(self) -> Program:
        prog = Program()
        while self.peek().kind == "let":
            self.i += 1
            name = self.take("ident").text
            self.take("eq")
            body = self.term()
            self.take("semi")
            prog.bindings.append((name, body))
        if self.peek().kind != "eof":
            prog.term = self.term()
        self.take("eof")
        return prog

    def term(self) -> Term:
        first = self.seq()
        if self.peek().kind != "comma":
            return first
        if self.calculus is Calculus.LAMBDA:
            self.fail("collections are not part of the λ-calculus", cls=CalculusViolation)
        self.i += 1
        rest = self.term()
        return collection((first, rest))

    def seq(self) -> Term:
        items = []
        while True:
            kind = self.peek().kind
            if kind in ("lam", "neg") and self._starts_abstraction():
                items.append(self.abstraction())
                break
            if kind in ("ident", "num", "lp", "neg"):
                items.append(self.atom())
            else:
                break
        if not items:
            tok = self.peek()
            self.fail(f"expected a term, found {tok.text or 'end of input'!r}", tok)
        out = items[0]
        for it in items[1:]:
            out = App(out, it)
        return out

    def _starts_abstraction(self) -> bool:
        j = self.i
        while self.toks[j].kind == "neg":
            j += 1
        return self.toks[j].kind == "lam"

    def signs(self) -> Sign:
        sign = Sign.POS
        while self.peek().kind == "neg":
            if self.calculus is not Calculus.LAMBDA_Q:
                self.fail("signs are only available in the λᑫ-calculus", cls=CalculusViolation)
            self.i += 1
            sign = sign.concat(Sign.NEG)
        return sign

    def abstraction(self) -> Term:
        sign = self.signs()
        self.take("lam")
        names = [self.take("ident").text]
        while self.peek().kind == "ident":
            names.append(self.take("ident").text)
        self.take("dot")
        body = self.seq()
        for name in reversed(names[1:]):
            body = Abs(name, body)
        return Abs(names[0], body, sign)

    def atom(self) -> Term:
        sign = self.signs()
        tok = self.peek()
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text, sign)
        if tok.kind == "num":
            self.i += 1
            return apply_sign(sign, church_numeral(int(tok.text)))
        if tok.kind == "lp":
            self.i += 1
            inner = self.term()
            self.take("rp")
            return apply_sign(sign, inner)
        self.fail(f"expected a term, found {tok.text or 'end of input'!r}", tok)


def _source(src) -> SourceProgram:
    return src if isinstance(src, SourceProgram) else SourceProgram(src)


def parse(src, calculus=Calculus.LAMBDA_Q) -> Term:
    """Parse a single term (no let-bindings)."""
    src = _source(src)
    p = _Parser(src.text, src.origin, Calculus.coerce(calculus))
    t = p.term()
    p.take("eof")
    return t


def parse_program(src, calculus=Calculus.LAMBDA_Q) -> Program:
    src = _source(src)
    return _Parser(src.text, src.origin, Calculus.coerce(calculus)).program()


# -- printing ----------------------------------------------------------------

_TOP, _ELEM, _BODY, _FN, _ARG, _LAST = range(6)


def format_term(t: Term) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    return _fmt(t, _TOP)


def _fmt(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        return ("~" if t.sign is Sign.NEG else "") + t.name
    if isinstance(t, Abs):
        s = ("~" if t.sign is Sign.NEG else "") + "\\" + t.var + "." + _fmt(t.body, _BODY)
        return f"({s})" if ctx in (_FN, _ARG) else s
    if isinstance(t, App):
        paren = ctx in (_ARG, _LAST)
        last = paren or ctx != _FN
        s = _fmt(t.fn, _FN) + " " + _fmt(t.arg, _LAST if last else _ARG)
        return f"({s})" if paren else s
    assert isinstance(t, Coll)
    s = ", ".join(_fmt(e, _ELEM) for e in t.elems)
    return s if ctx == _TOP else f"({s})"
