"""Standard terms: booleans, numerals, pairs, recursion, R, W and REMOVE-F.

Definitions live in ``prelude.lq`` and are linked into a program by
substituting each closed definition for its free name.  Decoders read a
value back to its β-normal form and match it structurally.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources

from .errors import FuelExhausted, NotANumeral, NotAnInteger, ParseError
from .reduction import normalize
from .substitution import fresh_name, subst
from .syntax import Calculus, church_numeral, format_term, parse_program
from .terms import Abs, App, Coll, Sign, Term, Var, alpha_eq, is_lambda_p, is_pure

DECODE_FUEL = 200_000

I_TERM = Abs("x", Var("x"))
T_TERM = Abs("x", Abs("y", Var("x")))
F_TERM = Abs("x", Abs("y", Var("y")))


@dataclass(frozen=True)
class NamedTerm:
    name: str
    definition: Term
    calculus: Calculus

    def __post_init__(self):
        if self.definition.fv:
            raise ValueError(f"{self.name} is not closed: free {sorted(self.definition.fv)}")


def _minimal_calculus(t: Term) -> Calculus:
    if is_pure(t):
        return Calculus.LAMBDA
    return Calculus.LAMBDA_P if is_lambda_p(t) else Calculus.LAMBDA_Q


# -- linking --------------------------------------------------------------------


def expand_if(t: Term, bound: frozenset = frozenset()) -> Term:
    """Rewrite each saturated free ``IF c a b`` into ``c (λd.a) (λd.b) I``.

    Call-by-value would otherwise evaluate both branches, and a collection in
    one branch would be distributed over the whole conditional.
    """
    if isinstance(t, Var):
        return t
    if isinstance(t, Abs):
        return Abs(t.var, expand_if(t.body, bound | {t.var}), t.sign)
    if isinstance(t, Coll):
        return Coll(tuple(expand_if(e, bound) for e in t.elems))
    spine = []
    head: Term = t
    while isinstance(head, App):
        spine.append(head.arg)
        head = head.fn
    spine.reverse()
    args = [expand_if(a, bound) for a in spine]
    if (
        isinstance(head, Var)
        and head.name == "IF"
        and head.sign is Sign.POS
        and "IF" not in bound
        and len(args) >= 3
    ):
        c, a, b = args[:3]
        d = fresh_name("d", a.fv | b.fv)
        out: Term = App(App(App(c, Abs(d, a)), Abs(d, b)), I_TERM)
        rest = args[3:]
    else:
        out = expand_if(head, bound)
        rest = args
    for a in rest:
        out = App(out, a)
    return out


def link(term: Term, env: dict | None = None, lazy_if: bool = True) -> Term:
    """Substitute closed definitions from `env` (default: the prelude) for free names."""
    if env is None:
        env = load_prelude()
    if lazy_if:
        term = expand_if(term)
    for name in sorted(term.fv & env.keys()):
        term = subst(term, env[name], name)
    return term


def link_bindings(bindings, env: dict | None = None, origin: str = "<input>", defines_if: bool = False) -> dict:
    """Link `let` bindings in order, each seeing the ones before it.

    A binding for IF disables the lazy-IF rewrite unless `defines_if` says
    the bindings are the ones introducing the standard IF.
    """
    env = dict(load_prelude() if env is None else env)
    lazy_if = "IF" in env or defines_if
    for name, body in bindings:
        linked = link(body, env, lazy_if)
        if linked.fv:
            raise ParseError(f"definition of {name} has free names {sorted(linked.fv)}", origin=origin)
        env[name] = linked
        if name == "IF":
            lazy_if = defines_if
    return env


@functools.lru_cache(maxsize=None)
def _prelude_text() -> str:
    return resources.files(__package__).joinpath("prelude.lq").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def _prelude() -> tuple:
    prog = parse_program(_prelude_text(), Calculus.LAMBDA_Q)
    env = link_bindings(prog.bindings, {}, "prelude.lq", defines_if=True)
    return tuple(env.items())


def load_prelude() -> dict:
    """Name → linked closed term for every prelude definition."""
    return dict(_prelude())


def prelude_terms() -> list:
    return [NamedTerm(n, t, _minimal_calculus(t)) for n, t in _prelude()]


def named(name: str) -> Term:
    return load_prelude()[name]


def build(text: str, env: dict | None = None) -> Term:
    """Parse a λᑫ program (let-bindings allowed) and link it against the prelude."""
    prog = parse_program(text, Calculus.LAMBDA_Q)
    base = load_prelude() if env is None else env
    env2 = link_bindings(prog.bindings, base)
    if prog.term is None:
        raise ValueError("program has no final term")
    return link(prog.term, env2, "IF" in base and env2.get("IF") is base["IF"])


# -- builders -------------------------------------------------------------------


def church(n: int) -> Term:
    if n < 0:
        raise ValueError("Church numerals are nonnegative")
    return church_numeral(n)


def church_int(z: int) -> Term:
    """The pair value λf.f p̲ q̲ with p − q = z and min(p, q) = 0."""
    p, q = (z, 0) if z >= 0 else (0, -z)
    return Abs("f", App(App(Var("f"), church(p)), church(q)))


def church_bool(b: bool) -> Term:
    return T_TERM if b else F_TERM


def prim_rec(step: Term, base: Term) -> Term:
    return App(App(named("PRIM-REC"), step), base)


def build_R() -> Term:
    return named("R")


def build_W() -> Term:
    return named("W")


def build_remove_f() -> Term:
    return named("REMOVE-F")


# -- decoders -------------------------------------------------------------------


def _nf(t: Term) -> Term:
    try:
        return normalize(t, DECODE_FUEL)
    except (FuelExhausted, RecursionError) as exc:
        raise NotANumeral(f"no normal form within {DECODE_FUEL} steps") from exc


def match_numeral(t: Term):
    if not (isinstance(t, Abs) and isinstance(t.body, Abs)) or t.sign is Sign.NEG or t.body.sign is Sign.NEG:
        return None
    f, x = t.var, t.body.var
    if f == x:
        # λx.λx.M: only the inner binder is visible; numeral 0 is still λa.λb.b
        return 0 if t.body.body == Var(x) else None
    n, body = 0, t.body.body
    while isinstance(body, App) and body.fn == Var(f):
        n += 1
        body = body.arg
    return n if body == Var(x) else None


def decode_nat(t: Term) -> int:
    n = match_numeral(_nf(t))
    if n is None:
        raise NotANumeral(f"{format_term(t)} is not a Church numeral")
    return n


def decode_int(t: Term) -> int:
    try:
        nf = _nf(t)
    except NotANumeral as exc:
        raise NotAnInteger(str(exc)) from exc
    if (
        isinstance(nf, Abs)
        and nf.sign is Sign.POS
        and isinstance(nf.body, App)
        and isinstance(nf.body.fn, App)
        and nf.body.fn.fn == Var(nf.var)
    ):
        p, q = nf.body.fn.arg, nf.body.arg
        if nf.var not in p.fv and nf.var not in q.fv:
            np_, nq = match_numeral(p), match_numeral(q)
            if np_ is not None and nq is not None:
                return np_ - nq
    raise NotAnInteger(f"{format_term(t)} is not a pair of numerals")


def decode_bool(t: Term) -> bool:
    nf = _nf(t)
    if alpha_eq(nf, T_TERM):
        return True
    if alpha_eq(nf, F_TERM):
        return False
    raise NotANumeral(f"{format_term(t)} is not a boolean")


def describe(t: Term, numeric: bool = False) -> str:
    """Short human label for a result: T, F, I, a numeral or a pair-integer.

    With `numeric`, 0̲ (which is also F) prints as 0.
    """
    try:
        nf = _nf(t)
    except NotANumeral:
        return format_term(t)
    if alpha_eq(nf, I_TERM):
        return "I"
    if alpha_eq(nf, T_TERM):
        return "T"
    if alpha_eq(nf, F_TERM):
        return "0" if numeric else "F"
    n = match_numeral(nf)
    if n is not None:
        return str(n)
    try:
        return str(decode_int(nf))
    except NotAnInteger:
        return format_term(nf)
