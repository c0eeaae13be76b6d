"""Term representation shared by the λ, λᵖ and λᑫ calculi.

A single AST covers all three calculi: pure λ-terms are terms with no
collections and no negative signs, λᵖ-terms are terms with no negative
signs.  Collections are always stored flat (no collection directly inside
another) with at least two elements; `collection` is the only way to build
one and it enforces that.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import HeadUnsigned


class Sign(enum.Enum):
    POS = "+"
    NEG = "-"
    EMPTY = ""

    def concat(self, other: "Sign") -> "Sign":
        """Sign concatenation: ¬¬ collapses to ε, and ε/+ are neutral."""
        if self is Sign.NEG and other is Sign.NEG:
            return Sign.EMPTY
        if self is Sign.NEG or other is Sign.NEG:
            return Sign.NEG
        if self is Sign.POS or other is Sign.POS:
            return Sign.POS
        return Sign.EMPTY

    @property
    def negative(self) -> bool:
        return self is Sign.NEG

    def flip(self) -> "Sign":
        return Sign.POS if self is Sign.NEG else Sign.NEG


_EMPTY: frozenset = frozenset()


def _stored(sign: Sign) -> Sign:
    # terms only ever carry + or -; ε means "no sign", i.e. positive
    return Sign.NEG if sign is Sign.NEG else Sign.POS


class Term:
    __slots__ = ("fv", "has_coll", "has_neg", "size", "_key", "_hash")

    def __eq__(self, other):
        return isinstance(other, Term) and _struct(self) == _struct(other)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(_struct(self))
            self._hash = h
        return h

    def __repr__(self):
        from .syntax import format_term

        return f"{type(self).__name__}<{format_term(self)}>"

    def __str__(self):
        from .syntax import format_term

        return format_term(self)


class Var(Term):
    __slots__ = ("name", "sign")

    def __init__(self, name: str, sign: Sign = Sign.POS):
        self.name = name
        self.sign = _stored(sign)
        self.fv = frozenset((name,))
        self.has_coll = False
        self.has_neg = self.sign is Sign.NEG
        self.size = 1
        self._key = None
        self._hash = None


class Abs(Term):
    __slots__ = ("var", "body", "sign")

    def __init__(self, var: str, body: Term, sign: Sign = Sign.POS):
        self.var = var
        self.body = body
        self.sign = _stored(sign)
        self.fv = body.fv - {var} if var in body.fv else body.fv
        self.has_coll = body.has_coll
        self.has_neg = self.sign is Sign.NEG or body.has_neg
        self.size = body.size + 1
        self._key = None
        self._hash = None


class App(Term):
    __slots__ = ("fn", "arg")

    def __init__(self, fn: Term, arg: Term):
        self.fn = fn
        self.arg = arg
        if not arg.fv:
            self.fv = fn.fv
        elif not fn.fv:
            self.fv = arg.fv
        else:
            self.fv = fn.fv | arg.fv
        self.has_coll = fn.has_coll or arg.has_coll
        self.has_neg = fn.has_neg or arg.has_neg
        self.size = fn.size + arg.size + 1
        self._key = None
        self._hash = None


class Coll(Term):
    __slots__ = ("elems",)

    def __init__(self, elems: tuple):
        # use `collection()`; this constructor trusts its caller
        self.elems = elems
        fv = _EMPTY
        for e in elems:
            if e.fv:
                fv = fv | e.fv
        self.fv = fv
        self.has_coll = True
        self.has_neg = any(e.has_neg for e in elems)
        self.size = sum(e.size for e in elems) + 1
        self._key = None
        self._hash = None


def _struct(t: Term):
    if isinstance(t, Var):
        return ("v", t.name, t.sign.value)
    if isinstance(t, Abs):
        return ("l", t.var, t.sign.value, _struct(t.body))
    if isinstance(t, App):
        return ("a", _struct(t.fn), _struct(t.arg))
    return ("c",) + tuple(_struct(e) for e in t.elems)


def elements(t: Term) -> tuple:
    """Top-level elements: the members of a collection, else ``(t,)``."""
    return t.elems if isinstance(t, Coll) else (t,)


def collection(items: Iterable[Term]) -> Term:
    """Build a flattened collection; a single item is returned unchanged."""
    flat = []
    for item in items:
        if isinstance(item, Coll):
            flat.extend(item.elems)
        else:
            flat.append(item)
    if not flat:
        raise ValueError("the empty collection is not a term")
    if len(flat) == 1:
        return flat[0]
    return Coll(tuple(flat))


def flatten(t: Term) -> Term:
    """Canonical form: every collection flattened to one level, recursively."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Abs):
        if not t.has_coll:
            return t
        return Abs(t.var, flatten(t.body), t.sign)
    if isinstance(t, App):
        if not t.has_coll:
            return t
        return App(flatten(t.fn), flatten(t.arg))
    return collection(flatten(e) for e in t.elems)


def cardinality(t: Term) -> int:
    return len(t.elems) if isinstance(t, Coll) else 1


def free_vars(t: Term) -> frozenset:
    return t.fv


def leaves(t: Term) -> Iterator[Term]:
    """Non-collection leaves reached through collection nodes only."""
    if isinstance(t, Coll):
        for e in t.elems:
            yield from leaves(e)
    else:
        yield t


def is_pure(t: Term) -> bool:
    return not t.has_coll and not t.has_neg


def is_lambda_p(t: Term) -> bool:
    return not t.has_neg


# -- α-equivalence -----------------------------------------------------------


def canonical_key(t: Term) -> str:
    """A string that two terms share iff they are α-equivalent.

    Bound variables become de Bruijn indices and collection members are
    sorted, so collections compare as multisets.
    """
    return _key(t, {}, 0)


def _key(t: Term, env: dict, depth: int) -> str:
    if not t.fv and t._key is not None:
        return t._key
    if isinstance(t, Var):
        s = "-" if t.sign is Sign.NEG else ""
        if t.name in env:
            out = f"{s}#{depth - env[t.name] - 1}"
        else:
            out = f"{s}${t.name}"
    elif isinstance(t, Abs):
        s = "-" if t.sign is Sign.NEG else ""
        saved = env.get(t.var)
        env[t.var] = depth
        out = f"{s}\\({_key(t.body, env, depth + 1)})"
        if saved is None:
            del env[t.var]
        else:
            env[t.var] = saved
    elif isinstance(t, App):
        out = f"({_key(t.fn, env, depth)} {_key(t.arg, env, depth)})"
    else:
        out = "{" + ",".join(sorted(_key(e, env, depth) for e in t.elems)) + "}"
    if not t.fv:
        t._key = out
    return out


def alpha_eq(t1: Term, t2: Term) -> bool:
    return canonical_key(t1) == canonical_key(t2)


# -- signs and opposites ------------------------------------------------------


def head_sign(t: Term) -> Sign:
    """Sign of the leftmost outermost signed constructor.

    Applications inherit the sign of their operator spine; an operator spine
    that bottoms out in a collection has no head sign.
    """
    while isinstance(t, App):
        t = t.fn
    if isinstance(t, Coll):
        raise HeadUnsigned("application headed by a collection has no sign")
    return t.sign


def with_head_sign(t: Term, sign: Sign) -> Term:
    if isinstance(t, Var):
        return t if t.sign is _stored(sign) else Var(t.name, sign)
    if isinstance(t, Abs):
        return t if t.sign is _stored(sign) else Abs(t.var, t.body, sign)
    if isinstance(t, App):
        return App(with_head_sign(t.fn, sign), t.arg)
    raise HeadUnsigned("a collection has no head sign")


def positive_form(t: Term) -> Term:
    return with_head_sign(t, Sign.POS)


def opposite(t: Term) -> Term:
    if isinstance(t, Coll):
        return Coll(tuple(opposite(e) for e in t.elems))
    return with_head_sign(t, head_sign(t).flip())


@dataclass(frozen=True)
class CountEntry:
    term: Term
    pos: int
    neg: int

    @property
    def net(self) -> int:
        return self.pos - self.neg


@dataclass(frozen=True)
class SignedCounts:
    """The [(Mᵢ : aᵢ, bᵢ, nᵢ)] view of a collection, sorted canonically."""

    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def total(self) -> int:
        return sum(e.pos + e.neg for e in self.entries)

    def lookup(self, term: Term):
        key = canonical_key(positive_form(term))
        for e in self.entries:
            if canonical_key(e.term) == key:
                return e
        return None

    def expand(self) -> Term:
        items = []
        for e in self.entries:
            items.extend([e.term] * e.pos)
            items.extend([with_head_sign(e.term, Sign.NEG)] * e.neg)
        return collection(items)


def to_counts(t: Term) -> SignedCounts:
    groups: dict = {}
    for e in elements(t):
        sign = head_sign(e)
        rep = positive_form(e)
        k = canonical_key(rep)
        if k not in groups:
            groups[k] = [rep, 0, 0]
        groups[k][2 if sign is Sign.NEG else 1] += 1
    entries = tuple(CountEntry(g[0], g[1], g[2]) for _, g in sorted(groups.items()))
    return SignedCounts(entries)
