"""Seeded random term generators and small independent oracles for tests."""

from __future__ import annotations

import random

from lambdaq.terms import Abs, App, Coll, Sign, Term, Var, collection

NAMES = ("x", "y", "z", "w")


def random_term(
    rng: random.Random,
    size: int,
    names=NAMES,
    coll: bool = True,
    neg: bool = True,
    min_size: int = 1,
    coll_weight: int = 1,
) -> Term:
    """A term with at most `size` nodes; flattening may shrink it further.

    `coll_weight` makes collections (and so γ-redexes) more frequent.
    """

    def sign() -> Sign:
        return Sign.NEG if neg and rng.random() < 0.3 else Sign.POS

    def go(n: int) -> Term:
        if n <= 1:
            return Var(rng.choice(names), sign())
        kinds = ["abs", "app"]
        if coll and n >= 3:
            kinds += ["coll"] * coll_weight
        kind = rng.choice(kinds)
        if kind == "abs":
            return Abs(rng.choice(names), go(n - 1), sign())
        if kind == "app":
            left = rng.randint(1, n - 2) if n > 2 else 1
            return App(go(left), go(max(1, n - 1 - left)))
        k = rng.randint(2, min(3, n - 1))
        budget = n - 1
        parts = []
        for i in range(k):
            share = budget // (k - i) if i < k - 1 else budget
            share = max(1, rng.randint(1, max(1, share)))
            parts.append(go(share))
            budget -= share
        return collection(parts)

    return go(rng.randint(min(min_size, size), size))


def node_count(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, Abs):
        return 1 + node_count(t.body)
    if isinstance(t, App):
        return 1 + node_count(t.fn) + node_count(t.arg)
    return 1 + sum(node_count(e) for e in t.elems)


# -- de Bruijn oracle for substitution -----------------------------------------
#
# Terms become tuples: ("v", index|name, neg), ("l", neg, body), ("a", f, a),
# ("c", sorted elements).  Bound variables are integers, free ones strings.


def to_db(t: Term, env=()) -> tuple:
    if isinstance(t, Var):
        neg = t.sign is Sign.NEG
        for i, name in enumerate(reversed(env)):
            if name == t.name:
                return ("v", i, neg)
        return ("v", t.name, neg)
    if isinstance(t, Abs):
        return ("l", t.sign is Sign.NEG, to_db(t.body, env + (t.var,)))
    if isinstance(t, App):
        return ("a", to_db(t.fn, env), to_db(t.arg, env))
    return _db_coll([to_db(e, env) for e in t.elems])


def _db_coll(items) -> tuple:
    flat = []
    for it in items:
        flat.extend(it[1] if it[0] == "c" else [it])
    if len(flat) == 1:
        return flat[0]
    return ("c", tuple(sorted(flat, key=repr)))


def _shift(t: tuple, by: int, cutoff: int = 0) -> tuple:
    tag = t[0]
    if tag == "v":
        if isinstance(t[1], int) and t[1] >= cutoff:
            return ("v", t[1] + by, t[2])
        return t
    if tag == "l":
        return ("l", t[1], _shift(t[2], by, cutoff + 1))
    if tag == "a":
        return ("a", _shift(t[1], by, cutoff), _shift(t[2], by, cutoff))
    return ("c", tuple(_shift(e, by, cutoff) for e in t[1]))


def _negate_head(t: tuple) -> tuple:
    tag = t[0]
    if tag == "v":
        return ("v", t[1], not t[2])
    if tag == "l":
        return ("l", not t[1], t[2])
    if tag == "a":
        return ("a", _negate_head(t[1]), t[2])
    return _db_coll([_negate_head(e) for e in t[1]])


def db_subst(m: tuple, name: str, n: tuple, depth: int = 0) -> tuple:
    """m[n/name] where `name` is free; n is shifted under binders."""
    tag = m[0]
    if tag == "v":
        if m[1] == name:
            r = _shift(n, depth)
            return _negate_head(r) if m[2] else r
        return m
    if tag == "l":
        return ("l", m[1], db_subst(m[2], name, n, depth + 1))
    if tag == "a":
        return ("a", db_subst(m[1], name, n, depth), db_subst(m[2], name, n, depth))
    return _db_coll([db_subst(e, name, n, depth) for e in m[1]])


def db_normal(t: tuple) -> tuple:
    """Re-sort collections after substitution so comparison is by multiset."""
    tag = t[0]
    if tag == "l":
        return ("l", t[1], db_normal(t[2]))
    if tag == "a":
        return ("a", db_normal(t[1]), db_normal(t[2]))
    if tag == "c":
        return _db_coll([db_normal(e) for e in t[1]])
    return t
