"""Capture-avoiding substitution M[N/x] for all three calculi."""

from __future__ import annotations

from .terms import Abs, App, Coll, Sign, Term, Var, collection


def apply_sign(sign: Sign, t: Term) -> Term:
    """Concatenate `sign` onto the head of `t`.

    Collections take the sign elementwise; applications pass it down their
    operator spine.
    """
    if sign is not Sign.NEG:
        return t
    if isinstance(t, Var):
        return Var(t.name, t.sign.concat(sign))
    if isinstance(t, Abs):
        return Abs(t.var, t.body, t.sign.concat(sign))
    if isinstance(t, App):
        return App(apply_sign(sign, t.fn), t.arg)
    return Coll(tuple(apply_sign(sign, e) for e in t.elems))


def fresh_name(base: str, avoid) -> str:
    """First of base1, base2, ... not in `avoid`."""
    root = base.rstrip("0123456789") or "v"
    i = 1
    while f"{root}{i}" in avoid:
        i += 1
    return f"{root}{i}"


def subst(target: Term, replacement: Term, var: str, calculus=None) -> Term:
    """target[replacement/var].

    The same rules serve every calculus: on unsigned terms the sign
    concatenation in rule 1 is the identity, and collections (rule 7) cannot
    occur in pure λ-terms.  `calculus` is accepted for API symmetry.
    """
    if var not in target.fv:
        return target
    return _subst(target, replacement, var)


def _subst(t: Term, n: Term, x: str) -> Term:
    if x not in t.fv:
        return t
    if isinstance(t, Var):
        # rule 1; rule 2 is the fv short-circuit above
        return apply_sign(t.sign, n)
    if isinstance(t, App):
        return App(_subst(t.fn, n, x), _subst(t.arg, n, x))
    if isinstance(t, Abs):
        # rule 4 cannot reach here: x bound by t means x not free in t
        if t.var not in n.fv:
            return Abs(t.var, _subst(t.body, n, x), t.sign)
        z = fresh_name(t.var, t.body.fv | n.fv | {x})
        body = _subst(t.body, Var(z), t.var)
        return Abs(z, _subst(body, n, x), t.sign)
    return collection(_subst(e, n, x) for e in t.elems)
