"""γ- and β-reduction and the call-by-value evaluator.

Values evaluate to themselves, collections evaluate memberwise, and an
application takes γ-normal forms on the operator, the operand and the
instantiated body, and nowhere else.  The program itself is γ-normalized
once before evaluation starts, so every term the evaluator sees is
γ-normal.  Bodies of abstractions are never evaluated, and opposite terms
are left in place: cancellation belongs to observation.
"""

from __future__ import annotations

import sys
from typing import Iterator

from .errors import CalculusViolation, FuelExhausted, InternalLimit, NoRedex, StuckTerm
from .substitution import apply_sign, subst
from .syntax import Calculus, format_term
from .terms import Abs, App, Coll, Term, Var, collection, elements, is_lambda_p, is_pure

DEFAULT_FUEL = 100_000
GAMMA_LIMIT = 1_000_000

if sys.getrecursionlimit() < 20_000:
    sys.setrecursionlimit(20_000)


class Fuel:
    """Step budget, counted in β-contractions performed by the evaluator."""

    def __init__(self, max_steps: int = DEFAULT_FUEL):
        if max_steps < 1:
            raise ValueError("fuel must be positive")
        self.max_steps = max_steps
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.max_steps - self.used

    def tick(self, term=None):
        self.used += 1
        if self.used > self.max_steps:
            raise FuelExhausted(f"evaluation exceeded {self.max_steps} steps", partial=term)


def _as_fuel(fuel) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(int(fuel))


def check_calculus(term: Term, calculus) -> Calculus:
    calculus = Calculus.coerce(calculus)
    if calculus is Calculus.LAMBDA and not is_pure(term):
        raise CalculusViolation("term uses collections or signs outside the λ-calculus")
    if calculus is Calculus.LAMBDA_P and not is_lambda_p(term):
        raise CalculusViolation("term uses negative signs outside the λᵖ-calculus")
    return calculus


# -- γ ------------------------------------------------------------------------


def gamma_normal_form(t: Term) -> Term:
    """Distribute every application over collections in operator/operand."""
    if not t.has_coll:
        return t
    if isinstance(t, Abs):
        body = gamma_normal_form(t.body)
        return t if body is t.body else Abs(t.var, body, t.sign)
    if isinstance(t, Coll):
        elems = [gamma_normal_form(e) for e in t.elems]
        if all(a is b for a, b in zip(elems, t.elems)):
            return t
        return collection(elems)
    assert isinstance(t, App)
    f = gamma_normal_form(t.fn)
    a = gamma_normal_form(t.arg)
    if isinstance(f, Coll) or isinstance(a, Coll):
        fs, as_ = elements(f), elements(a)
        if len(fs) * len(as_) > GAMMA_LIMIT:
            raise InternalLimit("γ-normal form exceeds the collection size limit")
        return Coll(tuple(App(x, y) for x in fs for y in as_))
    if f is t.fn and a is t.arg:
        return t
    return App(f, a)


def is_gamma_redex(t: Term) -> bool:
    return isinstance(t, App) and (isinstance(t.fn, Coll) or isinstance(t.arg, Coll))


def gamma_steps(t: Term) -> Iterator[Term]:
    """Every term reachable by contracting exactly one γ-redex."""
    if not t.has_coll:
        return
    if isinstance(t, Abs):
        for b in gamma_steps(t.body):
            yield Abs(t.var, b, t.sign)
    elif isinstance(t, App):
        if is_gamma_redex(t):
            yield collection(App(x, y) for x in elements(t.fn) for y in elements(t.arg))
        for f in gamma_steps(t.fn):
            yield App(f, t.arg)
        for a in gamma_steps(t.arg):
            yield App(t.fn, a)
    else:
        for i, e in enumerate(t.elems):
            for e2 in gamma_steps(e):
                yield collection(t.elems[:i] + (e2,) + t.elems[i + 1:])


# -- β ------------------------------------------------------------------------


def contract(fn: Abs, arg: Term) -> Term:
    """(Sλx.M)N → S·M[N/x]; a collection argument yields [S·M[Nᵢ/x]]."""
    if isinstance(arg, Coll):
        return collection(apply_sign(fn.sign, subst(fn.body, e, fn.var)) for e in arg.elems)
    return apply_sign(fn.sign, subst(fn.body, arg, fn.var))


def beta_step(term: Term, calculus=None) -> Term:
    """Contract the leftmost-outermost β-redex not under an abstraction."""
    check_calculus(term, calculus)
    out = _beta(term)
    if out is None:
        raise NoRedex(f"no β-redex outside abstraction bodies in {format_term(term)}")
    return out


def _beta(t: Term):
    if isinstance(t, App):
        if isinstance(t.fn, Abs):
            return contract(t.fn, t.arg)
        f = _beta(t.fn)
        if f is not None:
            return App(f, t.arg)
        a = _beta(t.arg)
        if a is not None:
            return App(t.fn, a)
        return None
    if isinstance(t, Coll):
        for i, e in enumerate(t.elems):
            r = _beta(e)
            if r is not None:
                return collection(t.elems[:i] + (r,) + t.elems[i + 1:])
    return None


# -- evaluation ---------------------------------------------------------------


class Evaluator:
    """Big-step call-by-value evaluation with a shared fuel counter."""

    def __init__(self, calculus=None, fuel=None):
        self.calculus = Calculus.coerce(calculus)
        self.fuel = _as_fuel(fuel)

    def evaluate(self, term: Term) -> Term:
        check_calculus(term, self.calculus)
        return self._eval(gamma_normal_form(term))

    def _eval(self, t: Term) -> Term:
        while True:
            if isinstance(t, (Var, Abs)):
                return t
            if isinstance(t, Coll):
                # (Coll): members are already γ-normal; results flatten
                return collection(self._eval(e) for e in t.elems)
            self.fuel.tick(t)
            f = self._eval(t.fn)
            if not isinstance(f, Abs):
                raise StuckTerm(
                    f"operator evaluates to {format_term(f)}, not an abstraction", term=t
                )
            a = self._eval(t.arg)
            t = gamma_normal_form(apply_sign(f.sign, subst(f.body, a, f.var)))


def evaluate(term: Term, calculus=None, fuel=None) -> Term:
    return Evaluator(calculus, fuel).evaluate(term)


def has_gamma_redex(t: Term) -> bool:
    if not t.has_coll:
        return False
    if is_gamma_redex(t):
        return True
    if isinstance(t, Abs):
        return has_gamma_redex(t.body)
    if isinstance(t, App):
        return has_gamma_redex(t.fn) or has_gamma_redex(t.arg)
    if isinstance(t, Coll):
        return any(has_gamma_redex(e) for e in t.elems)
    return False


def is_value(t: Term) -> bool:
    """Variables and abstractions free of γ-redexes, or collections of them."""
    if isinstance(t, Coll):
        return all(is_value(e) for e in t.elems)
    return isinstance(t, (Var, Abs)) and not has_gamma_redex(t)


# -- readback -----------------------------------------------------------------


def normalize(term: Term, fuel=None) -> Term:
    """β-normal form by normal-order reduction, including under binders.

    This is the readback used to decide whether two results are the same
    number or pair: call-by-value never reduces under λ, so arithmetic
    results are convertible to, but not syntactically, Church numerals.
    """
    return _nf(gamma_normal_form(term), _as_fuel(fuel))


def _whnf(t: Term, fuel: Fuel) -> Term:
    while isinstance(t, App):
        f = _whnf(t.fn, fuel)
        if isinstance(f, Abs):
            fuel.tick(t)
            t = apply_sign(f.sign, subst(f.body, t.arg, f.var))
            continue
        if isinstance(f, Coll):
            return collection(App(e, t.arg) for e in f.elems)
        return t if f is t.fn else App(f, t.arg)
    return t


def _nf(t: Term, fuel: Fuel) -> Term:
    t = _whnf(t, fuel)
    if isinstance(t, Var):
        return t
    if isinstance(t, Abs):
        return Abs(t.var, _nf(t.body, fuel), t.sign)
    if isinstance(t, Coll):
        return collection(_nf(e, fuel) for e in t.elems)
    return gamma_normal_form(App(_nf(t.fn, fuel), _nf(t.arg, fuel)))
