"""Observation: Θ (sampling), Δ (cancellation) and Ξ = Θ∘Δ.

Sampling picks uniformly among the *positions* of each collection, so a
term occurring k times is k times as likely.  `exact_distribution` unrolls
the same recursion with exact rationals instead of random draws.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, FuelExhausted, Unobservable
from .reduction import DEFAULT_FUEL, evaluate, normalize
from .syntax import Calculus, format_term
from .terms import Abs, App, Coll, Term, Var, canonical_key, collection, to_counts

DEFAULT_BUDGET = 1_000_000
READBACK_FUEL = 200_000


@dataclass(frozen=True)
class RngState:
    """A seed plus a spawn path; PCG64 streams derived via SeedSequence."""

    seed: int
    spawn_key: tuple = ()

    algorithm = "PCG64"

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        return np.random.Generator(np.random.PCG64(seq))

    def split(self, n: int) -> list:
        return [RngState(self.seed, self.spawn_key + (i,)) for i in range(n)]


def _gen(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    return RngState(int(rng or 0)).generator()


# -- Θ, Δ, Ξ --------------------------------------------------------------------


def theta(term: Term, rng) -> Term:
    """Replace every collection, at any depth, by one uniformly chosen member."""
    return _theta(term, _gen(rng))


def _theta(t: Term, g: np.random.Generator) -> Term:
    if not t.has_coll:
        return t
    if isinstance(t, Abs):
        return Abs(t.var, _theta(t.body, g), t.sign)
    if isinstance(t, App):
        return App(_theta(t.fn, g), _theta(t.arg, g))
    return _theta(t.elems[int(g.integers(len(t.elems)))], g)


def delta(term: Term) -> Term:
    """Cancel opposite pairs in every collection and strip all signs.

    Raises Unobservable when a collection that survives to be observed
    cancels to nothing.
    """
    if not term.has_neg:
        return term
    if isinstance(term, Var):
        return Var(term.name)
    if isinstance(term, Abs):
        return Abs(term.var, delta(term.body))
    if isinstance(term, App):
        return App(delta(term.fn), delta(term.arg))
    # members headed by a collection (only in non-γ-normal input) have no
    # sign, hence no opposite; they survive as they are
    signed, survivors = [], []
    for e in term.elems:
        if isinstance(_spine_head(e), Coll):
            survivors.append(delta(e))
        else:
            signed.append(e)
    for entry in to_counts(collection(signed)) if signed else ():
        if entry.net:
            survivors.extend([delta(entry.term)] * abs(entry.net))
    if not survivors:
        raise Unobservable("every member of a collection cancelled against its opposite")
    return collection(survivors)


def _spine_head(t: Term) -> Term:
    while isinstance(t, App):
        t = t.fn
    return t


def xi(term: Term, rng) -> Term:
    return theta(delta(term), rng)


def observe(program: Term, calculus=None, fuel=None, rng=0) -> Term:
    """Evaluate, then observe once: Θ for λ/λᵖ, Ξ for λᑫ."""
    calculus = Calculus.coerce(calculus)
    value = evaluate(program, calculus, fuel)
    if calculus is Calculus.LAMBDA_Q:
        return xi(value, rng)
    return theta(value, rng)


# -- exact distributions --------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    """Finite support of pure λ-terms with exact probabilities summing to 1."""

    support: tuple

    def __post_init__(self):
        assert sum(p for _, p in self.support) == 1

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._keyed() == other._keyed()

    def __hash__(self):
        return hash(tuple(sorted(self._keyed().items())))

    def _keyed(self) -> dict:
        return {canonical_key(t): p for t, p in self.support}

    def probability(self, term: Term) -> Fraction:
        return self._keyed().get(canonical_key(term), Fraction(0))

    def relabel(self, label: Callable[[Term], object]) -> dict:
        out: dict = {}
        for t, p in self.support:
            k = label(t)
            out[k] = out.get(k, Fraction(0)) + p
        return out

    def total_variation(self, counts: dict, label: Callable[[Term], object]) -> Fraction:
        """TV distance between this (relabelled) and an empirical count table."""
        exact = self.relabel(label)
        n = sum(counts.values())
        keys = set(exact) | set(counts)
        return sum(abs(exact.get(k, Fraction(0)) - Fraction(counts.get(k, 0), n)) for k in keys) / 2

    def to_json(self, label: Callable[[Term], object] | None = None) -> dict:
        outcomes = []
        for t, p in self.support:
            item = {"term": format_term(t), "p_num": p.numerator, "p_den": p.denominator}
            if label is not None:
                item["label"] = str(label(t))
            outcomes.append(item)
        return {"kind": "distribution", "outcomes": outcomes}


def _merge(pairs, budget: int) -> list:
    acc: dict = {}
    for t, p in pairs:
        k = canonical_key(t)
        if k in acc:
            acc[k][1] += p
        else:
            acc[k] = [t, p]
            if len(acc) > budget:
                raise BudgetExceeded(f"more than {budget} distinct outcomes")
    return list(acc.values())


def _enumerate(t: Term, budget: int, memo: dict) -> list:
    if not t.has_coll:
        return [[t, Fraction(1)]]
    key = canonical_key(t)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(t, Abs):
        out = [[Abs(t.var, b, t.sign), p] for b, p in _enumerate(t.body, budget, memo)]
    elif isinstance(t, App):
        fs = _enumerate(t.fn, budget, memo)
        as_ = _enumerate(t.arg, budget, memo)
        if len(fs) * len(as_) > budget:
            raise BudgetExceeded(f"more than {budget} outcomes")
        out = _merge(((App(f, a), p * q) for f, p in fs for a, q in as_), budget)
    else:
        n = len(t.elems)
        groups = Counter()
        reps = {}
        for e in t.elems:
            k = canonical_key(e)
            groups[k] += 1
            reps.setdefault(k, e)
        pairs = []
        for k, c in groups.items():
            w = Fraction(c, n)
            pairs.extend((o, w * p) for o, p in _enumerate(reps[k], budget, memo))
        out = _merge(pairs, budget)
    memo[key] = out
    return out


def readback(term: Term, fuel: int = READBACK_FUEL) -> Term:
    """β-normal form when one is reachable within `fuel`, else the term itself."""
    try:
        return normalize(term, fuel)
    except (FuelExhausted, RecursionError):
        return term


def distribution_of(value: Term, calculus=None, budget: int = DEFAULT_BUDGET, readback_outcomes: bool = True) -> Distribution:
    """The measure that Θ (or Ξ, for λᑫ) induces on an already-evaluated term."""
    calculus = Calculus.coerce(calculus)
    observed = delta(value) if calculus is Calculus.LAMBDA_Q else value
    outcomes = _enumerate(observed, budget, {})
    if readback_outcomes:
        cache: dict = {}
        pairs = []
        for t, p in outcomes:
            k = canonical_key(t)
            if k not in cache:
                cache[k] = readback(t)
            pairs.append((cache[k], p))
        outcomes = _merge(pairs, budget)
    outcomes.sort(key=lambda tp: canonical_key(tp[0]))
    return Distribution(tuple((t, p) for t, p in outcomes))


def exact_distribution(
    term: Term,
    calculus=None,
    fuel=DEFAULT_FUEL,
    budget: int = DEFAULT_BUDGET,
    evaluate_first: bool = True,
    readback_outcomes: bool = True,
) -> Distribution:
    """Exact distribution of observing `term`.

    With ``evaluate_first`` (the default) this is the law of M ⊸ N; without
    it, the law of observing the term exactly as written.  Outcomes are
    merged by α-class of their β-normal form unless ``readback_outcomes`` is
    false.
    """
    calculus = Calculus.coerce(calculus)
    value = evaluate(term, calculus, fuel) if evaluate_first else term
    return distribution_of(value, calculus, budget, readback_outcomes)


class Sampler:
    """Repeated Ξ/Θ draws from one evaluated value, with cached readback."""

    def __init__(self, value: Term, calculus=None):
        self.calculus = Calculus.coerce(calculus)
        self.observable = delta(value) if self.calculus is Calculus.LAMBDA_Q else value
        self._cache: dict = {}

    def draw(self, rng) -> Term:
        t = theta(self.observable, rng)
        k = canonical_key(t)
        if k not in self._cache:
            self._cache[k] = readback(t)
        return self._cache[k]

    def sample(self, n: int, rng) -> list:
        g = _gen(rng)
        return [self.draw(g) for _ in range(n)]
