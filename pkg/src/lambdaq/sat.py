"""Satisfiability by cancellation: CHECK_f over a superposition of assignments.

The pipeline term is ``(λs.(I, REMOVE-F (CHECK s))) GEN``.  Evaluation
distributes CHECK over every assignment; REMOVE-F turns each F into an
opposite pair and keeps each T, so after cancellation only I and T remain.
Observing T proves satisfiability; observing I is inconclusive.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, FormatError, InternalError
from .observation import RngState, Sampler, distribution_of
from .reduction import evaluate
from .stdlib import F_TERM, I_TERM, T_TERM, church, named
from .terms import Abs, App, Coll, Term, Var, alpha_eq

DEFAULT_TRIALS = 40
DEFAULT_VAR_BUDGET = 10
SAT_FUEL = 10_000_000


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        if not self.clauses:
            raise ValueError("a formula needs at least one clause")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")

    @classmethod
    def of(cls, num_vars: int, clauses) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(c) for c in clauses))

    def satisfied_by(self, assignment) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    header_line = 0
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise FormatError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError("non-integer counts in problem line", lineno) from None
            if num_vars < 1 or num_clauses < 1:
                raise FormatError("variable and clause counts must be positive", lineno)
            header_line = lineno
            continue
        if num_vars is None:
            raise FormatError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise FormatError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise FormatError(f"literal {lit} exceeds declared {num_vars} variables", lineno)
            else:
                current.append(lit)
    last = len(text.splitlines())
    if num_vars is None:
        raise FormatError("missing problem line", max(last, 1))
    if current:
        clauses.append(tuple(current))
    if len(clauses) != num_clauses:
        raise FormatError(f"header declares {num_clauses} clauses, found {len(clauses)}", header_line)
    return CnfFormula(num_vars, tuple(clauses))


# -- terms ----------------------------------------------------------------------


def _check_budget(n: int, budget: int):
    if n < 1:
        raise ValueError("need at least one variable")
    if n > budget:
        raise BudgetExceeded(f"{n} variables exceeds the budget of {budget} (2^n assignments)")


def build_assignment_superposition(n: int, budget: int = DEFAULT_VAR_BUDGET) -> Term:
    """A term whose value is the 2ⁿ assignments, each once, as nested pairs."""
    _check_budget(n, budget)
    gen = named("PRIM-REC")
    pair = named("PAIR")
    p = Var("p")
    step = Abs("k", Abs("p", Coll((App(App(pair, T_TERM), p), App(App(pair, F_TERM), p)))))
    return App(App(App(gen, step), I_TERM), church(n))


def encode_assignment(values) -> Term:
    """The value ``PAIR v1 (PAIR v2 ... I)`` in the shape GEN produces."""
    out: Term = I_TERM
    for v in reversed(tuple(values)):
        out = Abs("f", App(App(Var("f"), T_TERM if v else F_TERM), out))
    return out


def decode_assignment(t: Term, n: int) -> tuple:
    values = []
    for _ in range(n):
        if not (isinstance(t, Abs) and isinstance(t.body, App) and isinstance(t.body.fn, App)):
            raise ValueError("not an assignment encoding")
        b = t.body.fn.arg
        if alpha_eq(b, T_TERM):
            values.append(True)
        elif alpha_eq(b, F_TERM):
            values.append(False)
        else:
            raise ValueError("assignment component is not a boolean")
        t = t.body.arg
    return tuple(values)


def build_check(f: CnfFormula) -> Term:
    """λa. a (λv₁.λr₁. r₁ (λv₂.λr₂. ... BODY)) with BODY the formula over the vᵢ.

    The assignment is taken apart once; booleans then select directly:
    ``p ∨ q`` is ``p T q``, ``¬p`` is ``p F T`` and ``p ∧ q`` is ``p q F``.
    """

    def literal(lit: int) -> Term:
        v = Var(f"v{abs(lit)}")
        return v if lit > 0 else App(App(v, F_TERM), T_TERM)

    def clause(c) -> Term:
        out = literal(c[-1])
        for lit in reversed(c[:-1]):
            out = App(App(literal(lit), T_TERM), out)
        return out

    body = clause(f.clauses[-1])
    for c in reversed(f.clauses[:-1]):
        body = App(App(clause(c), body), F_TERM)
    n = f.num_vars
    for i in range(n, 0, -1):
        body = Abs(f"v{i}", Abs(f"r{i}", body))
        if i > 1:
            body = App(Var(f"r{i - 1}"), body)
    return Abs("a", App(Var("a"), body))


def build_pipeline(f: CnfFormula, budget: int = DEFAULT_VAR_BUDGET) -> Term:
    """``(λs.(I, REMOVE-F (CHECK_f s))) GEN``."""
    body = Coll((I_TERM, App(named("REMOVE-F"), App(build_check(f), Var("s")))))
    return App(Abs("s", body), build_assignment_superposition(f.num_vars, budget))


# -- solving --------------------------------------------------------------------


@dataclass(frozen=True)
class SatVerdict:
    outcome: str  # "satisfiable" or "likely_unsat"
    trials: int
    observations: tuple
    confidence_bound: Fraction | None = None
    t_probability: Fraction | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def satisfiable(self) -> bool:
        return self.outcome == "satisfiable"

    @property
    def exit_code(self) -> int:
        return 10 if self.satisfiable else 20

    def to_json(self) -> dict:
        out = {
            "kind": "sat",
            "verdict": self.outcome,
            "trials": self.trials,
            "seed": self.seed,
            "observations": list(self.observations),
        }
        if self.confidence_bound is not None:
            out["confidence_bound"] = str(self.confidence_bound)
        if self.t_probability is not None:
            out["t_probability"] = str(self.t_probability)
        return out


def _classify(t: Term) -> str:
    if alpha_eq(t, I_TERM):
        return "I"
    if alpha_eq(t, T_TERM):
        return "T"
    if alpha_eq(t, F_TERM):
        raise InternalError("observed F: a false result survived cancellation")
    raise InternalError(f"unexpected observation {t}")


def evaluate_pipeline(f: CnfFormula, budget: int = DEFAULT_VAR_BUDGET, fuel: int = SAT_FUEL) -> Term:
    return evaluate(build_pipeline(f, budget), fuel=fuel)


def solve(
    f: CnfFormula,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    exact: bool = False,
    budget: int = DEFAULT_VAR_BUDGET,
    fuel: int = SAT_FUEL,
) -> SatVerdict:
    """Observe the pipeline once per trial (independent split seeds)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    value = evaluate_pipeline(f, budget, fuel)
    sampler = Sampler(value)
    obs = tuple(_classify(sampler.draw(r)) for r in RngState(seed).split(trials))
    t_prob = None
    if exact:
        dist = distribution_of(value)
        for t, _ in dist:
            _classify(t)
        t_prob = dist.probability(T_TERM)
    if "T" in obs:
        return SatVerdict("satisfiable", trials, obs, None, t_prob, seed)
    return SatVerdict("likely_unsat", trials, obs, 1 - Fraction(1, 2**trials), t_prob, seed)


def exact_t_probability(f: CnfFormula, budget: int = DEFAULT_VAR_BUDGET) -> Fraction:
    dist = distribution_of(evaluate_pipeline(f, budget))
    return dist.probability(T_TERM)


def brute_force_sat(f: CnfFormula) -> tuple:
    """(satisfiable, first satisfying assignment or None), True tried before False."""
    if f.num_vars > 20:
        raise BudgetExceeded("brute force is limited to 20 variables")
    for values in itertools.product((True, False), repeat=f.num_vars):
        if f.satisfied_by(values):
            return True, values
    return False, None


@functools.lru_cache(maxsize=None)
def assignment_values(n: int) -> Term:
    """The evaluated superposition of all 2ⁿ assignments (cached)."""
    return evaluate(build_assignment_superposition(n, max(n, DEFAULT_VAR_BUDGET)), fuel=SAT_FUEL)
