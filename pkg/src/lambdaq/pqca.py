"""One-dimensional partitioned cellular automata with rational amplitudes.

The model: a periodic row of cells, each holding a state.  One step moves
cell contents by a fixed permutation (``new[i] = old[perm[i]]``) and then
applies the local matrix Λ to every cell independently, so a configuration
c goes to c' with amplitude Π Λ[c_σ(i)][c'_i].

`translate` produces a λᑫ program computing the same evolution.  Λ is
scaled to an integer matrix T = bΛ, and entry t becomes |t| copies of the
target state's numeral, negated when t < 0.  Opposite configurations then
cancel during observation exactly as amplitudes cancel in `direct_step`.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import BudgetExceeded, FormatError, HeadUnsigned, NotAConfiguration
from .reduction import Evaluator, Fuel
from .stdlib import build, church, match_numeral
from .terms import Abs, App, Sign, Term, Var, head_sign, positive_form, to_counts

MAX_STATES = 3
MAX_CELLS = 4
MAX_STEPS = 5
PQCA_FUEL = 10_000_000


@dataclass(frozen=True)
class Pqca:
    states: tuple
    cells: int
    permutation: tuple
    matrix: tuple
    accept_states: tuple = ()
    accept_cell: int = 0
    initial: tuple = ()  # ((config, amplitude), ...); defaults to all cells in states[0]

    def __post_init__(self):
        m = len(self.states)
        if m < 1 or len(set(self.states)) != m or any(s < 0 for s in self.states):
            raise ValueError("states must be distinct nonnegative integers")
        if self.cells < 1:
            raise ValueError("need at least one cell")
        if sorted(self.permutation) != list(range(self.cells)):
            raise ValueError("permutation must be a bijection on 0..cells-1")
        if len(self.matrix) != m or any(len(row) != m for row in self.matrix):
            raise ValueError(f"matrix must be {m}x{m}")
        if any(not isinstance(x, Fraction) for row in self.matrix for x in row):
            raise ValueError("matrix entries must be Fractions")
        if not 0 <= self.accept_cell < self.cells:
            raise ValueError("accept_cell out of range")
        if any(s not in self.states for s in self.accept_states):
            raise ValueError("accept_states must be states")
        for config, amp in self.initial:
            self._check_config(config)
            if not isinstance(amp, Fraction) or amp == 0:
                raise ValueError("initial amplitudes must be nonzero Fractions")

    def _check_config(self, config):
        if len(config) != self.cells or any(s not in self.states for s in config):
            raise ValueError(f"bad configuration {config}")

    @classmethod
    def make(cls, states, cells, permutation, matrix, accept_states=(), accept_cell=0, initial=None):
        mat = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        states = tuple(states)
        if initial is None:
            init = (((states[0],) * cells, Fraction(1)),)
        else:
            init = tuple((tuple(c), Fraction(a)) for c, a in initial)
        return cls(states, cells, tuple(permutation), mat, tuple(accept_states), accept_cell, init)

    def index(self, state: int) -> int:
        return self.states.index(state)

    def initial_superposition(self) -> "ConfigSuperposition":
        return ConfigSuperposition.of(dict(self.initial))


@dataclass(frozen=True)
class ConfigSuperposition:
    """Configuration → nonzero rational amplitude."""

    entries: tuple  # sorted ((config, amplitude), ...)

    @classmethod
    def of(cls, mapping: dict) -> "ConfigSuperposition":
        return cls(tuple(sorted((c, Fraction(a)) for c, a in mapping.items() if a != 0)))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def total(self) -> Fraction:
        return sum((a for _, a in self.entries), Fraction(0))

    def normalized(self) -> dict:
        """Amplitudes divided by their sum (the count-proportional reading)."""
        n = self.total()
        if n == 0:
            raise ZeroDivisionError("amplitudes sum to zero")
        return {c: a / n for c, a in self.entries}

    def scaled(self, factor) -> dict:
        return {c: a * factor for c, a in self.entries}

    def at_cell(self, cell: int) -> dict:
        out: dict = {}
        for c, a in self.entries:
            out[c[cell]] = out.get(c[cell], Fraction(0)) + a
        return {s: a for s, a in sorted(out.items()) if a != 0}


@dataclass(frozen=True)
class ScaledTransition:
    T: tuple
    b: int
    d: int = 1


def scale_matrix(matrix, initial=()) -> ScaledTransition:
    """T = bΛ with b the product of every entry's denominator in lowest terms.

    d is the product of the initial amplitudes' denominators.
    """
    entries = [Fraction(x) for row in matrix for x in row]
    b = math.prod(x.denominator for x in entries)
    T = tuple(tuple(int(Fraction(x) * b) for x in row) for row in matrix)
    d = math.prod(Fraction(a).denominator for _, a in initial)
    return ScaledTransition(T, b, d)


def direct_step(s: ConfigSuperposition, a: Pqca) -> ConfigSuperposition:
    out: dict = {}
    rows = [a.matrix[a.index(x)] for x in a.states]
    for config, amp in s.entries:
        moved = tuple(config[a.permutation[i]] for i in range(a.cells))
        choices = []
        for x in moved:
            row = rows[a.index(x)]
            choices.append([(a.states[j], v) for j, v in enumerate(row) if v != 0])
        for combo in itertools.product(*choices):
            new = tuple(t for t, _ in combo)
            w = amp * math.prod((v for _, v in combo), start=Fraction(1))
            out[new] = out.get(new, Fraction(0)) + w
    return ConfigSuperposition.of(out)


def direct_run(a: Pqca, k: int) -> list:
    """Superpositions after 0..k steps."""
    s = a.initial_superposition()
    out = [s]
    for _ in range(k):
        s = direct_step(s, a)
        out.append(s)
    return out


# -- translation ----------------------------------------------------------------


def _check_budget(a: Pqca, max_states: int, max_cells: int):
    if len(a.states) > max_states:
        raise BudgetExceeded(f"{len(a.states)} states exceeds the budget of {max_states}")
    if a.cells > max_cells:
        raise BudgetExceeded(f"{a.cells} cells exceeds the budget of {max_cells}")


def _signed(n: int, negative: bool) -> str:
    return f"~{n}" if negative else str(n)


def _row_source(a: Pqca, T: tuple, i: int) -> str:
    items = []
    for j, t in enumerate(T[i]):
        items += [_signed(a.states[j], t < 0)] * abs(t)
    if not items:
        # an all-zero row annihilates: a pair that cancels
        s = a.states[0]
        items = [str(s), f"~{s}"]
    return "(" + ", ".join(items) + ")" if len(items) > 1 else items[0]


def _config_source(config) -> str:
    out = "PAIR 0 0"
    for s in reversed(config):
        out = f"PAIR {s} ({out})"
    return out


def translate_source(a: Pqca, steps: int | None = None, max_states: int = MAX_STATES, max_cells: int = MAX_CELLS) -> str:
    """The λᑫ program as `.lq` source; its final term is ``RUN k`` when `steps` is given."""
    _check_budget(a, max_states, max_cells)
    st = scale_matrix(a.matrix, a.initial)
    lines = ["# generated automaton program", f"# b = {st.b}, d = {st.d}, T = {[list(r) for r in st.T]}"]

    q = _row_source(a, st.T, len(a.states) - 1)
    for i in range(len(a.states) - 2, -1, -1):
        q = f"IF (EQUAL s {a.states[i]}) {_row_source(a, st.T, i)} ({q})"
    lines.append(f"let Q = \\s.{q} ;")
    lines.append("let NIL = PAIR 0 0 ;")
    # p I X carries p's sign onto X and p I p is p unsigned.  q arrives as a
    # collection, so it is passed on as an operand: γ then splits it and each
    # p is a single state, used twice without forming cross products.
    lines.append("let LIFT = \\q.\\r.(\\p.p I (r (\\a.\\b.PAIR (p I p) (PAIR a b)))) q ;")

    n = a.cells
    built = "NIL"
    for i in reversed(range(n)):
        built = f"LIFT (Q x{a.permutation[i] + 1}) ({built})"
    body = built
    for i in reversed(range(1, n + 1)):
        inner = f"\\x{i}.\\r{i}.{body}"
        body = f"r{i - 1} ({inner})" if i > 1 else inner
    lines.append(f"let STEP = \\c.c ({body}) ;")

    init = []
    for config, amp in a.initial:
        count = amp * st.d
        assert count.denominator == 1
        term = f"({_config_source(config)})"
        init += [("~" if count < 0 else "") + term] * abs(int(count))
    lines.append(f"let INIT = {', '.join(init)} ;")
    lines.append("let RUN = PRIM-REC (\\j.\\s.STEP s) INIT ;")
    lines.append(f"RUN {steps}" if steps is not None else "RUN")
    return "\n".join(lines) + "\n"


def translate(a: Pqca, max_states: int = MAX_STATES, max_cells: int = MAX_CELLS) -> Term:
    """Closed λᑫ term M with ``M k̲`` evaluating to the k-step superposition."""
    return build(translate_source(a, None, max_states, max_cells))


def encode_config(config) -> Term:
    return build(_config_source(config))


def config_map(t: Term, a: Pqca) -> tuple:
    """Strip sign and pairing from a configuration value, leaving the states."""
    try:
        head_sign(t)
    except HeadUnsigned as exc:
        raise NotAConfiguration("a collection is not a single configuration") from exc
    t = positive_form(t)
    out = []
    for _ in range(a.cells):
        s, t = _unpair(t)
        n = match_numeral(s)
        if n is None or n not in a.states:
            raise NotAConfiguration(f"cell content {s} is not a state numeral")
        out.append(n)
    p, q = _unpair(t)
    if match_numeral(p) != 0 or match_numeral(q) != 0:
        raise NotAConfiguration("configuration does not end in NIL")
    return tuple(out)


def _unpair(t: Term):
    if (
        isinstance(t, Abs)
        and t.sign is Sign.POS
        and isinstance(t.body, App)
        and isinstance(t.body.fn, App)
        and t.body.fn.fn == Var(t.var)
    ):
        return t.body.fn.arg, t.body.arg
    raise NotAConfiguration("expected a pair")


# -- equivalence ----------------------------------------------------------------


@dataclass(frozen=True)
class StepReport:
    step: int
    match: bool
    scaled_match: bool
    calculus_counts: dict
    direct_amplitudes: dict
    fuel_used: int
    collection_size: int

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "match": self.match,
            "scaled_match": self.scaled_match,
            "fuel_used": self.fuel_used,
            "collection_size": self.collection_size,
            "calculus_counts": _json_map(self.calculus_counts),
            "direct_amplitudes": _json_map(self.direct_amplitudes),
        }


@dataclass(frozen=True)
class EquivalenceReport:
    b: int
    d: int
    T: tuple
    steps: tuple = field(default_factory=tuple)

    @property
    def all_match(self) -> bool:
        return all(s.match and s.scaled_match for s in self.steps)

    def to_json(self) -> dict:
        return {
            "kind": "pqca",
            "b": self.b,
            "d": self.d,
            "T": [list(r) for r in self.T],
            "all_match": self.all_match,
            "steps": [s.to_json() for s in self.steps],
        }


def _proportional(counts: dict, amps: dict) -> bool:
    if counts.keys() != amps.keys():
        return False
    ratios = {Fraction(v) / amps[c] for c, v in counts.items()}
    return len(ratios) <= 1 and all(r > 0 for r in ratios)


def _json_map(m: dict) -> list:
    return [{"config": list(c), "value": str(v)} for c, v in sorted(m.items())]


def calculus_superposition(a: Pqca, k: int, program: Term | None = None, fuel: int = PQCA_FUEL):
    """Net signed counts per configuration after k steps, plus (fuel used, size)."""
    program = translate(a) if program is None else program
    ev = Evaluator(fuel=Fuel(fuel))
    value = ev.evaluate(App(program, church(k)))
    counts: dict = {}
    size = 0
    for entry in to_counts(value):
        size += entry.pos + entry.neg
        if entry.net:
            c = config_map(entry.term, a)
            counts[c] = counts.get(c, 0) + entry.net
    return {c: v for c, v in counts.items() if v}, ev.fuel.used, size


def check_equivalence(a: Pqca, k: int, fuel: int = PQCA_FUEL) -> EquivalenceReport:
    """Compare the λᑫ program with `direct_step` after each of 1..k steps.

    A step matches when the net counts equal d·b^(cells·j) times the direct
    amplitudes exactly (`scaled_match`), and when both sides agree after
    dividing by their totals (`match`).  When both totals are zero the
    quotient is undefined and `match` asks for a common positive ratio.
    """
    if not 0 <= k <= MAX_STEPS:
        raise BudgetExceeded(f"steps must be within 0..{MAX_STEPS}")
    st = scale_matrix(a.matrix, a.initial)
    program = translate(a)
    direct = direct_run(a, k)
    reports = []
    for j in range(1, k + 1):
        counts, used, size = calculus_superposition(a, j, program, fuel)
        amps = direct[j].as_dict()
        factor = st.d * st.b ** (a.cells * j)
        scaled_match = counts == {c: int(v * factor) for c, v in amps.items()} and all(
            (v * factor).denominator == 1 for v in amps.values()
        )
        tot_c = sum(counts.values())
        tot_d = direct[j].total()
        if tot_c == 0 or tot_d == 0:
            match = tot_c == 0 and tot_d == 0 and _proportional(counts, amps)
        else:
            match = {c: Fraction(v, tot_c) for c, v in counts.items()} == direct[j].normalized()
        reports.append(StepReport(j, match, scaled_match, counts, amps, used, size))
    return EquivalenceReport(st.b, st.d, st.T, tuple(reports))


# -- files ----------------------------------------------------------------------


def pqca_from_json(data: dict) -> Pqca:
    try:
        states = [int(s) for s in data["states"]]
        matrix = [[Fraction(str(x)) for x in row] for row in data["matrix"]]
        initial = data.get("initial")
        if initial is not None:
            if initial and isinstance(initial[0], int):
                initial = [(initial, 1)]
            else:
                initial = [(e["config"], Fraction(str(e.get("amplitude", 1)))) for e in initial]
        return Pqca.make(
            states,
            int(data["cells"]),
            [int(p) for p in data.get("permutation", range(int(data["cells"])))],
            matrix,
            data.get("accept_states", ()),
            int(data.get("accept_cell", 0)),
            initial,
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"invalid automaton description: {exc}") from exc


def load_pqca(path) -> Pqca:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno, str(path)) from exc
    return pqca_from_json(data)
