"""Command line front end: eval / observe / dist / sat / pqca / repl."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import pqca as pqca_mod
from . import sat as sat_mod
from .errors import LambdaQError, ParseError, Unobservable
from .observation import DEFAULT_BUDGET, RngState, exact_distribution, observe
from .reduction import DEFAULT_FUEL, Evaluator, Fuel
from .stdlib import describe, link, link_bindings, load_prelude
from .syntax import Calculus, SourceProgram, format_term, parse_program
from .terms import Term


def default_fuel() -> int:
    env = os.environ.get("LAMBDAQ_FUEL")
    return int(env) if env else DEFAULT_FUEL


@dataclass(frozen=True)
class SessionConfig:
    mode: Calculus = Calculus.LAMBDA_Q
    fuel: int = DEFAULT_FUEL
    seed: int = 0
    trials: int = sat_mod.DEFAULT_TRIALS
    output: str = "text"
    prelude: str | None = None  # path of an alternative prelude file
    use_prelude: bool = True
    budget: int = DEFAULT_BUDGET


class Session:
    """Parsing and linking state shared by the subcommands and the REPL."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.env = self._base_env()

    def _base_env(self) -> dict:
        if not self.config.use_prelude:
            return {}
        if self.config.prelude is None:
            return load_prelude()
        text = _read(self.config.prelude)
        prog = parse_program(SourceProgram(text, self.config.prelude), Calculus.LAMBDA_Q)
        return link_bindings(prog.bindings, load_prelude(), self.config.prelude)

    def program(self, text: str, origin: str = "<input>") -> Term:
        prog = parse_program(SourceProgram(text, origin), self.config.mode)
        self.define(prog.bindings, origin)
        if prog.term is None:
            raise ParseError("no term to evaluate", origin=origin)
        return self.link(prog.term)

    def define(self, bindings, origin: str = "<input>"):
        if bindings:
            self.env = link_bindings(bindings, self.env, origin)

    def link(self, term: Term) -> Term:
        std_if = self.config.use_prelude and self.env.get("IF") is load_prelude().get("IF")
        return link(term, self.env, std_if)

    def evaluate(self, term: Term):
        ev = Evaluator(self.config.mode, Fuel(self.config.fuel))
        return ev.evaluate(term), ev.fuel.used

    def observe(self, term: Term, rng) -> Term:
        return observe(term, self.config.mode, self.config.fuel, rng)

    def distribution(self, term: Term):
        return exact_distribution(term, self.config.mode, self.config.fuel, self.config.budget)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def distribution_labels(dist) -> list:
    """Labels for each outcome; F reads as 0 when the other outcomes are numbers."""
    labels = [describe(t) for t, _ in dist]
    if any(_is_int(l) for l in labels):
        labels = [describe(t, numeric=True) for t, _ in dist]
    return labels


def _is_int(s: str) -> bool:
    return s.lstrip("-").isdigit()


def _dist_rows(dist) -> list:
    rows = list(zip(distribution_labels(dist), (p for _, p in dist), (t for t, _ in dist)))
    if all(_is_int(l) for l, _, _ in rows):
        rows.sort(key=lambda r: int(r[0]))
    return rows


def format_distribution(dist) -> str:
    return "\n".join(f"{label}: {p}" for label, p, _ in _dist_rows(dist))


def distribution_json(dist) -> dict:
    outcomes = [
        {"term": format_term(t), "label": label, "p_num": p.numerator, "p_den": p.denominator}
        for label, p, t in _dist_rows(dist)
    ]
    return {"kind": "distribution", "outcomes": outcomes}


def _emit(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


# -- subcommands ----------------------------------------------------------------


def _source(args) -> tuple:
    if args.expr is not None:
        return args.expr, "<expr>"
    if args.file is None:
        raise ParseError("give a program file or -e EXPR")
    return _read(args.file), args.file


def cmd_eval(args, cfg: SessionConfig) -> int:
    s = Session(cfg)
    value, used = s.evaluate(s.program(*_source(args)))
    if cfg.output == "json":
        print(_emit({"kind": "value", "term": format_term(value), "label": describe(value), "fuel_used": used}))
    else:
        print(format_term(value))
    return 0


def cmd_observe(args, cfg: SessionConfig) -> int:
    s = Session(cfg)
    out = s.observe(s.program(*_source(args)), RngState(cfg.seed))
    if cfg.output == "json":
        print(_emit({"kind": "observation", "term": format_term(out), "label": describe(out), "seed": cfg.seed}))
    else:
        print(describe(out))
    return 0


def cmd_dist(args, cfg: SessionConfig) -> int:
    s = Session(cfg)
    dist = s.distribution(s.program(*_source(args)))
    print(_emit(distribution_json(dist)) if cfg.output == "json" else format_distribution(dist))
    return 0


def cmd_sat(args, cfg: SessionConfig) -> int:
    f = sat_mod.parse_dimacs(_read(args.file))
    verdict = sat_mod.solve(f, trials=cfg.trials, seed=cfg.seed, exact=args.exact)
    if cfg.output == "json":
        print(_emit(verdict.to_json()))
    else:
        if verdict.satisfiable:
            first = verdict.observations.index("T") + 1
            print(f"SATISFIABLE (T observed in trial {first} of {verdict.trials})")
        else:
            print(f"LIKELY UNSATISFIABLE ({verdict.trials} trials observed I; confidence {verdict.confidence_bound})")
        if verdict.t_probability is not None:
            print(f"P(T) = {verdict.t_probability}")
    return verdict.exit_code


def cmd_pqca(args, cfg: SessionConfig) -> int:
    a = pqca_mod.load_pqca(args.file)
    if args.emit_term:
        Path(args.emit_term).write_text(pqca_mod.translate_source(a, args.steps), encoding="utf-8")
    report = pqca_mod.check_equivalence(a, args.steps, fuel=max(cfg.fuel, pqca_mod.PQCA_FUEL))
    if cfg.output == "json":
        print(_emit(report.to_json()))
    else:
        print(f"b = {report.b}, d = {report.d}, T = {[list(r) for r in report.T]}")
        for st in report.steps:
            status = "match" if st.match and st.scaled_match else "MISMATCH"
            amps = ", ".join(f"{list(c)}: {v}" for c, v in sorted(st.direct_amplitudes.items())) or "(empty)"
            print(f"step {st.step}: {status}; fuel {st.fuel_used}; {st.collection_size} terms; {amps}")
    return 0 if report.all_match else 1


def cmd_repl(args, cfg: SessionConfig) -> int:
    repl = Repl(cfg)
    interactive = sys.stdin.isatty()
    while not repl.done:
        try:
            line = input("λᑫ> " if interactive else "")
        except EOFError:
            break
        out = repl.handle(line)
        if out:
            print(out)
    return 0


# -- REPL -----------------------------------------------------------------------


class Repl:
    """Line-oriented session; `handle` returns the text to print."""

    HELP = (
        ":eval M | :observe M | :dist M | :let NAME = M | :mode lambda|lambda_p|lambda_q"
        " | :seed N | :quit   (a bare term is evaluated)"
    )

    def __init__(self, config: SessionConfig = SessionConfig()):
        self.session = Session(config)
        self.draws = 0
        self.done = False

    @property
    def config(self) -> SessionConfig:
        return self.session.config

    def handle(self, line: str) -> str:
        line = line.strip()
        if not line or line.startswith("#"):
            return ""
        cmd, _, rest = line.partition(" ") if line.startswith(":") else (":eval", "", line)
        try:
            return self._dispatch(cmd, rest.strip())
        except Unobservable:
            return "unobservable"
        except LambdaQError as exc:
            return f"error: {exc}"
        except ValueError as exc:
            return f"error: {exc}"

    def _dispatch(self, cmd: str, rest: str) -> str:
        s = self.session
        if cmd in (":quit", ":q"):
            self.done = True
            return ""
        if cmd == ":help":
            return self.HELP
        if cmd == ":mode":
            s.config = replace(s.config, mode=Calculus.coerce(rest))
            return f"mode {s.config.mode.value}"
        if cmd == ":seed":
            s.config = replace(s.config, seed=int(rest))
            self.draws = 0
            return f"seed {s.config.seed}"
        if cmd == ":let":
            text = rest if rest.startswith("let ") else "let " + rest
            if not text.rstrip().endswith(";"):
                text += " ;"
            prog = parse_program(text, s.config.mode)
            s.define(prog.bindings, "<repl>")
            return f"defined {', '.join(n for n, _ in prog.bindings)}"
        if cmd == ":eval":
            value, _ = s.evaluate(s.program(rest, "<repl>"))
            return format_term(value)
        if cmd == ":observe":
            rng = RngState(s.config.seed, (self.draws,))
            self.draws += 1
            return describe(s.observe(s.program(rest, "<repl>"), rng))
        if cmd == ":dist":
            return format_distribution(s.distribution(s.program(rest, "<repl>")))
        return f"unknown command {cmd}; {self.HELP}"


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[c.value for c in Calculus], default=Calculus.LAMBDA_Q.value)
    common.add_argument("--fuel", type=int, default=None, help="evaluation step bound (default 100000 or $LAMBDAQ_FUEL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--no-prelude", action="store_true", help="do not link the standard prelude")
    common.add_argument("--prelude", metavar="FILE", help="extra let-bindings linked after the standard prelude")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum distinct outcomes")

    parser = argparse.ArgumentParser(prog="lambdaq", description="Evaluate and observe λ, λᵖ and λᑫ terms.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("eval", cmd_eval, "evaluate the program's final term"),
        ("observe", cmd_observe, "evaluate, then observe once"),
        ("dist", cmd_dist, "exact distribution of observations"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file", nargs="?")
        p.add_argument("-e", "--expr", help="program text instead of a file")
        p.set_defaults(func=fn)

    p = sub.add_parser("sat", parents=[common], help="decide a DIMACS CNF formula by cancellation")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=sat_mod.DEFAULT_TRIALS)
    p.add_argument("--exact", action="store_true", help="also report the exact probability of observing T")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("pqca", parents=[common], help="check an automaton against its λᑫ translation")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--emit-term", metavar="OUT", help="write the generated program to OUT")
    p.set_defaults(func=cmd_pqca)

    p = sub.add_parser("repl", parents=[common], help="interactive session")
    p.set_defaults(func=cmd_repl)
    return parser


def config_from_args(args) -> SessionConfig:
    return SessionConfig(
        mode=Calculus.coerce(args.mode),
        fuel=args.fuel if args.fuel is not None else default_fuel(),
        seed=args.seed,
        trials=getattr(args, "trials", sat_mod.DEFAULT_TRIALS),
        output="json" if args.json else "text",
        prelude=args.prelude,
        use_prelude=not args.no_prelude,
        budget=args.budget,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, config_from_args(args))
    except Unobservable as exc:
        print(f"unobservable: {exc}", file=sys.stderr)
        return exc.exit_code
    except LambdaQError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except RecursionError:
        print("error: term nesting too deep for the interpreter", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
