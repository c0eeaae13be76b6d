import random

import pytest

from helpers import random_term
from lambdaq.errors import CalculusViolation, FuelExhausted, NoRedex, StuckTerm
from lambdaq.reduction import (
    Fuel,
    beta_step,
    evaluate,
    gamma_normal_form,
    gamma_steps,
    has_gamma_redex,
    is_value,
    normalize,
)
from lambdaq.stdlib import build, decode_int
from lambdaq.syntax import Calculus, parse
from lambdaq.terms import App, Coll, alpha_eq, canonical_key, cardinality, collection


class TestGamma:
    def test_operator_collection(self):
        assert alpha_eq(gamma_normal_form(parse("(M, N) P")), parse("M P, N P"))

    def test_cardinality_law(self):
        t = gamma_normal_form(parse("(a, b, c) (d, e)"))
        assert cardinality(t) == 6

    def test_remove_f_first_step(self):
        t = gamma_normal_form(parse(r"(\x.IF x x (x, ~x)) (F, T, F)"))
        assert isinstance(t, Coll) and len(t.elems) == 3

    def test_collection_under_binder_is_not_a_redex(self):
        t = parse(r"\x.(x, y)")
        assert gamma_normal_form(t) is t
        assert list(gamma_steps(t)) == []

    def test_nested(self):
        t = gamma_normal_form(parse("f ((a, b) c)"))
        assert alpha_eq(t, parse("f (a c), f (b c)"))
        assert not has_gamma_redex(t)


class TestBeta:
    def test_examples(self):
        assert beta_step(parse(r"(\x.x) (\y.y)")) == parse(r"\y.y")
        assert alpha_eq(beta_step(parse(r"(~\x.x) (\y.y)")), parse(r"~\y.y"))
        out = beta_step(parse(r"(\x.x x) (a, b)"), Calculus.LAMBDA_P)
        assert alpha_eq(out, parse("a a, b b"))

    def test_no_redex(self):
        with pytest.raises(NoRedex):
            beta_step(parse(r"\x.(\y.y) x"))
        with pytest.raises(NoRedex):
            beta_step(parse("x y"))

    def test_mode_checked(self):
        with pytest.raises(CalculusViolation):
            beta_step(parse("~x"), Calculus.LAMBDA_P)


class TestEvaluate:
    def test_identity(self):
        assert evaluate(parse(r"(\x.x) (\y.y)"), fuel=1) == parse(r"\y.y")

    def test_values_are_fixed_points(self):
        for src in [r"\x.x", r"~\x.(x, y)", r"(\x.x), ~\y.y"]:
            v = parse(src)
            assert is_value(v)
            assert evaluate(v) == v

    def test_body_not_reduced(self):
        t = parse(r"\x.(\y.y) x")
        assert evaluate(t) is t

    def test_sign_carried_through_application(self):
        assert alpha_eq(evaluate(parse(r"(~\x.x) (\y.y)")), parse(r"~\y.y"))

    def test_collection_operand_distributes(self):
        out = evaluate(parse(r"(\x.\f.f x) ((\a.a), (\b.\c.c))"))
        assert cardinality(out) == 2

    def test_collection_congruence(self):
        m, n = parse(r"(\x.x) (\y.y)"), parse(r"(\x.\z.x) (\q.q)")
        assert alpha_eq(evaluate(collection([m, n])), collection([evaluate(m), evaluate(n)]))

    def test_elements_evaluate_independently(self):
        rng = random.Random(9)
        for _ in range(100):
            items = [random_term(rng, 8, names=("x",)) for _ in range(3)]
            closed = [parse(r"\x.x")]
            for it in items:
                closed.append(parse(r"(\x.x) (\x.x)") if it.fv else it)
            try:
                singles = [evaluate(c, fuel=200) for c in closed]
            except (StuckTerm, FuelExhausted):
                continue
            assert alpha_eq(evaluate(collection(closed), fuel=1000), collection(singles))

    def test_stuck(self):
        with pytest.raises(StuckTerm):
            evaluate(parse("x y"))
        with pytest.raises(StuckTerm):
            # the operator only becomes a collection after evaluation
            evaluate(parse(r"((\q.(q, q)) (\a.a)) (\c.c)"))
        assert cardinality(evaluate(parse(r"((\a.a), (\b.b)) (\c.c)"))) == 2

    def test_fuel(self):
        omega = parse(r"(\x.x x) (\x.x x)")
        with pytest.raises(FuelExhausted) as info:
            evaluate(omega, fuel=50)
        assert info.value.partial is not None
        fuel = Fuel(10)
        with pytest.raises(FuelExhausted):
            evaluate(omega, fuel=fuel)
        assert fuel.used == 11

    def test_embedding_across_modes(self):
        rng = random.Random(2)
        for _ in range(200):
            t = random_term(rng, 9, coll=False, neg=False)
            results = []
            for mode in Calculus:
                try:
                    results.append(evaluate(t, mode, fuel=100))
                except (StuckTerm, FuelExhausted) as exc:
                    results.append(type(exc))
            assert results[0] == results[1] == results[2]

    def test_library_terms(self):
        out = evaluate(build("W 3"))
        assert cardinality(out) == 8
        assert sorted(decode_int(e) for e in out.elems) == [-3, -1, -1, -1, 1, 1, 1, 3]
        F, T = parse(r"\x.\y.y"), parse(r"\x.\y.x")
        want = collection([F, parse(r"~\x.\y.y"), T, F, parse(r"~\x.\y.y")])
        assert alpha_eq(evaluate(build("REMOVE-F (F, T, F)")), want)


def test_normalize_reads_back_numerals():
    assert alpha_eq(normalize(evaluate(build("S 2"))), parse("3"))
    assert alpha_eq(normalize(parse(r"(\x.x) ((\y.y), z)")), parse(r"\y.y, z"))


def _redex_dense(rng, depth):
    """Applications whose sides are often collections: many competing γ-redexes."""
    if depth == 0:
        return random_term(rng, 2, coll=False)
    if rng.random() < 0.5:
        return collection([_redex_dense(rng, depth - 1) for _ in range(rng.randint(2, 3))])
    return App(_redex_dense(rng, depth - 1), _redex_dense(rng, depth - 1))


def test_gamma_confluence_on_redex_dense_terms():
    rng = random.Random(66)
    branching = searched = 0
    for _ in range(300):
        t = _redex_dense(rng, 3)
        steps = list(gamma_steps(t))
        branching += len(steps) > 1
        seen, frontier, normal = {canonical_key(t)}, [t], []
        while frontier:
            nxt = []
            for u in frontier:
                succ = list(gamma_steps(u))
                if not succ:
                    normal.append(u)
                for s in succ:
                    if canonical_key(s) not in seen:
                        seen.add(canonical_key(s))
                        nxt.append(s)
            frontier = nxt
            if len(seen) > 800:
                break
        else:
            searched += 1
            target = gamma_normal_form(t)
            assert all(alpha_eq(n, target) for n in normal)
    assert branching > 100 and searched > 250
