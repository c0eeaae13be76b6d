import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_term
from lambdaq.errors import HeadUnsigned
from lambdaq.syntax import parse
from lambdaq.terms import (
    Abs,
    App,
    Coll,
    Sign,
    Var,
    alpha_eq,
    cardinality,
    collection,
    flatten,
    free_vars,
    head_sign,
    leaves,
    opposite,
    to_counts,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def term_from(seed, size=10):
    return random_term(random.Random(seed), size)


class TestSign:
    def test_concat_table(self):
        assert Sign.NEG.concat(Sign.NEG) is Sign.EMPTY
        for s in (Sign.POS, Sign.NEG):
            assert s.concat(Sign.EMPTY) is s
            assert Sign.EMPTY.concat(s) is s
        assert Sign.POS.concat(Sign.NEG) is Sign.NEG

    def test_double_negation_reads_positive(self):
        x = Var("x", Sign.NEG.concat(Sign.NEG))
        assert x == Var("x")
        assert x.sign is Sign.POS


class TestCollections:
    def test_single_element_is_not_a_collection(self):
        assert collection([Var("x")]) == Var("x")

    def test_empty_collection_rejected(self):
        with pytest.raises(ValueError):
            collection([])

    def test_nested_collections_flatten(self):
        t = parse("A, ((B, C), D)")
        assert isinstance(t, Coll) and len(t.elems) == 4
        assert alpha_eq(t, parse("A, C, B, D"))

    def test_flatten_counts_leaves(self):
        t = parse("(x, y), (y, x)")
        assert sorted(str(e) for e in t.elems) == ["x", "x", "y", "y"]

    def test_flatten_leaves_non_collection_alone(self):
        assert flatten(Var("x")) == Var("x")

    def test_cardinality(self):
        assert cardinality(parse("(x, y), z")) == 3
        assert cardinality(parse(r"\x.(y, z)")) == 1

    @settings(max_examples=200)
    @given(seeds)
    def test_flatten_idempotent_and_positive_cardinality(self, seed):
        t = term_from(seed)
        assert alpha_eq(flatten(flatten(t)), flatten(t))
        assert cardinality(t) >= 1
        assert cardinality(flatten(t)) == len(list(leaves(t)))


class TestFreeVarsAndAlpha:
    def test_free_vars(self):
        assert free_vars(parse(r"\x.x y")) == {"y"}
        assert free_vars(parse("x, ~x")) == {"x"}
        assert free_vars(parse(r"\x.\y.x")) == frozenset()

    def test_alpha_examples(self):
        assert alpha_eq(parse(r"\x.x"), parse(r"\y.y"))
        assert alpha_eq(parse("x, y"), parse("y, x"))
        assert not alpha_eq(parse("x"), parse("~x"))
        assert not alpha_eq(parse(r"\x.\y.x"), parse(r"\x.\y.y"))
        assert not alpha_eq(parse(r"\x.y"), parse(r"\y.y"))

    def test_collections_compare_as_multisets(self):
        assert not alpha_eq(parse("x, x, y"), parse("x, y, y"))

    @settings(max_examples=100)
    @given(seeds, seeds, seeds)
    def test_equivalence_relation(self, a, b, c):
        t1, t2, t3 = term_from(a, 6), term_from(b, 6), term_from(c, 6)
        assert alpha_eq(t1, t1)
        assert alpha_eq(t1, t2) == alpha_eq(t2, t1)
        if alpha_eq(t1, t2) and alpha_eq(t2, t3):
            assert alpha_eq(t1, t3)


class TestOpposites:
    def test_examples(self):
        assert opposite(parse("~x")) == Var("x")
        assert alpha_eq(opposite(parse(r"\y.y")), parse(r"~\y.y"))
        F = r"(\x.\y.y)"
        assert alpha_eq(opposite(parse(f"{F}, ~{F}")), parse(f"~{F}, {F}"))

    def test_application_takes_operator_head(self):
        assert head_sign(parse("~x y z")) is Sign.NEG
        assert alpha_eq(opposite(parse("x y")), parse("~x y"))

    def test_collection_headed_application_has_no_sign(self):
        with pytest.raises(HeadUnsigned):
            head_sign(App(Coll((Var("x"), Var("y"))), Var("z")))

    @settings(max_examples=200)
    @given(seeds)
    def test_involution(self, seed):
        t = term_from(seed)
        try:
            once = opposite(t)
        except HeadUnsigned:
            return
        assert alpha_eq(opposite(once), t)


class TestCounts:
    def test_remove_f_result(self):
        F, T = r"(\x.\y.y)", r"(\x.\y.x)"
        counts = to_counts(parse(f"{F}, ~{F}, {T}, {F}, ~{F}"))
        got = {(str(e.term), e.pos, e.neg, e.net) for e in counts}
        assert got == {(r"\x.\y.y", 2, 2, 0), (r"\x.\y.x", 1, 0, 1)}

    def test_singleton_and_cancelling_pair(self):
        (e,) = to_counts(Var("x"))
        assert (e.pos, e.neg, e.net) == (1, 0, 1)
        (e,) = to_counts(parse("x, ~x"))
        assert (e.pos, e.neg, e.net) == (1, 1, 0)

    @settings(max_examples=200)
    @given(seeds)
    def test_round_trip_and_totals(self, seed):
        t = flatten(term_from(seed))
        try:
            counts = to_counts(t)
        except HeadUnsigned:
            return
        assert counts.total() == cardinality(t)
        keys = [e.term for e in counts]
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                assert not alpha_eq(a, b)
        assert alpha_eq(counts.expand(), t)


def test_signs_only_on_variables_and_abstractions():
    t = parse("~(x y)")
    assert isinstance(t, App) and t.fn.sign is Sign.NEG
    assert isinstance(parse(r"~\x.x"), Abs)
