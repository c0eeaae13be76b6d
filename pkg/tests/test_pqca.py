import itertools
import json
from fractions import Fraction

import pytest

from lambdaq.errors import BudgetExceeded, FormatError, NotAConfiguration
from lambdaq.pqca import (
    ConfigSuperposition,
    Pqca,
    check_equivalence,
    config_map,
    direct_run,
    direct_step,
    encode_config,
    load_pqca,
    pqca_from_json,
    scale_matrix,
    translate,
    translate_source,
)
from lambdaq.reduction import evaluate
from lambdaq.stdlib import build, church, match_numeral
from lambdaq.terms import collection, opposite, to_counts

TWO_THIRDS = Pqca.make([1, 2], 1, [0], [["2/3", "1/3"], ["0", "1"]], accept_states=[2])
INTERFERENCE = Pqca.make([1, 2], 1, [0], [["1/2", "1/2"], ["1/2", "-1/2"]])


class TestScaling:
    def test_two_thirds(self):
        st = scale_matrix(TWO_THIRDS.matrix)
        assert st.b == 9 and st.T == ((6, 3), (0, 9)) and st.d == 1

    def test_halves(self):
        st = scale_matrix([["1/2", "-1/2"], ["1/2", "1/2"]])
        assert st.b == 16
        assert st.T == ((8, -8), (8, 8))

    def test_initial_denominators(self):
        st = scale_matrix([[1, 0], [0, 1]], [((1,), Fraction(1, 2)), ((2,), Fraction(1, 3))])
        assert (st.b, st.d) == (1, 6)


class TestDirect:
    def test_two_thirds_steps(self):
        runs = direct_run(TWO_THIRDS, 2)
        assert runs[1].as_dict() == {(1,): Fraction(2, 3), (2,): Fraction(1, 3)}
        assert runs[2].as_dict() == {(1,): Fraction(4, 9), (2,): Fraction(5, 9)}

    def test_interference_cancels(self):
        runs = direct_run(INTERFERENCE, 2)
        assert runs[2].as_dict() == {(1,): Fraction(1, 2)}

    def test_permutation_moves_cells(self):
        a = Pqca.make([1, 2], 2, [1, 0], [[1, 0], [0, 1]], initial=[((1, 2), 1)])
        s = direct_step(a.initial_superposition(), a)
        assert s.as_dict() == {(2, 1): 1}

    def test_at_cell(self):
        s = ConfigSuperposition.of({(1, 2): Fraction(1, 2), (1, 1): Fraction(1, 4), (2, 2): 0})
        assert s.at_cell(0) == {1: Fraction(3, 4)}
        assert s.total() == Fraction(3, 4)


class TestTranslation:
    def test_q_row_shape(self):
        src = translate_source(TWO_THIRDS).rsplit("RUN", 1)[0] + "Q 1\n"
        value = evaluate(build(src))
        got = {}
        for e in to_counts(value):
            got[match_numeral(e.term)] = (e.pos, e.neg)
        assert got == {1: (6, 0), 2: (3, 0)}

    def test_config_map_injective_and_round_trips(self):
        a = Pqca.make([1, 2], 2, [0, 1], [[1, 0], [0, 1]])
        seen = {}
        for cfg in itertools.product(a.states, repeat=2):
            t = evaluate(encode_config(cfg))
            assert config_map(t, a) == cfg
            assert config_map(opposite(t), a) == cfg
            seen[str(t)] = cfg
        assert len(seen) == 4

    def test_config_map_rejects(self):
        a = Pqca.make([1, 2], 1, [0], [[1, 0], [0, 1]])
        with pytest.raises(NotAConfiguration):
            config_map(evaluate(encode_config((3,))), a)
        with pytest.raises(NotAConfiguration):
            config_map(collection([evaluate(encode_config((1,)))] * 2), a)
        with pytest.raises(NotAConfiguration):
            config_map(church(1), a)

    def test_program_is_closed(self):
        assert not translate(TWO_THIRDS).fv

    def test_budget(self):
        big = Pqca.make([1, 2, 3, 4], 1, [0], [[1 if i == j else 0 for j in range(4)] for i in range(4)])
        with pytest.raises(BudgetExceeded):
            translate(big)
        with pytest.raises(BudgetExceeded):
            check_equivalence(TWO_THIRDS, 6)


class TestEquivalence:
    def test_two_thirds(self):
        r = check_equivalence(TWO_THIRDS, 3)
        assert r.all_match
        assert r.steps[0].calculus_counts == {(1,): 6, (2,): 3}
        assert r.steps[1].calculus_counts == {(1,): 36, (2,): 45}

    def test_interference(self):
        r = check_equivalence(INTERFERENCE, 2)
        assert r.all_match
        assert r.steps[1].calculus_counts == {(1,): 128}

    def test_signed_initial_superposition(self):
        a = Pqca.make([1, 2], 1, [0], [["1/2", "1/2"], ["1/2", "-1/2"]], initial=[((1,), "1/2"), ((2,), "-1/2")])
        r = check_equivalence(a, 2)
        assert r.all_match

    def test_two_cells_with_permutation(self):
        a = Pqca.make([1, 2], 2, [1, 0], [["1/2", "1/2"], [0, 1]], initial=[((1, 2), 1)])
        r = check_equivalence(a, 2)
        assert r.all_match
        assert r.b == 4


class TestFiles:
    def test_load_sample(self, tmp_path):
        p = tmp_path / "a.json"
        p.write_text(json.dumps({"states": [1, 2], "cells": 1, "matrix": [["2/3", "1/3"], [0, 1]]}))
        assert load_pqca(p) == TWO_THIRDS.__class__.make([1, 2], 1, [0], [["2/3", "1/3"], [0, 1]])

    def test_initial_forms(self):
        base = {"states": [1, 2], "cells": 1, "matrix": [[1, 0], [0, 1]]}
        a = pqca_from_json({**base, "initial": [2]})
        assert a.initial == (((2,), Fraction(1)),)
        b = pqca_from_json({**base, "initial": [{"config": [1], "amplitude": "-1/2"}]})
        assert b.initial == (((1,), Fraction(-1, 2)),)

    @pytest.mark.parametrize(
        "data",
        [
            {"cells": 1, "matrix": [[1]]},
            {"states": [1, 2], "cells": 1, "matrix": [[1, 0]]},
            {"states": [1], "cells": 2, "permutation": [0, 0], "matrix": [[1]]},
            {"states": [1], "cells": 1, "matrix": [["x"]]},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(FormatError):
            pqca_from_json(data)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{\n  nope")
        with pytest.raises(FormatError) as info:
            load_pqca(p)
        assert info.value.line == 2
