"""LTL parsing, normal form and direct lasso evaluation."""

import pytest

from eccsynth.errors import LtlSyntaxError
from eccsynth.ltl import (
    AtomIn,
    AtomInVar,
    AtomOut,
    AtomOutVar,
    LAnd,
    LFalse,
    LFinally,
    LGlobally,
    LImplies,
    LNext,
    LNot,
    LOr,
    LRelease,
    LTrue,
    LUntil,
    evaluate_lasso,
    nnf,
    parse_ltl,
    parse_ltl_file,
)

from conftest import el


class TestParser:
    def test_safety_shape(self):
        f = parse_ltl("G(out!=B)")
        assert f == LGlobally(LNot(AtomOut("B")))

    def test_liveness_shape(self):
        assert parse_ltl("F(out=B)") == LFinally(AtomOut("B"))

    def test_nested_response(self):
        f = parse_ltl("G(x1 -> F z1)")
        assert f == LGlobally(LImplies(AtomInVar(0), LFinally(AtomOutVar(0))))

    def test_empty_output_event(self):
        assert parse_ltl("out=.") == AtomOut(None)

    def test_input_event_atom(self):
        assert parse_ltl("in=REQ") == AtomIn("REQ")
        assert parse_ltl("in!=REQ") == LNot(AtomIn("REQ"))

    def test_precedence(self):
        # unary > U/R > & > | > ->
        f = parse_ltl("a1 | b1 & c1 -> d1" .replace("a1", "x1")
                      .replace("b1", "x2").replace("c1", "x3").replace("d1", "x4"))
        assert f == LImplies(LOr(AtomInVar(0), LAnd(AtomInVar(1), AtomInVar(2))),
                             AtomInVar(3))
        g = parse_ltl("x1 U x2 & x3")
        assert g == LAnd(LUntil(AtomInVar(0), AtomInVar(1)), AtomInVar(2))

    def test_until_right_associative(self):
        f = parse_ltl("x1 U x2 U x3")
        assert f == LUntil(AtomInVar(0), LUntil(AtomInVar(1), AtomInVar(2)))

    def test_release(self):
        assert parse_ltl("x1 R x2") == LRelease(AtomInVar(0), AtomInVar(1))

    def test_constants(self):
        assert parse_ltl("true") == LTrue()
        assert parse_ltl("G true") == LGlobally(LTrue())

    def test_error_position(self):
        with pytest.raises(LtlSyntaxError) as err:
            parse_ltl("G(out=B))")
        assert err.value.position == 8
        with pytest.raises(LtlSyntaxError):
            parse_ltl("")
        with pytest.raises(LtlSyntaxError):
            parse_ltl("G(unknownatom)")

    def test_file_with_comments(self):
        formulas = parse_ltl_file("# header\nG(out!=B)\n\nF(out=B) # trailing\n")
        assert len(formulas) == 2


class TestNnf:
    def test_globally(self):
        assert nnf(parse_ltl("G x1")) == LRelease(LFalse(), AtomInVar(0))

    def test_finally(self):
        assert nnf(parse_ltl("F x1")) == LUntil(LTrue(), AtomInVar(0))

    def test_negated_until(self):
        f = nnf(parse_ltl("!(x1 U x2)"))
        assert f == LRelease(LNot(AtomInVar(0)), LNot(AtomInVar(1)))

    def test_double_negation(self):
        assert nnf(parse_ltl("!!x1")) == AtomInVar(0)

    def test_implication_rewritten(self):
        f = nnf(parse_ltl("x1 -> x2"))
        assert f == LOr(LNot(AtomInVar(0)), AtomInVar(1))

    def test_negated_next(self):
        assert nnf(parse_ltl("!X x1")) == LNext(LNot(AtomInVar(0)))


class TestLassoEvaluation:
    def steps(self):
        # z1 flips between the two positions; event A on the first only
        return [el("R", "1", "A", "1"), el("R", "0", ".", "0")]

    def test_propositional_at_first(self):
        assert evaluate_lasso(parse_ltl("out=A"), self.steps(), 0)
        assert not evaluate_lasso(parse_ltl("out=."), self.steps(), 0)

    def test_next(self):
        assert evaluate_lasso(parse_ltl("X(out=.)"), self.steps(), 0)

    def test_globally_fails_on_mixed_cycle(self):
        assert not evaluate_lasso(parse_ltl("G(out=A)"), self.steps(), 0)

    def test_finally_true_around_cycle(self):
        assert evaluate_lasso(parse_ltl("F(out=.)"), self.steps(), 0)

    def test_eventual_not_reached_when_loop_excludes(self):
        # loop over the second element only: out=A never occurs again
        steps = self.steps()
        assert not evaluate_lasso(parse_ltl("X F (out=A)"), steps, 1)
        assert evaluate_lasso(parse_ltl("F(out=A)"), steps, 1)

    def test_until(self):
        assert evaluate_lasso(parse_ltl("x1 U (out=.)"), self.steps(), 0)
        assert not evaluate_lasso(parse_ltl("false U (out=B)"), self.steps(), 0)

    def test_release(self):
        # nothing ever releases, body must hold forever
        assert evaluate_lasso(parse_ltl("false R (in=R)"), self.steps(), 0)
        assert not evaluate_lasso(parse_ltl("false R (out=A)"), self.steps(), 0)

    def test_globally_finally_on_lasso(self):
        assert evaluate_lasso(parse_ltl("G F (out=A)"), self.steps(), 0)
        assert not evaluate_lasso(parse_ltl("G F (out=A)"), self.steps(), 1)

    def test_bad_loop_index(self):
        with pytest.raises(ValueError):
            evaluate_lasso(parse_ltl("true"), self.steps(), 2)
