"""Tests for the core term and weight operations.

Alpha-equivalence is checked against the independent nameless-form oracle in
dbterms.py; substitution behaviour is pinned by hand-computed cases first and
laws second.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbterms import to_db
from strategies import (
    decreasing_weight_exprs,
    terms,
    var_names,
    weight_exprs,
    weights,
)
from veracity.core import (
    ARG,
    Apply,
    Atom,
    Atomic,
    CasesOf,
    Const,
    Judgement,
    Lambda,
    Min,
    Mul,
    Pair,
    Provenance,
    SplitOf,
    TagL,
    TagR,
    TrustEdge,
    TrustRelation,
    Var,
    alpha_equal,
    as_weight,
    atoms_of_claim,
    eval_weight_expr,
    format_weight,
    free_vars,
    fresh_name,
    neg,
    substitute,
    substitute_many,
)


class TestWeights:
    def test_exact_decimal_rendering(self) -> None:
        assert format_weight(Fraction(1)) == "1.0"
        assert format_weight(Fraction(0)) == "0.0"
        assert format_weight(Fraction(1, 2)) == "0.5"
        assert format_weight(Fraction(1, 5)) == "0.2"
        assert format_weight(Fraction(256, 625)) == "0.4096"

    def test_non_terminating_decimals_fall_back_to_fractions(self) -> None:
        assert format_weight(Fraction(1, 3)) == "1/3"
        assert format_weight(Fraction(5, 6)) == "5/6"

    def test_floats_are_rejected(self) -> None:
        with pytest.raises(TypeError):
            as_weight(0.5)

    def test_range_is_enforced(self) -> None:
        with pytest.raises(ValueError):
            as_weight(Fraction(3, 2))
        with pytest.raises(ValueError):
            as_weight(-1)
        with pytest.raises(ValueError):
            Judgement(Atom("a"), "P", Fraction(2), Atomic("A"))
        with pytest.raises(ValueError):
            TrustEdge("k", "l", Fraction(-1, 2))

    def test_string_decimals_convert_exactly(self) -> None:
        assert as_weight("0.4096") == Fraction(256, 625)
        assert as_weight("1/3") == Fraction(1, 3)


class TestWeightExprs:
    def test_half_times_argument(self) -> None:
        half_z = Mul(Const(Fraction(1, 2)), ARG)
        assert eval_weight_expr(half_z, Fraction(2, 5)) == Fraction(1, 5)

    def test_min_with_one_is_identity(self) -> None:
        expr = Min(Const(Fraction(1)), ARG)
        assert eval_weight_expr(expr, Fraction(7, 10)) == Fraction(7, 10)

    @given(weight_exprs(), weights)
    def test_evaluation_stays_in_unit_interval(self, expr, z) -> None:
        out = eval_weight_expr(expr, z)
        assert 0 <= out <= 1

    @given(weight_exprs(), weights, weights)
    def test_evaluation_is_monotone(self, expr, z1, z2) -> None:
        lo, hi = min(z1, z2), max(z1, z2)
        assert eval_weight_expr(expr, lo) <= eval_weight_expr(expr, hi)

    @given(decreasing_weight_exprs(), weights)
    def test_arg_anchored_exprs_never_exceed_argument(self, expr, z) -> None:
        assert eval_weight_expr(expr, z) <= z

    def test_const_range_is_enforced(self) -> None:
        with pytest.raises(ValueError):
            Const(Fraction(7, 5))


class TestFreeVars:
    def test_case_analysis_tracks_binders_per_branch(self) -> None:
        term = CasesOf(Var("c"), "x", Var("x"), "y", Var("z"))
        assert free_vars(term) == {"c", "z"}

    def test_lambda_binds_its_parameter(self) -> None:
        assert free_vars(Lambda("x", Pair(Var("x"), Var("y")))) == {"y"}

    def test_split_binds_both_variables(self) -> None:
        term = SplitOf(Var("p"), "x", "y", Pair(Var("x"), Var("y")))
        assert free_vars(term) == {"p"}


class TestSubstitution:
    def test_plain_replacement(self) -> None:
        term = Apply(Var("f"), Var("x"))
        assert substitute(term, "x", Atom("a")) == Apply(Var("f"), Atom("a"))

    def test_shadowed_variable_is_untouched(self) -> None:
        term = Lambda("x", Var("x"))
        assert substitute(term, "x", Atom("a")) == term

    def test_capture_is_avoided_by_renaming(self) -> None:
        # (\y. (x, y))[x := y] must not capture the substituted y.
        term = Lambda("y", Pair(Var("x"), Var("y")))
        result = substitute(term, "x", Var("y"))
        expected = Lambda("w", Pair(Var("y"), Var("w")))
        assert alpha_equal(result, expected)
        assert to_db(result) == to_db(expected)
        assert free_vars(result) == {"y"}

    def test_simultaneous_substitution_swaps(self) -> None:
        term = Pair(Var("x"), Var("y"))
        swapped = substitute_many(term, {"x": Var("y"), "y": Var("x")})
        assert swapped == Pair(Var("y"), Var("x"))

    def test_split_binders_do_not_capture(self) -> None:
        # split(p, x. y. (x, (y, z)))[z := (x, y)] needs both binders renamed.
        term = SplitOf(Var("p"), "x", "y", Pair(Var("x"), Pair(Var("y"), Var("z"))))
        result = substitute(term, "z", Pair(Var("x"), Var("y")))
        expected = SplitOf(
            Var("p"), "u", "v", Pair(Var("u"), Pair(Var("v"), Pair(Var("x"), Var("y"))))
        )
        assert to_db(result) == to_db(expected)
        assert free_vars(result) == {"p", "x", "y"}

    @given(terms(), var_names, terms())
    @settings(max_examples=300)
    def test_free_variable_law(self, t, x, s) -> None:
        result = substitute(t, x, s)
        before = free_vars(t)
        if x in before:
            assert free_vars(result) == (before - {x}) | free_vars(s)
        else:
            assert to_db(result) == to_db(t)


class TestAlphaEquality:
    def test_bound_names_do_not_matter(self) -> None:
        assert alpha_equal(Lambda("x", Var("x")), Lambda("y", Var("y")))

    def test_free_names_do_matter(self) -> None:
        assert not alpha_equal(Lambda("x", Var("y")), Lambda("x", Var("z")))

    def test_free_and_bound_never_identified(self) -> None:
        assert not alpha_equal(Lambda("x", Var("x")), Lambda("x", Var("y")))

    def test_atom_provenance_is_part_of_identity(self) -> None:
        plain = Atom("w")
        sourced = Atom("w", Provenance(who="p"))
        assert not alpha_equal(plain, sourced)
        assert alpha_equal(sourced, Atom("w", Provenance(who="p")))

    def test_lambda_weight_transformers_compare(self) -> None:
        assert not alpha_equal(
            Lambda("x", Var("x"), Mul(Const(Fraction(1, 2)), ARG)),
            Lambda("x", Var("x")),
        )

    @given(terms())
    @settings(max_examples=300)
    def test_reflexive(self, t) -> None:
        assert alpha_equal(t, t)

    @given(terms(), terms())
    @settings(max_examples=300)
    def test_agrees_with_nameless_oracle(self, a, b) -> None:
        assert alpha_equal(a, b) == (to_db(a) == to_db(b))

    @given(terms(), terms())
    @settings(max_examples=300)
    def test_symmetric(self, a, b) -> None:
        assert alpha_equal(a, b) == alpha_equal(b, a)

    @given(terms())
    @settings(max_examples=200)
    def test_renamed_binders_stay_equal(self, t) -> None:
        renamed = _prime_binders(t)
        assert alpha_equal(t, renamed)
        assert to_db(t) == to_db(renamed)


def _prime_binders(term):
    """Structurally rename every binder to a fresh primed name."""
    if isinstance(term, (Atom, Var)):
        return term
    if isinstance(term, Pair):
        return Pair(_prime_binders(term.fst), _prime_binders(term.snd))
    if isinstance(term, TagL):
        return TagL(_prime_binders(term.value))
    if isinstance(term, TagR):
        return TagR(_prime_binders(term.value))
    if isinstance(term, Apply):
        return Apply(_prime_binders(term.fn), _prime_binders(term.arg))
    if isinstance(term, Lambda):
        body = _prime_binders(term.body)
        new = fresh_name(term.param + "'", free_vars(body))
        return Lambda(new, substitute(body, term.param, Var(new)), term.weight_fn)
    if isinstance(term, CasesOf):
        scrutinee = _prime_binders(term.scrutinee)
        lbody = _prime_binders(term.left_body)
        rbody = _prime_binders(term.right_body)
        nl = fresh_name(term.left_var + "'", free_vars(lbody))
        nr = fresh_name(term.right_var + "'", free_vars(rbody))
        return CasesOf(
            scrutinee,
            nl,
            substitute(lbody, term.left_var, Var(nl)),
            nr,
            substitute(rbody, term.right_var, Var(nr)),
        )
    if isinstance(term, SplitOf):
        scrutinee = _prime_binders(term.scrutinee)
        body = _prime_binders(term.body)
        avoid = free_vars(body) | {term.fst_var, term.snd_var}
        nf = fresh_name(term.fst_var + "'", avoid)
        ns = fresh_name(term.snd_var + "'", avoid | {nf})
        renamed = substitute_many(body, {term.fst_var: Var(nf), term.snd_var: Var(ns)})
        return SplitOf(scrutinee, nf, ns, renamed)
    raise TypeError(term)


class TestClaims:
    def test_negation_is_implication_to_falsity(self) -> None:
        from veracity.core import BOTTOM, Implies

        assert neg(Atomic("A")) == Implies(Atomic("A"), BOTTOM)

    def test_atoms_of_claim(self) -> None:
        from veracity.core import And, Implies, Or

        claim = Implies(Or(Atomic("A"), Atomic("B")), And(Atomic("C"), neg(Atomic("A"))))
        assert atoms_of_claim(claim) == {"A", "B", "C"}


class TestTrustRelations:
    def test_duplicate_edges_are_rejected(self) -> None:
        with pytest.raises(ValueError):
            TrustRelation(
                "T",
                (
                    TrustEdge("k", "l", Fraction(1, 2)),
                    TrustEdge("k", "l", Fraction(1, 4)),
                ),
            )

    def test_lookup(self) -> None:
        rel = TrustRelation("T", (TrustEdge("k", "l", Fraction(1, 2)),))
        assert rel.weight_between("k", "l") == Fraction(1, 2)
        assert rel.weight_between("l", "k") is None
        assert rel.actors() == {"k", "l"}
