"""Witness term evaluation.

Reduction is leftmost-outermost with full congruence: the outermost redex
fires first, and reduction continues under binders, so a normal form has no
redex anywhere.  Four contractions fire:

    (\\x.b) a                -->  b[x := a]
    cases(i(a), x.d, y.e)    -->  d[x := a]
    cases(j(b), x.d, y.e)    -->  e[y := b]
    split((a,b), x.y.d)      -->  d[x := a, y := b]

The split substitution is simultaneous.  Lambda weight annotations ride
along unchanged; they describe weight flow, not term flow.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .core import (
    Apply,
    CasesOf,
    Lambda,
    Pair,
    SplitOf,
    TagL,
    TagR,
    Term,
    alpha_equal,
    substitute,
    substitute_many,
)

DEFAULT_BUDGET = 1_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int) -> None:
        super().__init__(f"no normal form within {budget} reduction steps")
        self.budget = budget


def contract(term: Term) -> Optional[Term]:
    """Fire the redex at the root, if the root is one."""
    if isinstance(term, Apply) and isinstance(term.fn, Lambda):
        return substitute(term.fn.body, term.fn.param, term.arg)
    if isinstance(term, CasesOf):
        scrutinee = term.scrutinee
        if isinstance(scrutinee, TagL):
            return substitute(term.left_body, term.left_var, scrutinee.value)
        if isinstance(scrutinee, TagR):
            return substitute(term.right_body, term.right_var, scrutinee.value)
    if isinstance(term, SplitOf) and isinstance(term.scrutinee, Pair):
        return substitute_many(
            term.body,
            {term.fst_var: term.scrutinee.fst, term.snd_var: term.scrutinee.snd},
        )
    return None


def step(term: Term) -> Optional[Term]:
    """One leftmost-outermost reduction step, or None on a normal form."""
    reduced = contract(term)
    if reduced is not None:
        return reduced
    if isinstance(term, Pair):
        fst = step(term.fst)
        if fst is not None:
            return Pair(fst, term.snd)
        snd = step(term.snd)
        if snd is not None:
            return Pair(term.fst, snd)
        return None
    if isinstance(term, TagL):
        value = step(term.value)
        return None if value is None else TagL(value)
    if isinstance(term, TagR):
        value = step(term.value)
        return None if value is None else TagR(value)
    if isinstance(term, Lambda):
        body = step(term.body)
        if body is not None:
            return Lambda(term.param, body, term.weight_fn)
        return None
    if isinstance(term, Apply):
        fn = step(term.fn)
        if fn is not None:
            return Apply(fn, term.arg)
        arg = step(term.arg)
        if arg is not None:
            return Apply(term.fn, arg)
        return None
    if isinstance(term, CasesOf):
        scrutinee = step(term.scrutinee)
        if scrutinee is not None:
            return CasesOf(
                scrutinee, term.left_var, term.left_body, term.right_var, term.right_body
            )
        left = step(term.left_body)
        if left is not None:
            return CasesOf(
                term.scrutinee, term.left_var, left, term.right_var, term.right_body
            )
        right = step(term.right_body)
        if right is not None:
            return CasesOf(
                term.scrutinee, term.left_var, term.left_body, term.right_var, right
            )
        return None
    if isinstance(term, SplitOf):
        scrutinee = step(term.scrutinee)
        if scrutinee is not None:
            return SplitOf(scrutinee, term.fst_var, term.snd_var, term.body)
        body = step(term.body)
        if body is not None:
            return SplitOf(term.scrutinee, term.fst_var, term.snd_var, body)
        return None
    return None


def reductions(term: Term) -> Iterator[Term]:
    """Successive reducts of term, excluding term itself; may not terminate."""
    current = term
    while (nxt := step(current)) is not None:
        yield nxt
        current = nxt


def normalize(term: Term, budget: int = DEFAULT_BUDGET) -> Term:
    current = term
    for _ in range(budget):
        nxt = step(current)
        if nxt is None:
            return current
        current = nxt
    if step(current) is None:
        return current
    raise BudgetExceeded(budget)


def trace(term: Term, budget: int = DEFAULT_BUDGET) -> list[Term]:
    """The full reduction sequence [term, ..., normal form]."""
    sequence = [term]
    for nxt in reductions(term):
        if len(sequence) > budget:
            raise BudgetExceeded(budget)
        sequence.append(nxt)
    return sequence


def def_equal(a: Term, b: Term, budget: int = DEFAULT_BUDGET) -> bool:
    """Definitional equality: equal normal forms up to bound-variable names."""
    return alpha_equal(normalize(a, budget), normalize(b, budget))
