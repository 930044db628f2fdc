"""Nameless-form oracle for alpha-equivalence tests.

Converts witness terms to a de Bruijn style tuple encoding, written
independently of veracity.core.alpha_equal so the two can check each other.
Binders here carry no names at all; bound variables become indices counted
from the innermost binder outwards, free variables keep their names.
"""

from __future__ import annotations

from veracity.core import (
    Apply,
    Atom,
    CasesOf,
    Lambda,
    Pair,
    SplitOf,
    TagL,
    TagR,
    Term,
    Var,
)


def to_db(term: Term, env: tuple[str, ...] = ()) -> object:
    if isinstance(term, Atom):
        return ("atom", term.name, term.provenance)
    if isinstance(term, Var):
        for i, name in enumerate(env):
            if name == term.name:
                return ("bound", i)
        return ("free", term.name)
    if isinstance(term, Pair):
        return ("pair", to_db(term.fst, env), to_db(term.snd, env))
    if isinstance(term, TagL):
        return ("inl", to_db(term.value, env))
    if isinstance(term, TagR):
        return ("inr", to_db(term.value, env))
    if isinstance(term, Lambda):
        return ("lam", term.weight_fn, to_db(term.body, (term.param,) + env))
    if isinstance(term, Apply):
        return ("app", to_db(term.fn, env), to_db(term.arg, env))
    if isinstance(term, CasesOf):
        return (
            "cases",
            to_db(term.scrutinee, env),
            to_db(term.left_body, (term.left_var,) + env),
            to_db(term.right_body, (term.right_var,) + env),
        )
    if isinstance(term, SplitOf):
        return (
            "split",
            to_db(term.scrutinee, env),
            to_db(term.body, (term.snd_var, term.fst_var) + env),
        )
    raise TypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# A reduction oracle on the nameless encoding.  Substitution here is index
# arithmetic (shift and replace), a wholly different discipline from the
# name-and-rename substitution in veracity.core, so agreement between
# evaluator.step and db_step checks both.


def db_shift(t: object, by: int, cutoff: int = 0) -> object:
    tag = t[0]
    if tag == "bound":
        return ("bound", t[1] + by) if t[1] >= cutoff else t
    if tag in ("atom", "free"):
        return t
    if tag == "pair":
        return ("pair", db_shift(t[1], by, cutoff), db_shift(t[2], by, cutoff))
    if tag in ("inl", "inr"):
        return (tag, db_shift(t[1], by, cutoff))
    if tag == "lam":
        return ("lam", t[1], db_shift(t[2], by, cutoff + 1))
    if tag == "app":
        return ("app", db_shift(t[1], by, cutoff), db_shift(t[2], by, cutoff))
    if tag == "cases":
        return (
            "cases",
            db_shift(t[1], by, cutoff),
            db_shift(t[2], by, cutoff + 1),
            db_shift(t[3], by, cutoff + 1),
        )
    if tag == "split":
        return ("split", db_shift(t[1], by, cutoff), db_shift(t[2], by, cutoff + 2))
    raise TypeError(f"bad encoding: {t!r}")


def db_msubst(t: object, repl: dict, removed: int, depth: int = 0) -> object:
    """Replace indices depth+k (k in repl) and close the removed binders."""
    tag = t[0]
    if tag == "bound":
        k = t[1] - depth
        if k < 0:
            return t
        if k in repl:
            return db_shift(repl[k], depth)
        return ("bound", t[1] - removed)
    if tag in ("atom", "free"):
        return t
    if tag == "pair":
        return (
            "pair",
            db_msubst(t[1], repl, removed, depth),
            db_msubst(t[2], repl, removed, depth),
        )
    if tag in ("inl", "inr"):
        return (tag, db_msubst(t[1], repl, removed, depth))
    if tag == "lam":
        return ("lam", t[1], db_msubst(t[2], repl, removed, depth + 1))
    if tag == "app":
        return (
            "app",
            db_msubst(t[1], repl, removed, depth),
            db_msubst(t[2], repl, removed, depth),
        )
    if tag == "cases":
        return (
            "cases",
            db_msubst(t[1], repl, removed, depth),
            db_msubst(t[2], repl, removed, depth + 1),
            db_msubst(t[3], repl, removed, depth + 1),
        )
    if tag == "split":
        return (
            "split",
            db_msubst(t[1], repl, removed, depth),
            db_msubst(t[2], repl, removed, depth + 2),
        )
    raise TypeError(f"bad encoding: {t!r}")


def db_contract(t: object) -> object:
    tag = t[0]
    if tag == "app" and t[1][0] == "lam":
        return db_msubst(t[1][2], {0: t[2]}, 1)
    if tag == "cases" and t[1][0] == "inl":
        return db_msubst(t[2], {0: t[1][1]}, 1)
    if tag == "cases" and t[1][0] == "inr":
        return db_msubst(t[3], {0: t[1][1]}, 1)
    if tag == "split" and t[1][0] == "pair":
        # In the split body, index 0 is the second component's binder.
        return db_msubst(t[2], {0: t[1][2], 1: t[1][1]}, 2)
    return None


def db_step(t: object) -> object:
    reduced = db_contract(t)
    if reduced is not None:
        return reduced
    tag = t[0]
    if tag == "pair":
        fst = db_step(t[1])
        if fst is not None:
            return ("pair", fst, t[2])
        snd = db_step(t[2])
        return None if snd is None else ("pair", t[1], snd)
    if tag in ("inl", "inr"):
        value = db_step(t[1])
        return None if value is None else (tag, value)
    if tag == "lam":
        body = db_step(t[2])
        return None if body is None else ("lam", t[1], body)
    if tag == "app":
        fn = db_step(t[1])
        if fn is not None:
            return ("app", fn, t[2])
        arg = db_step(t[2])
        return None if arg is None else ("app", t[1], arg)
    if tag == "cases":
        scrutinee = db_step(t[1])
        if scrutinee is not None:
            return ("cases", scrutinee, t[2], t[3])
        left = db_step(t[2])
        if left is not None:
            return ("cases", t[1], left, t[3])
        right = db_step(t[3])
        return None if right is None else ("cases", t[1], t[2], right)
    if tag == "split":
        scrutinee = db_step(t[1])
        if scrutinee is not None:
            return ("split", scrutinee, t[2])
        body = db_step(t[2])
        return None if body is None else ("split", t[1], body)
    return None
