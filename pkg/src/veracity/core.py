"""Core data types for the veracity logic.

Claims are propositional shapes (atoms, falsity, conjunction, disjunction,
implication); witness terms are the evidence language attached to them.
Judgements tie a witness, an actor, and a trust weight to a claim, and
sequents put judgements under hypotheses.  Everything here is an immutable
value; the kernel, evaluator, and semantics modules build on these types
without ever mutating them.

Weights are exact rationals throughout.  Floats are rejected at the door:
a spelled-out decimal like "0.4096" converts exactly, a float does not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Weight = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_weight(value: Union[int, str, Fraction]) -> Weight:
    """Convert to an exact weight in [0, 1].

    Accepts ints, Fractions, and numeric strings ("0.5", "1/3").  Floats are
    refused because they would smuggle in binary rounding error.
    """
    if isinstance(value, float):
        raise TypeError("weights must be exact: pass a Fraction or a string, not a float")
    w = Fraction(value)
    if w < 0 or w > 1:
        raise ValueError(f"weight {w} outside [0, 1]")
    return w


def format_weight(w: Weight) -> str:
    """Render a weight exactly: as a decimal when one exists, else p/q."""
    if w.denominator == 1:
        return f"{w.numerator}.0"
    den = w.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{w.numerator}/{w.denominator}"
    digits = max(twos, fives)
    scaled = w.numerator * 10**digits // w.denominator
    text = str(scaled).rjust(digits, "0")
    whole, frac = text[:-digits] or "0", text[-digits:]
    return f"{whole}.{frac}"


# ---------------------------------------------------------------------------
# Weight transformers
#
# The restricted expression language for how an implication transforms the
# weight of its argument: constants, the argument itself, products, and
# minima.  Every expression is total and stays inside [0, 1].


@dataclass(frozen=True)
class Const:
    value: Weight

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", as_weight(self.value))


@dataclass(frozen=True)
class Arg:
    pass


@dataclass(frozen=True)
class Mul:
    left: "WeightExpr"
    right: "WeightExpr"


@dataclass(frozen=True)
class Min:
    left: "WeightExpr"
    right: "WeightExpr"


WeightExpr = Union[Const, Arg, Mul, Min]

ARG = Arg()
IDENTITY = ARG


def eval_weight_expr(expr: WeightExpr, z: Weight) -> Weight:
    """Evaluate a weight transformer at argument weight z."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Arg):
        return z
    if isinstance(expr, Mul):
        return eval_weight_expr(expr.left, z) * eval_weight_expr(expr.right, z)
    if isinstance(expr, Min):
        return min(eval_weight_expr(expr.left, z), eval_weight_expr(expr.right, z))
    raise TypeError(f"not a weight expression: {expr!r}")


# ---------------------------------------------------------------------------
# Claims


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atomic:
    name: str


@dataclass(frozen=True)
class And:
    left: "Claim"
    right: "Claim"


@dataclass(frozen=True)
class Or:
    left: "Claim"
    right: "Claim"


@dataclass(frozen=True)
class Implies:
    antecedent: "Claim"
    consequent: "Claim"


Claim = Union[Bottom, Atomic, And, Or, Implies]

BOTTOM = Bottom()


def neg(claim: Claim) -> Implies:
    """Negation is sugar: ~A is A -> falsity."""
    return Implies(claim, BOTTOM)


def is_neg(claim: Claim) -> bool:
    return isinstance(claim, Implies) and isinstance(claim.consequent, Bottom)


def atoms_of_claim(claim: Claim) -> frozenset[str]:
    if isinstance(claim, Bottom):
        return frozenset()
    if isinstance(claim, Atomic):
        return frozenset((claim.name,))
    if isinstance(claim, (And, Or)):
        return atoms_of_claim(claim.left) | atoms_of_claim(claim.right)
    if isinstance(claim, Implies):
        return atoms_of_claim(claim.antecedent) | atoms_of_claim(claim.consequent)
    raise TypeError(f"not a claim: {claim!r}")


def subclaims(claim: Claim) -> frozenset[Claim]:
    """The claim together with everything under it."""
    out = {claim}
    if isinstance(claim, (And, Or)):
        out |= subclaims(claim.left) | subclaims(claim.right)
    elif isinstance(claim, Implies):
        out |= subclaims(claim.antecedent) | subclaims(claim.consequent)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Claim families
#
# A family is how an elimination rule names its result claim.  The logic
# supports exactly two shapes: a constant family (the same claim whatever the
# scrutinee is) and a two-tag family keyed by which injection built the
# scrutinee.  Claims cannot mention witnesses, so the tag family carries one
# claim per tag and nothing more.


@dataclass(frozen=True)
class ConstantFamily:
    claim: Claim


@dataclass(frozen=True)
class TagFamily:
    on_left: Claim
    on_right: Claim


ClaimFamily = Union[ConstantFamily, TagFamily]


def family_at(family: ClaimFamily, scrutinee: "Term") -> Optional[Claim]:
    """Apply a family to a scrutinee witness.

    A tag family resolves only when the scrutinee is literally tagged;
    None signals an unresolvable application for the caller to report.
    """
    if isinstance(family, ConstantFamily):
        return family.claim
    if isinstance(scrutinee, TagL):
        return family.on_left
    if isinstance(scrutinee, TagR):
        return family.on_right
    return None


# ---------------------------------------------------------------------------
# Witness terms


@dataclass(frozen=True)
class Provenance:
    who: Optional[str] = None
    where: Optional[str] = None
    when: Optional[str] = None
    how: Optional[str] = None


@dataclass(frozen=True)
class Atom:
    name: str
    provenance: Optional[Provenance] = None


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pair:
    fst: "Term"
    snd: "Term"


@dataclass(frozen=True)
class TagL:
    value: "Term"


@dataclass(frozen=True)
class TagR:
    value: "Term"


@dataclass(frozen=True)
class Lambda:
    param: str
    body: "Term"
    weight_fn: WeightExpr = ARG


@dataclass(frozen=True)
class Apply:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class CasesOf:
    scrutinee: "Term"
    left_var: str
    left_body: "Term"
    right_var: str
    right_body: "Term"


@dataclass(frozen=True)
class SplitOf:
    scrutinee: "Term"
    fst_var: str
    snd_var: str
    body: "Term"


Term = Union[Atom, Var, Pair, TagL, TagR, Lambda, Apply, CasesOf, SplitOf]


def free_vars(term: Term) -> frozenset[str]:
    if isinstance(term, Atom):
        return frozenset()
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Pair):
        return free_vars(term.fst) | free_vars(term.snd)
    if isinstance(term, (TagL, TagR)):
        return free_vars(term.value)
    if isinstance(term, Lambda):
        return free_vars(term.body) - {term.param}
    if isinstance(term, Apply):
        return free_vars(term.fn) | free_vars(term.arg)
    if isinstance(term, CasesOf):
        return (
            free_vars(term.scrutinee)
            | (free_vars(term.left_body) - {term.left_var})
            | (free_vars(term.right_body) - {term.right_var})
        )
    if isinstance(term, SplitOf):
        return free_vars(term.scrutinee) | (
            free_vars(term.body) - {term.fst_var, term.snd_var}
        )
    raise TypeError(f"not a term: {term!r}")


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    taken = set(avoid)
    name = base
    while name in taken:
        name += "'"
    return name


def substitute(term: Term, name: str, replacement: Term) -> Term:
    """Replace free occurrences of one variable, avoiding capture."""
    return substitute_many(term, {name: replacement})


def substitute_many(term: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution.

    Simultaneity matters: splitting a pair binds two variables at once, and
    substituting them one after the other would let the first replacement's
    free variables collide with the second binder.
    """
    if not mapping:
        return term
    if isinstance(term, Atom):
        return term
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, Pair):
        return Pair(substitute_many(term.fst, mapping), substitute_many(term.snd, mapping))
    if isinstance(term, TagL):
        return TagL(substitute_many(term.value, mapping))
    if isinstance(term, TagR):
        return TagR(substitute_many(term.value, mapping))
    if isinstance(term, Apply):
        return Apply(substitute_many(term.fn, mapping), substitute_many(term.arg, mapping))
    if isinstance(term, Lambda):
        (param,), body = _freshen((term.param,), term.body, mapping)
        return Lambda(param, substitute_many(body, _narrow(mapping, (term.param,), (param,))), term.weight_fn)
    if isinstance(term, CasesOf):
        scrutinee = substitute_many(term.scrutinee, mapping)
        (lv,), lbody = _freshen((term.left_var,), term.left_body, mapping)
        (rv,), rbody = _freshen((term.right_var,), term.right_body, mapping)
        return CasesOf(
            scrutinee,
            lv,
            substitute_many(lbody, _narrow(mapping, (term.left_var,), (lv,))),
            rv,
            substitute_many(rbody, _narrow(mapping, (term.right_var,), (rv,))),
        )
    if isinstance(term, SplitOf):
        scrutinee = substitute_many(term.scrutinee, mapping)
        binders = (term.fst_var, term.snd_var)
        (fv, sv), body = _freshen(binders, term.body, mapping)
        return SplitOf(scrutinee, fv, sv, substitute_many(body, _narrow(mapping, binders, (fv, sv))))
    raise TypeError(f"not a term: {term!r}")


def _freshen(
    binders: tuple[str, ...], body: Term, mapping: Mapping[str, Term]
) -> tuple[tuple[str, ...], Term]:
    """Rename binders that would capture free variables of the replacements."""
    live = {n: t for n, t in mapping.items() if n not in binders and n in free_vars(body)}
    danger = set()
    for t in live.values():
        danger |= free_vars(t)
    renamed = list(binders)
    current = body
    for i, b in enumerate(binders):
        if b in danger:
            avoid = danger | free_vars(current) | set(live) | set(renamed)
            nb = fresh_name(b, avoid)
            current = substitute_many(current, {b: Var(nb)})
            renamed[i] = nb
    return tuple(renamed), current


def _narrow(
    mapping: Mapping[str, Term], old: tuple[str, ...], new: tuple[str, ...]
) -> dict[str, Term]:
    """Drop entries shadowed by binders (after any renaming)."""
    out = {n: t for n, t in mapping.items() if n not in old}
    for o, n in zip(old, new):
        out.pop(n, None)
    return out


def alpha_equal(a: Term, b: Term) -> bool:
    """Equality up to consistent renaming of bound variables.

    Free variables and atoms compare by name (atoms also by provenance);
    weight transformers on lambdas compare structurally.
    """
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Atom):
        return a == b
    if isinstance(a, Var):
        la, lb = env_a.get(a.name), env_b.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, Pair):
        return _alpha(a.fst, b.fst, env_a, env_b, depth) and _alpha(a.snd, b.snd, env_a, env_b, depth)
    if isinstance(a, (TagL, TagR)):
        return _alpha(a.value, b.value, env_a, env_b, depth)
    if isinstance(a, Apply):
        return _alpha(a.fn, b.fn, env_a, env_b, depth) and _alpha(a.arg, b.arg, env_a, env_b, depth)
    if isinstance(a, Lambda):
        if a.weight_fn != b.weight_fn:
            return False
        return _alpha(
            a.body, b.body, {**env_a, a.param: depth}, {**env_b, b.param: depth}, depth + 1
        )
    if isinstance(a, CasesOf):
        return (
            _alpha(a.scrutinee, b.scrutinee, env_a, env_b, depth)
            and _alpha(
                a.left_body, b.left_body,
                {**env_a, a.left_var: depth}, {**env_b, b.left_var: depth}, depth + 1,
            )
            and _alpha(
                a.right_body, b.right_body,
                {**env_a, a.right_var: depth}, {**env_b, b.right_var: depth}, depth + 1,
            )
        )
    if isinstance(a, SplitOf):
        return _alpha(a.scrutinee, b.scrutinee, env_a, env_b, depth) and _alpha(
            a.body, b.body,
            {**env_a, a.fst_var: depth, a.snd_var: depth + 1},
            {**env_b, b.fst_var: depth, b.snd_var: depth + 1},
            depth + 2,
        )
    raise TypeError(f"not a term: {a!r}")


# ---------------------------------------------------------------------------
# Judgements, sequents, trust relations


@dataclass(frozen=True)
class Judgement:
    witness: Term
    actor: str
    weight: Weight
    claim: Claim

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", as_weight(self.weight))


@dataclass(frozen=True)
class Claimhood:
    """The judgement form that says a claim is a well-formed veracity claim."""

    claim: Claim


@dataclass(frozen=True)
class Hypothesis:
    var: str
    actor: str
    weight: Weight
    claim: Claim

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", as_weight(self.weight))


@dataclass(frozen=True)
class Sequent:
    hypotheses: tuple[Hypothesis, ...]
    conclusion: Judgement


@dataclass(frozen=True)
class TrustEdge:
    source: str
    target: str
    weight: Weight

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", as_weight(self.weight))


@dataclass(frozen=True)
class TrustRelation:
    name: str
    edges: tuple[TrustEdge, ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for e in self.edges:
            key = (e.source, e.target)
            if key in seen:
                raise ValueError(f"duplicate trust edge {e.source} -> {e.target} in {self.name}")
            seen.add(key)

    def weight_between(self, source: str, target: str) -> Optional[Weight]:
        for e in self.edges:
            if e.source == source and e.target == target:
                return e.weight
        return None

    def actors(self) -> frozenset[str]:
        out = set()
        for e in self.edges:
            out.add(e.source)
            out.add(e.target)
        return frozenset(out)


# ---------------------------------------------------------------------------
# Proof trees
#
# A proof is replayed, never searched for: each node names the rule it uses,
# carries the rule's own arguments, and may state the sequent it believes it
# derives so the checker can cross-check.


class Rule(str, Enum):
    ASSUME = "assume"
    CLAIM = "claim"
    BOTTOM_ELIM = "bottomElim"
    OR_INTRO_L = "orIntroL"
    OR_INTRO_R = "orIntroR"
    OR_ELIM = "orElim"
    AND_INTRO = "andIntro"
    AND_ELIM = "andElim"
    IMP_INTRO = "impIntro"
    IMP_ELIM = "impElim"
    TRUST = "trust"


@dataclass(frozen=True)
class AssumeArgs:
    var: str
    claim: Claim
    actor: Optional[str] = None
    context: tuple[Hypothesis, ...] = ()


@dataclass(frozen=True)
class BottomElimArgs:
    target: Claim


@dataclass(frozen=True)
class OrIntroArgs:
    other: Claim


@dataclass(frozen=True)
class OrElimArgs:
    family: ClaimFamily
    left_var: str
    right_var: str


@dataclass(frozen=True)
class AndElimArgs:
    family: ConstantFamily
    fst_var: str
    snd_var: str


@dataclass(frozen=True)
class ImpIntroArgs:
    var: str
    weight_fn: WeightExpr = ARG


@dataclass(frozen=True)
class TrustArgs:
    relation: str
    source: str
    target: str


RuleArgs = Union[
    AssumeArgs, BottomElimArgs, OrIntroArgs, OrElimArgs, AndElimArgs, ImpIntroArgs, TrustArgs
]


@dataclass(frozen=True)
class ProofTree:
    rule: Rule
    premises: tuple["ProofTree", ...] = ()
    args: Optional[RuleArgs] = None
    stated: Optional[Sequent] = None
    loc: Optional[tuple[int, int]] = field(default=None, compare=False)
