"""Weighted-digraph analysis of trust relations.

A trust relation is read as a digraph whose edge weights live in [0, 1].
Trust composes along a path by multiplying weights, and the best trust
between two actors maximizes that product over all paths. Self-trust is
implicit at weight 1, so best trust from an actor to itself never needs
an explicit loop. Max-product search runs as a priority-driven
relaxation: float logs order the queue, but every comparison and every
result uses exact rationals.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import count
from typing import Iterable, Optional

from .core import TrustRelation, Weight


@dataclass(frozen=True)
class TrustGraph:
    """A trust relation together with its node set."""

    relation: TrustRelation
    actors: frozenset[str]

    @classmethod
    def from_relation(
        cls, relation: TrustRelation, extra_actors: Iterable[str] = ()
    ) -> "TrustGraph":
        return cls(relation, relation.actors() | frozenset(extra_actors))


def best_trust_path(
    graph: TrustGraph, source: str, target: str
) -> Optional[tuple[tuple[str, ...], Weight]]:
    """The maximum-product trust path from source to target, with its weight.

    Returns None when the target is unreachable. An actor reaches itself
    at weight 1 along the empty path.
    """
    if source == target:
        return (source,), Fraction(1)

    outgoing: dict[str, list] = {}
    for edge in graph.relation.edges:
        outgoing.setdefault(edge.source, []).append(edge)

    best: dict[str, Fraction] = {source: Fraction(1)}
    parent: dict[str, str] = {}
    tiebreak = count()
    # Priorities approximate -log(product); stale entries are skipped and
    # improvements re-queued, so float rounding cannot affect the result.
    heap = [(0.0, next(tiebreak), source)]
    while heap:
        _, _, node = heapq.heappop(heap)
        weight = best[node]
        for edge in outgoing.get(node, ()):
            candidate = weight * edge.weight
            known = best.get(edge.target)
            if known is not None and candidate <= known:
                continue
            best[edge.target] = candidate
            parent[edge.target] = node
            priority = math.inf if candidate == 0 else -math.log(candidate)
            heapq.heappush(heap, (priority, next(tiebreak), edge.target))

    if target not in best:
        return None
    path = [target]
    while path[-1] != source:
        path.append(parent[path[-1]])
    return tuple(reversed(path)), best[target]


def best_trust(graph: TrustGraph, source: str, target: str) -> Optional[Weight]:
    """The maximum path product from source to target, if any path exists."""
    found = best_trust_path(graph, source, target)
    return None if found is None else found[1]


def path_weights(graph: TrustGraph, path: tuple[str, ...]) -> tuple[Weight, ...]:
    """The edge weights along a path of actors."""
    out = []
    for source, target in zip(path, path[1:]):
        weight = graph.relation.weight_between(source, target)
        if weight is None:
            raise ValueError(f"no edge {source} -> {target} in {graph.relation.name}")
        out.append(weight)
    return tuple(out)


def chain_weight(weights: Iterable[Weight]) -> Weight:
    """The product of a chain of trust weights; an empty chain is full trust."""
    return reduce(lambda acc, w: acc * w, weights, Fraction(1))


@dataclass(frozen=True)
class ChainStarComparison:
    """Chained trust versus routing everything through a shared ledger."""

    star_at_least_chain: bool
    chain: Weight
    star: Weight


def compare_chain_star(
    chain_weights: Iterable[Weight], star_ledger_trust: Weight
) -> ChainStarComparison:
    """Compare a trust chain against a star whose spokes carry full trust.

    The star's value is the full spoke trust (1) times the trust placed in
    the ledger, so the star wins exactly when the ledger trust is at least
    the chain product.
    """
    chain = chain_weight(chain_weights)
    star = Fraction(1) * star_ledger_trust
    return ChainStarComparison(star >= chain, chain, star)


def compare_relations(
    chain: TrustRelation, star: TrustRelation, source: str, target: str
) -> Optional[ChainStarComparison]:
    """Compare two relations end to end: the best chain path in one against
    the best star value in the other. None when either side is unreachable."""
    found = best_trust_path(TrustGraph.from_relation(chain), source, target)
    star_value = best_trust(TrustGraph.from_relation(star), source, target)
    if found is None or star_value is None:
        return None
    path, _ = found
    return compare_chain_star(
        path_weights(TrustGraph.from_relation(chain), path), star_value
    )


@dataclass(frozen=True)
class RelationProperties:
    """Structural facts about a trust relation worth surfacing in reports."""

    reflexive_complete: bool
    symmetric_pairs: tuple[tuple[str, str], ...]
    longest_chain_decay: Optional[tuple[tuple[str, ...], Weight]]


def relation_properties(graph: TrustGraph) -> RelationProperties:
    """Report self-trust coverage, symmetric edges, and chain decay.

    Symmetric edge pairs are legal and merely informational. The decay
    witness is the maximal simple path with the smallest weight product:
    the strongest evidence that longer chains erode trust.
    """
    reflexive = all(
        best_trust(graph, actor, actor) == 1 for actor in graph.actors
    )

    seen = {(e.source, e.target) for e in graph.relation.edges}
    symmetric = sorted(
        (min(s, t), max(s, t)) for s, t in seen if (t, s) in seen and s < t
    )

    decay: Optional[tuple[tuple[str, ...], Weight]] = None
    for start in sorted(graph.actors):
        for path, weight in _maximal_paths(graph, (start,), Fraction(1)):
            if decay is None or (weight, path) < (decay[1], decay[0]):
                decay = (path, weight)
    return RelationProperties(reflexive, tuple(symmetric), decay)


def _maximal_paths(graph: TrustGraph, path: tuple[str, ...], weight: Fraction):
    extensions = [
        edge
        for edge in graph.relation.edges
        if edge.source == path[-1] and edge.target not in path
    ]
    if not extensions:
        yield path, weight
        return
    for edge in extensions:
        yield from _maximal_paths(graph, path + (edge.target,), weight * edge.weight)
