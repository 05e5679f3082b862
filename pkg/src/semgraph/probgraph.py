"""Shared probability graph: relation statistics per (head, tail) pair.

Each (head, tail) pair maps to the list of relations seen between the two
entities, and each relation carries the exact set of sample ids in which the
triple held. Probabilities are ratios of those set cardinalities, computed in
exact integer/rational arithmetic so that argmax decisions are never blurred
by float ties. Supports are kept as sorted id tuples for the wire format and
mirrored as bitmasks internally for fast intersection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import DatasetFormatError, UndefinedConditionalError, UnknownTripleError
from .kg import SampleDataset, Triple, Vocabulary


class RelationEntry(NamedTuple):
    relation: int
    support: tuple[int, ...]  # sorted sample ids, non-empty
    mask: int  # same set as a bitmask, bit (id - 1)

    @property
    def count(self) -> int:
        return len(self.support)


def _mask_of(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True)
class Quadruple:
    """All candidate relations between one (head, tail) pair, with their supports."""

    head: int
    tail: int
    relations: tuple[RelationEntry, ...]  # sorted by relation id, distinct
    union_mask: int
    total_count: int  # sum of per-relation support sizes

    @classmethod
    def build(cls, head: int, tail: int, entries: Iterable[RelationEntry]) -> "Quadruple":
        ordered = tuple(sorted(entries, key=lambda e: e.relation))
        union = 0
        total = 0
        for e in ordered:
            union |= e.mask
            total += e.count
        return cls(head, tail, ordered, union, total)

    def entry(self, relation: int) -> RelationEntry | None:
        for e in self.relations:
            if e.relation == relation:
                return e
        return None


@dataclass(frozen=True)
class ProbabilityGraph:
    """Immutable knowledge base aggregated from a sample dataset."""

    sample_count: int
    quadruples: tuple[Quadruple, ...]  # sorted by (head, tail)
    vocab: Vocabulary

    def __post_init__(self) -> None:
        index = {(q.head, q.tail): q for q in self.quadruples}
        object.__setattr__(self, "_index", index)

    def lookup(self, head: int, tail: int) -> Quadruple | None:
        return self._index.get((head, tail))

    def require(self, head: int, tail: int) -> Quadruple:
        quad = self.lookup(head, tail)
        if quad is None:
            h = self.vocab.entities.name(head)
            t = self.vocab.entities.name(tail)
            raise UnknownTripleError(f"pair ({h!r}, {t!r}) not in knowledge base")
        return quad

    def require_entry(self, triple: Triple) -> tuple[Quadruple, RelationEntry]:
        quad = self.require(triple.head, triple.tail)
        entry = quad.entry(triple.relation)
        if entry is None:
            h, r, t = self.vocab.triple_names(triple)
            raise UnknownTripleError(f"relation {r!r} not in knowledge base for pair ({h!r}, {t!r})")
        return quad, entry


def build_probability_graph(dataset: SampleDataset) -> ProbabilityGraph:
    """Aggregate a dataset into a probability graph.

    For every triple occurring anywhere in the dataset, the (head, tail)
    quadruple gets a relation entry whose support is exactly the set of sample
    ids containing that triple.
    """
    supports: dict[tuple[int, int], dict[int, set[int]]] = {}
    for sample in dataset.samples:
        sid = sample.source_id
        assert sid is not None
        for t in sample.triples:
            supports.setdefault((t.head, t.tail), {}).setdefault(t.relation, set()).add(sid)
    quadruples = []
    for (head, tail) in sorted(supports):
        entries = [
            RelationEntry(rel, tuple(sorted(ids)), _mask_of(ids))
            for rel, ids in supports[(head, tail)].items()
        ]
        quadruples.append(Quadruple.build(head, tail, entries))
    return ProbabilityGraph(dataset.sample_count, tuple(quadruples), dataset.vocab)


def _conditions_mask(pg: ProbabilityGraph, conditions: Iterable[Triple]) -> int | None:
    """Intersection mask of the conditions' supports; None when no conditions."""
    mask = None
    for cond in conditions:
        _, entry = pg.require_entry(cond)
        mask = entry.mask if mask is None else (mask & entry.mask)
    return mask


def marginal_probability(pg: ProbabilityGraph, head: int, relation: int, tail: int) -> Fraction:
    """Probability of (head, relation, tail) with no prior information.

    The denominator is the sum of support sizes over the pair's relations, so
    the per-pair distribution sums to exactly 1.
    """
    quad, entry = pg.require_entry(Triple(head, relation, tail))
    return Fraction(entry.count, quad.total_count)


def conditional_probability(
    pg: ProbabilityGraph, target: Triple, conditions: Iterable[Triple] = ()
) -> Fraction:
    """Probability of the target triple given that all condition triples hold.

    With an empty condition set this reduces to the marginal. The denominator
    counts samples compatible with the conditions that contain any relation
    for the target's pair; when it is empty the conditional is undefined.
    """
    quad, entry = pg.require_entry(target)
    cond_mask = _conditions_mask(pg, conditions)
    if cond_mask is None:
        return Fraction(entry.count, quad.total_count)
    denominator = (cond_mask & quad.union_mask).bit_count()
    if denominator == 0:
        h, r, t = pg.vocab.triple_names(target)
        raise UndefinedConditionalError(
            f"conditions are incompatible with every sample containing pair ({h!r}, {t!r})"
        )
    numerator = (cond_mask & entry.mask).bit_count()
    return Fraction(numerator, denominator)


def relation_distribution(
    pg: ProbabilityGraph, head: int, tail: int, conditions: Iterable[Triple] = ()
) -> list[tuple[int, Fraction | None]]:
    """Per-relation probabilities for one pair, ordered by relation id.

    Entries whose conditional is undefined are reported with None.
    """
    quad = pg.require(head, tail)
    cond_mask = _conditions_mask(pg, conditions)
    if cond_mask is None:
        return [(e.relation, Fraction(e.count, quad.total_count)) for e in quad.relations]
    denominator = (cond_mask & quad.union_mask).bit_count()
    if denominator == 0:
        return [(e.relation, None) for e in quad.relations]
    return [
        (e.relation, Fraction((cond_mask & e.mask).bit_count(), denominator))
        for e in quad.relations
    ]


def strict_argmax_relation(
    pg: ProbabilityGraph, head: int, tail: int, conditions: Iterable[Triple] = ()
) -> int | None:
    """Relation with strictly the highest (conditional) probability, or None.

    None means the maximum is tied or every entry is undefined under the
    conditions. Probabilities within one pair share a denominator, so the
    comparison reduces to exact integer counts.
    """
    quad = pg.require(head, tail)
    cond_mask = _conditions_mask(pg, conditions)
    if cond_mask is None:
        counts = [(e.count, e.relation) for e in quad.relations]
    else:
        if (cond_mask & quad.union_mask).bit_count() == 0:
            return None
        counts = [((cond_mask & e.mask).bit_count(), e.relation) for e in quad.relations]
    best_count, best_relation = counts[0]
    tied = False
    for count, relation in counts[1:]:
        if count > best_count:
            best_count, best_relation = count, relation
            tied = False
        elif count == best_count:
            tied = True
    if tied:
        return None
    return best_relation


def snapshot_obj(pg: ProbabilityGraph) -> dict:
    """Plain-dict snapshot: strings resolved, supports as sorted id lists.

    Quadruples and relations are ordered by name so equivalent graphs
    serialize identically no matter how their vocabularies were interned.
    """
    ent = pg.vocab.entities
    rel = pg.vocab.relations
    quadruples = [
        {
            "head": ent.name(q.head),
            "tail": ent.name(q.tail),
            "relations": sorted(
                (
                    {"relation": rel.name(e.relation), "support": list(e.support)}
                    for e in q.relations
                ),
                key=lambda r: r["relation"],
            ),
        }
        for q in pg.quadruples
    ]
    quadruples.sort(key=lambda q: (q["head"], q["tail"]))
    return {"sample_count": pg.sample_count, "quadruples": quadruples}


def snapshot_from_obj(obj: object, vocab: Vocabulary | None = None) -> ProbabilityGraph:
    """Rebuild a probability graph from its snapshot dict.

    Queries against the result match queries against the originally built
    graph; id assignments may differ but names never do.
    """
    if not isinstance(obj, dict) or "sample_count" not in obj or "quadruples" not in obj:
        raise DatasetFormatError("snapshot must contain 'sample_count' and 'quadruples'")
    sample_count = obj["sample_count"]
    if not isinstance(sample_count, int) or sample_count < 0:
        raise DatasetFormatError(f"sample_count must be a non-negative integer, got {sample_count!r}")
    vocab = vocab if vocab is not None else Vocabulary()
    quadruples = []
    seen_pairs: set[tuple[int, int]] = set()
    for raw_quad in obj["quadruples"]:
        head = vocab.entities.intern(raw_quad["head"])
        tail = vocab.entities.intern(raw_quad["tail"])
        if (head, tail) in seen_pairs:
            raise DatasetFormatError(
                f"duplicate quadruple for pair ({raw_quad['head']!r}, {raw_quad['tail']!r})"
            )
        seen_pairs.add((head, tail))
        entries = []
        seen_relations: set[int] = set()
        for raw_rel in raw_quad["relations"]:
            relation = vocab.relations.intern(raw_rel["relation"])
            if relation in seen_relations:
                raise DatasetFormatError(f"duplicate relation {raw_rel['relation']!r} in quadruple")
            seen_relations.add(relation)
            support = sorted(set(raw_rel["support"]))
            if not support:
                raise DatasetFormatError(f"empty support for relation {raw_rel['relation']!r}")
            if support[0] < 1 or support[-1] > sample_count:
                raise DatasetFormatError(
                    f"support ids for relation {raw_rel['relation']!r} outside 1..{sample_count}"
                )
            entries.append(RelationEntry(relation, tuple(support), _mask_of(support)))
        if not entries:
            raise DatasetFormatError("quadruple with no relations")
        quadruples.append(Quadruple.build(head, tail, entries))
    quadruples.sort(key=lambda q: (q.head, q.tail))
    return ProbabilityGraph(sample_count, tuple(quadruples), vocab)


def save_snapshot(pg: ProbabilityGraph) -> str:
    return json.dumps(snapshot_obj(pg), indent=2) + "\n"


def load_snapshot(data: str | bytes, vocab: Vocabulary | None = None) -> ProbabilityGraph:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"invalid JSON: {exc}") from exc
    return snapshot_from_obj(obj, vocab)
