"""Triples, knowledge graphs, and sample datasets with string interning.

Entity and relation names are interned into dense integer ids so that graph
algorithms work on ints; the original strings survive in the vocabulary and
are restored on serialization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import DanglingIdError, DatasetFormatError


class Triple(NamedTuple):
    head: int
    relation: int
    tail: int


class InternTable:
    """Injective string -> dense id mapping (ids are 0..len-1, in first-seen order)."""

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._names: list[str] = []

    def intern(self, name: str) -> int:
        existing = self._ids.get(name)
        if existing is not None:
            return existing
        new_id = len(self._names)
        self._ids[name] = new_id
        self._names.append(name)
        return new_id

    def name(self, idx: int) -> str:
        if not 0 <= idx < len(self._names):
            raise DanglingIdError(f"id {idx} not in intern table of size {len(self._names)}")
        return self._names[idx]

    def get(self, name: str) -> int | None:
        return self._ids.get(name)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids


@dataclass
class Vocabulary:
    """Paired intern tables for entity and relation names.

    Append-only: interning new names never changes existing assignments, so a
    vocabulary may be shared between a knowledge base and later messages.
    """

    entities: InternTable = field(default_factory=InternTable)
    relations: InternTable = field(default_factory=InternTable)

    def intern_triple(self, head: str, relation: str, tail: str) -> Triple:
        return Triple(
            self.entities.intern(head),
            self.relations.intern(relation),
            self.entities.intern(tail),
        )

    def triple_names(self, t: Triple) -> tuple[str, str, str]:
        return (
            self.entities.name(t.head),
            self.relations.name(t.relation),
            self.entities.name(t.tail),
        )


@dataclass(frozen=True)
class KnowledgeGraph:
    """An ordered, duplicate-free list of triples extracted from one message."""

    triples: tuple[Triple, ...]
    source_id: int | None = None

    @classmethod
    def from_triples(cls, triples: Iterable[Triple], source_id: int | None = None) -> "KnowledgeGraph":
        """Build a graph preserving input order; exact duplicates are dropped."""
        seen: set[Triple] = set()
        kept: list[Triple] = []
        for t in triples:
            if t not in seen:
                seen.add(t)
                kept.append(t)
        return cls(tuple(kept), source_id)

    def __len__(self) -> int:
        return len(self.triples)


@dataclass(frozen=True)
class SampleDataset:
    """Ordered collection of knowledge graphs whose source ids are exactly 1..N."""

    samples: tuple[KnowledgeGraph, ...]
    vocab: Vocabulary

    @property
    def sample_count(self) -> int:
        return len(self.samples)


def _decode_triple(raw: object, line_number: int | None) -> tuple[str, str, str]:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 3
        or not all(isinstance(part, str) for part in raw)
    ):
        raise DatasetFormatError(f"triple must be a [head, relation, tail] string array, got {raw!r}", line_number)
    return raw[0], raw[1], raw[2]


def graph_from_obj(
    obj: object,
    vocab: Vocabulary,
    source_id: int | None = None,
    line_number: int | None = None,
) -> KnowledgeGraph:
    """Build a graph from the decoded `{"triples": [[h, r, t], ...]}` shape."""
    if not isinstance(obj, dict) or "triples" not in obj:
        raise DatasetFormatError("expected an object with a 'triples' array", line_number)
    raw_triples = obj["triples"]
    if not isinstance(raw_triples, list):
        raise DatasetFormatError("'triples' must be an array", line_number)
    triples = [vocab.intern_triple(*_decode_triple(t, line_number)) for t in raw_triples]
    return KnowledgeGraph.from_triples(triples, source_id)


def graph_to_obj(graph: KnowledgeGraph, vocab: Vocabulary) -> dict:
    return {"triples": [list(vocab.triple_names(t)) for t in graph.triples]}


def parse_graph(data: str | bytes, vocab: Vocabulary) -> KnowledgeGraph:
    """Parse a single knowledge-graph JSON document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"invalid JSON: {exc}") from exc
    return graph_from_obj(obj, vocab)


def serialize_graph(graph: KnowledgeGraph, vocab: Vocabulary) -> str:
    """Serialize a graph so that parse_graph restores the same triples in order."""
    return json.dumps(graph_to_obj(graph, vocab), indent=2) + "\n"


def dataset_from_objs(
    objs: Iterable[object],
    vocab: Vocabulary | None = None,
    line_numbers: Iterable[int | None] | None = None,
) -> SampleDataset:
    """Assemble a dataset from decoded sample objects.

    Sample ids must be unique and form exactly 1..N; input order is preserved.
    """
    vocab = vocab if vocab is not None else Vocabulary()
    samples: list[KnowledgeGraph] = []
    seen_ids: set[int] = set()
    numbered = zip(objs, line_numbers) if line_numbers is not None else ((o, None) for o in objs)
    for obj, line_number in numbered:
        if not isinstance(obj, dict) or "sample_id" not in obj:
            raise DatasetFormatError("expected an object with 'sample_id' and 'triples'", line_number)
        sample_id = obj["sample_id"]
        if not isinstance(sample_id, int) or isinstance(sample_id, bool) or sample_id < 1:
            raise DatasetFormatError(f"sample_id must be a positive integer, got {sample_id!r}", line_number)
        if sample_id in seen_ids:
            raise DatasetFormatError(f"duplicate sample_id {sample_id}", line_number)
        seen_ids.add(sample_id)
        samples.append(graph_from_obj(obj, vocab, source_id=sample_id, line_number=line_number))
    if seen_ids and seen_ids != set(range(1, len(samples) + 1)):
        missing = sorted(set(range(1, len(samples) + 1)) - seen_ids)
        raise DatasetFormatError(
            f"sample ids must be contiguous 1..{len(samples)}; missing {missing}, got {sorted(seen_ids)}"
        )
    return SampleDataset(tuple(samples), vocab)


def parse_dataset(data: str | bytes, vocab: Vocabulary | None = None) -> SampleDataset:
    """Parse a JSON-Lines dataset: one `{"sample_id": n, "triples": [...]}` per line.

    An empty stream yields an empty dataset.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    objs: list[object] = []
    numbers: list[int | None] = []
    for line_number, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            objs.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"invalid JSON: {exc}", line_number) from exc
        numbers.append(line_number)
    return dataset_from_objs(objs, vocab, numbers)


def dataset_to_jsonl(dataset: SampleDataset) -> str:
    """Serialize a dataset to JSON Lines; parse_dataset inverts this exactly."""
    lines = []
    for sample in dataset.samples:
        obj = {
            "sample_id": sample.source_id,
            "triples": [list(dataset.vocab.triple_names(t)) for t in sample.triples],
        }
        lines.append(json.dumps(obj, separators=(", ", ": ")))
    return "".join(line + "\n" for line in lines)
