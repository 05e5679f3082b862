"""Lossless graph compression against a shared probability graph.

A triple can be sent without its relation whenever the receiver can rederive
the relation as the strictly-highest-probability candidate for the pair. The
compressor works in rounds: round 1 uses unconditional probabilities; round 2
re-examines surviving triples conditioned on single already-omitted triples,
cycling until a full pass omits nothing; round r>=3 generalizes to condition
sets of size r-1. Ties never omit, which is what makes restoration exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import CorruptMessageError, DatasetFormatError, UnknownTripleError
from .kg import KnowledgeGraph, SampleDataset, Triple, Vocabulary
from .probgraph import ProbabilityGraph, strict_argmax_relation


class OmittedEntry(NamedTuple):
    position: int  # index of the triple in the original graph
    head: int
    tail: int
    round_no: int
    condition_refs: tuple[int, ...]  # indices of earlier omitted entries


@dataclass(frozen=True)
class CompressedMessage:
    total_triples: int
    kept: tuple[tuple[int, Triple], ...]  # (position, triple)
    omitted: tuple[OmittedEntry, ...]

    @property
    def omitted_count(self) -> int:
        return len(self.omitted)

    def condition_overhead_bytes(self, bytes_per_ref: int = 4) -> int:
        """Side-information size for the recorded conditions (not part of the payload model)."""
        return sum(len(e.condition_refs) for e in self.omitted) * bytes_per_ref


@dataclass(frozen=True)
class OmissionProfile:
    """Per-stage omission ratios: stage 1 is round 1, stage n>=2 is cycle n-1 of round 2."""

    ratios: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.ratios:
            raise ValueError("omission profile must have at least one stage")
        for q in self.ratios:
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"omission ratio {q} outside [0, 1]")

    @classmethod
    def coerce(cls, value: "OmissionProfile | Iterable[float]") -> "OmissionProfile":
        if isinstance(value, OmissionProfile):
            return value
        return cls(tuple(float(q) for q in value))

    def __len__(self) -> int:
        return len(self.ratios)


def _is_eligible(pg: ProbabilityGraph, triple: Triple) -> bool:
    quad = pg.lookup(triple.head, triple.tail)
    return quad is not None and quad.entry(triple.relation) is not None


def _compress_with_stats(
    graph: KnowledgeGraph, pg: ProbabilityGraph, max_rounds: int
) -> tuple[CompressedMessage, list[tuple[int, int]]]:
    """Compress and report per-stage (entering, omitted) counts.

    Stage 0 of the returned list is round 1 over all triples; subsequent
    stages are the round-2 cycles that actually ran.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    triples = graph.triples
    omitted: list[OmittedEntry] = []
    omitted_triples: list[Triple] = []
    kept_forever: list[int] = []  # positions the knowledge base cannot express
    unomitted: list[int] = []
    round1 = 0
    for pos, t in enumerate(triples):
        if not _is_eligible(pg, t):
            kept_forever.append(pos)
        elif strict_argmax_relation(pg, t.head, t.tail) == t.relation:
            omitted.append(OmittedEntry(pos, t.head, t.tail, 1, ()))
            omitted_triples.append(t)
            round1 += 1
        else:
            unomitted.append(pos)
    stages = [(len(triples), round1)]

    for round_no in range(2, max_rounds + 1):
        set_size = round_no - 1
        while unomitted:
            pool = len(omitted)  # conditions available this cycle, frozen up front
            survivors: list[int] = []
            newly = 0
            for pos in unomitted:
                t = triples[pos]
                refs = _first_enabling_conditions(pg, t, omitted_triples, pool, set_size)
                if refs is None:
                    survivors.append(pos)
                else:
                    omitted.append(OmittedEntry(pos, t.head, t.tail, round_no, refs))
                    omitted_triples.append(t)
                    newly += 1
            if round_no == 2:
                stages.append((len(unomitted), newly))
            unomitted = survivors
            if newly == 0:
                break

    kept_positions = sorted(kept_forever + unomitted)
    kept = tuple((pos, triples[pos]) for pos in kept_positions)
    msg = CompressedMessage(len(triples), kept, tuple(omitted))
    return msg, stages


def _first_enabling_conditions(
    pg: ProbabilityGraph,
    triple: Triple,
    omitted_triples: list[Triple],
    pool: int,
    set_size: int,
) -> tuple[int, ...] | None:
    """First condition set (lexicographic over entry indices) that makes the
    triple's relation the strict conditional argmax, or None."""
    if pool < set_size:
        return None
    for refs in itertools.combinations(range(pool), set_size):
        conditions = [omitted_triples[i] for i in refs]
        if strict_argmax_relation(pg, triple.head, triple.tail, conditions) == triple.relation:
            return refs
    return None


def compress(graph: KnowledgeGraph, pg: ProbabilityGraph, max_rounds: int = 2) -> CompressedMessage:
    """Compress a graph; triples the knowledge base cannot resolve are kept verbatim."""
    msg, _ = _compress_with_stats(graph, pg, max_rounds)
    return msg


def decompress(msg: CompressedMessage, pg: ProbabilityGraph) -> KnowledgeGraph:
    """Restore the original graph, reconstructing omitted relations in message order."""
    restored: list[Triple] = []
    for i, entry in enumerate(msg.omitted):
        conditions = []
        for ref in entry.condition_refs:
            if not 0 <= ref < i:
                raise CorruptMessageError(
                    f"omitted entry {i} references entry {ref}, which is not an earlier entry"
                )
            conditions.append(restored[ref])
        try:
            relation = strict_argmax_relation(pg, entry.head, entry.tail, conditions)
        except UnknownTripleError as exc:
            raise CorruptMessageError(f"omitted entry {i}: {exc}") from exc
        if relation is None:
            raise CorruptMessageError(
                f"omitted entry {i}: relation is not uniquely recoverable (tied or undefined)"
            )
        restored.append(Triple(entry.head, relation, entry.tail))

    slots: dict[int, Triple] = {pos: t for pos, t in msg.kept}
    for entry, t in zip(msg.omitted, restored):
        slots[entry.position] = t
    if len(slots) != msg.total_triples or sorted(slots) != list(range(msg.total_triples)):
        raise CorruptMessageError("position tags do not cover 0..total_triples-1 exactly")
    return KnowledgeGraph.from_triples(slots[pos] for pos in range(msg.total_triples))


def measure_omission_profile(
    corpus: SampleDataset, pg: ProbabilityGraph, max_rounds: int = 2
) -> OmissionProfile:
    """Aggregate per-stage omission ratios over a corpus.

    Stage 1 pools round-1 omissions over all triples; stage n>=2 pools the
    (n-1)-th round-2 cycle over the triples that entered it, counting only
    graphs that actually ran that cycle. A stage nobody entered reports 0.
    """
    if not corpus.samples:
        raise ValueError("corpus must contain at least one sample")
    entering: list[int] = []
    omitted: list[int] = []
    for sample in corpus.samples:
        _, stages = _compress_with_stats(sample, pg, max_rounds)
        for idx, (n_in, n_out) in enumerate(stages):
            if idx == len(entering):
                entering.append(0)
                omitted.append(0)
            entering[idx] += n_in
            omitted[idx] += n_out
    ratios = tuple(
        (omitted[i] / entering[i]) if entering[i] > 0 else 0.0 for i in range(len(entering))
    )
    return OmissionProfile(ratios)


def message_to_obj(msg: CompressedMessage, vocab: Vocabulary) -> dict:
    kept = []
    for pos, t in msg.kept:
        h, r, tl = vocab.triple_names(t)
        kept.append([pos, h, r, tl])
    omitted = []
    for e in msg.omitted:
        omitted.append(
            {
                "pos": e.position,
                "head": vocab.entities.name(e.head),
                "tail": vocab.entities.name(e.tail),
                "round": e.round_no,
                "conditions": list(e.condition_refs),
            }
        )
    return {"total_triples": msg.total_triples, "kept": kept, "omitted": omitted}


def message_from_obj(obj: object, vocab: Vocabulary) -> CompressedMessage:
    if not isinstance(obj, dict) or not {"total_triples", "kept", "omitted"} <= set(obj):
        raise DatasetFormatError("message must contain 'total_triples', 'kept' and 'omitted'")
    kept = []
    for raw in obj["kept"]:
        if not isinstance(raw, (list, tuple)) or len(raw) != 4:
            raise DatasetFormatError(f"kept entry must be [pos, head, relation, tail], got {raw!r}")
        pos, h, r, t = raw
        kept.append((int(pos), vocab.intern_triple(h, r, t)))
    omitted = []
    for i, raw in enumerate(obj["omitted"]):
        round_no = int(raw["round"])
        refs = tuple(int(c) for c in raw["conditions"])
        if round_no < 1:
            raise DatasetFormatError(f"omitted entry {i}: round must be >= 1")
        if round_no == 1 and refs:
            raise DatasetFormatError(f"omitted entry {i}: round-1 entries carry no conditions")
        if any(not 0 <= ref < i for ref in refs):
            raise DatasetFormatError(f"omitted entry {i}: conditions must reference earlier entries")
        omitted.append(
            OmittedEntry(
                int(raw["pos"]),
                vocab.entities.intern(raw["head"]),
                vocab.entities.intern(raw["tail"]),
                round_no,
                refs,
            )
        )
    total = int(obj["total_triples"])
    if total != len(kept) + len(omitted):
        raise DatasetFormatError(
            f"total_triples={total} but message carries {len(kept)} kept + {len(omitted)} omitted"
        )
    return CompressedMessage(total, tuple(kept), tuple(omitted))


def message_to_json(msg: CompressedMessage, vocab: Vocabulary) -> str:
    return json.dumps(message_to_obj(msg, vocab), indent=2) + "\n"


def message_from_json(data: str | bytes, vocab: Vocabulary) -> CompressedMessage:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"invalid JSON: {exc}") from exc
    return message_from_obj(obj, vocab)
