"""Synthetic corpus generation with controllable relation dominance.

Samples are produced in blocks of `relations_per_pair` consecutive samples
sharing one random pair subset. Within a block each pair hands out its
relations as a permutation, one per sample, so at skew 0 every relation of a
pair is supported by exactly the same number of samples and strict argmax
never fires. Raising `skew` overrides individual draws with the pair's
dominant relation, monotonically growing the share of triples that first-pass
compression can drop.

`pair_coupling` designates a fraction of pairs as followers of a neighbouring
leader pair: whenever the leader shows its dominant relation, the co-present
follower shows a fixed alternate relation instead of its own dominant. The
alternate is never the follower's most frequent relation, but conditioned on
the leader's dominant triple it is certain, so exactly those triples become
droppable in the conditional passes and the measured second-stage ratio grows
with the coupling fraction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import GeneratorConfigError
from .kg import KnowledgeGraph, SampleDataset, Triple, Vocabulary


@dataclass(frozen=True)
class GeneratorConfig:
    num_samples: int
    num_pairs: int
    relations_per_pair: int
    skew: float
    triples_per_sample: int
    seed: int = 0
    pair_coupling: float = 0.0

    def __post_init__(self) -> None:
        if self.num_samples < 1:
            raise GeneratorConfigError(f"num_samples must be >= 1, got {self.num_samples}")
        if self.num_pairs < 1:
            raise GeneratorConfigError(f"num_pairs must be >= 1, got {self.num_pairs}")
        if self.relations_per_pair < 1:
            raise GeneratorConfigError(
                f"relations_per_pair must be >= 1, got {self.relations_per_pair}"
            )
        if self.triples_per_sample < 1:
            raise GeneratorConfigError(
                f"triples_per_sample must be >= 1, got {self.triples_per_sample}"
            )
        if self.triples_per_sample > self.num_pairs:
            raise GeneratorConfigError(
                f"triples_per_sample ({self.triples_per_sample}) cannot exceed "
                f"num_pairs ({self.num_pairs})"
            )
        if not 0.0 <= self.skew < 1.0:
            raise GeneratorConfigError(f"skew must lie in [0, 1), got {self.skew}")
        if not 0.0 <= self.pair_coupling <= 1.0:
            raise GeneratorConfigError(
                f"pair_coupling must lie in [0, 1], got {self.pair_coupling}"
            )
        if self.pair_coupling > 0.0 and self.relations_per_pair < 2:
            raise GeneratorConfigError("pair_coupling needs at least 2 relations per pair")


def _follower_map(cfg: GeneratorConfig) -> dict[int, int]:
    """Follower pair -> leader pair. Odd indices follow their even neighbour,
    up to the configured fraction of all pairs."""
    count = round(cfg.pair_coupling * cfg.num_pairs / 2)
    return {2 * i + 1: 2 * i for i in range(count) if 2 * i + 1 < cfg.num_pairs}


def _draw_subset(rng: random.Random, units: list[tuple[int, ...]], size: int) -> list[int]:
    """Random pair subset of exactly `size`, built from leader/follower units.

    When one slot remains and the drawn unit is a couple, only its leader is
    taken so the subset size is exact.
    """
    subset: list[int] = []
    for unit in rng.sample(units, len(units)):
        room = size - len(subset)
        if room == 0:
            break
        subset.extend(unit[:room])
    return subset


def generate_corpus(cfg: GeneratorConfig) -> SampleDataset:
    """Generate a dataset of `num_samples` graphs, fully determined by the seed."""
    rng = random.Random(cfg.seed)
    vocab = Vocabulary()
    pairs = [
        (vocab.entities.intern(f"h{k}"), vocab.entities.intern(f"t{k}"))
        for k in range(cfg.num_pairs)
    ]
    relations = [vocab.relations.intern(f"r{i}") for i in range(cfg.relations_per_pair)]
    dominant = [rng.randrange(cfg.relations_per_pair) for _ in range(cfg.num_pairs)]
    followers = _follower_map(cfg)
    alternate = {
        f: (dominant[f] + 1 + rng.randrange(cfg.relations_per_pair - 1)) % cfg.relations_per_pair
        for f in sorted(followers)
    }

    # pairs are drawn as units so a follower always brings its leader along
    units: list[tuple[int, ...]] = []
    claimed = set(followers) | set(followers.values())
    for f, leader in sorted(followers.items()):
        units.append((leader, f))
    units.extend((k,) for k in range(cfg.num_pairs) if k not in claimed)

    samples: list[KnowledgeGraph] = []
    sample_id = 1
    while sample_id <= cfg.num_samples:
        block = min(cfg.relations_per_pair, cfg.num_samples - sample_id + 1)
        subset = _draw_subset(rng, units, cfg.triples_per_sample)
        in_subset = set(subset)
        slates = {
            k: rng.sample(range(cfg.relations_per_pair), cfg.relations_per_pair)
            for k in subset
            if k not in followers
        }
        for slot in range(block):
            chosen: dict[int, int] = {}
            for k in subset:  # leaders and free pairs first; followers react to them
                if k in followers:
                    continue
                rel_idx = slates[k][slot]
                if rng.random() < cfg.skew:
                    rel_idx = dominant[k]
                chosen[k] = rel_idx
            for k in subset:
                if k not in followers:
                    continue
                leader = followers[k]
                if leader in in_subset and chosen[leader] == dominant[leader]:
                    chosen[k] = alternate[k]
                else:
                    chosen[k] = dominant[k]
            triples = [
                Triple(pairs[k][0], relations[chosen[k]], pairs[k][1]) for k in subset
            ]
            samples.append(KnowledgeGraph.from_triples(triples, source_id=sample_id))
            sample_id += 1
    return SampleDataset(tuple(samples), vocab)
