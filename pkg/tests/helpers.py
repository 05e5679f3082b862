"""Shared test utilities: independent oracles and random-instance builders.

The probability oracles work directly on string triples and raw sample
membership, never touching the package's support sets, so they stay
independent of the code paths they check.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from semgraph.costs import SystemParams
from semgraph.kg import SampleDataset, parse_dataset

StrTriple = tuple[str, str, str]


def dataset_from_samples(samples: list[list[StrTriple]]) -> SampleDataset:
    """Build a dataset from string triples, sample ids assigned 1..N in order."""
    lines = [
        json.dumps({"sample_id": i, "triples": [list(t) for t in sample]})
        for i, sample in enumerate(samples, start=1)
    ]
    return parse_dataset("\n".join(lines))


def sample_contains(sample: list[StrTriple], triple: StrTriple) -> bool:
    return triple in sample


def oracle_marginal(samples: list[list[StrTriple]], target: StrTriple) -> Fraction:
    """Count-based marginal: occurrences of the triple over the summed
    occurrences of every relation seen between the same head and tail."""
    head, _, tail = target
    relations = {r for sample in samples for (h, r, t) in sample if h == head and t == tail}
    numerator = sum(1 for sample in samples if sample_contains(sample, target))
    denominator = sum(
        1
        for relation in relations
        for sample in samples
        if sample_contains(sample, (head, relation, tail))
    )
    return Fraction(numerator, denominator)


def oracle_conditional(
    samples: list[list[StrTriple]], target: StrTriple, conditions: list[StrTriple]
) -> Fraction | None:
    """Filter samples by the condition triples, then count. None = undefined
    (no filtered sample mentions the target's pair at all)."""
    if not conditions:
        return oracle_marginal(samples, target)
    head, _, tail = target
    filtered = [s for s in samples if all(sample_contains(s, c) for c in conditions)]
    denominator = sum(1 for s in filtered if any(h == head and t == tail for (h, _, t) in s))
    if denominator == 0:
        return None
    numerator = sum(1 for s in filtered if sample_contains(s, target))
    return Fraction(numerator, denominator)


def random_string_dataset(
    rng: random.Random,
    n_samples: int,
    n_pairs: int = 6,
    n_relations: int = 4,
    max_triples: int = 8,
) -> list[list[StrTriple]]:
    """Unstructured random samples (may repeat pairs across samples freely)."""
    samples = []
    for _ in range(n_samples):
        sample = []
        seen = set()
        for _ in range(rng.randint(1, max_triples)):
            k = rng.randrange(n_pairs)
            triple = (f"h{k}", f"r{rng.randrange(n_relations)}", f"t{k}")
            if triple not in seen:
                seen.add(triple)
                sample.append(triple)
        samples.append(sample)
    return samples


def random_params(rng: random.Random) -> SystemParams:
    """System parameters drawn over realistic log-ranges."""
    return SystemParams(
        bandwidth_hz=10 ** rng.uniform(5.5, 7.5),
        max_power_w=10 ** rng.uniform(-1.5, 0.5),
        channel_gain=10 ** rng.uniform(-10.0, -8.0),
        noise_power_w=10 ** rng.uniform(-14.0, -12.0),
        latency_limit_s=10 ** rng.uniform(-3.5, -2.5),
        cpu_hz=10 ** rng.uniform(8.5, 9.5),
        tau1=rng.uniform(0.5, 4.0),
        tau2=10 ** rng.uniform(-29.0, -27.0),
        bits_per_symbol=rng.choice([16.0, 24.0, 32.0, 48.0]),
        total_triples=rng.randint(20, 150),
    )


def random_profile(rng: random.Random, max_len: int = 4, hi: float = 0.75) -> tuple[float, ...]:
    return tuple(rng.uniform(0.05, hi) for _ in range(rng.randint(1, max_len)))


def branch_load_values(total: float, ratios: tuple[float, ...]):
    """Literal per-branch load expressions, evaluated independently.

    Returns (capacities, branch) where branch(n, e) is the n-th branch's
    value at omission count e: the sum of the full costs of branches below n
    plus the overage times that branch's per-omission cost (1/q1 for the
    first branch, previous capacity / qn afterwards).
    """
    capacities = []
    remaining = float(total)
    for q in ratios:
        capacities.append(remaining * q)
        remaining -= capacities[-1]

    def slope(n: int) -> float:
        return (1.0 / ratios[0]) if n == 0 else capacities[n - 1] / ratios[n]

    def branch(n: int, e: float) -> float:
        base = sum(capacities[k] * slope(k) for k in range(n) if capacities[k] > 0)
        overage = e - sum(capacities[:n])
        return base + overage * slope(n)

    return capacities, branch


def bisect_root(f, lo: float, hi: float, iterations: int = 200) -> float:
    """Plain bisection for a decreasing f with f(lo) > 0 > f(hi)."""
    flo, fhi = f(lo), f(hi)
    if flo <= 0 or fhi >= 0:
        raise ValueError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
