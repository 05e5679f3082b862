"""Acceptance suite: one test per release criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; assertions carry the tolerances, nothing is deferred to calibration.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from helpers import (
    bisect_root,
    branch_load_values,
    oracle_conditional,
    oracle_marginal,
    random_params,
    random_profile,
    random_string_dataset,
)

from semgraph.cli import main as cli_main
from semgraph.codec import OmissionProfile, compress, decompress
from semgraph.costs import (
    SystemParams,
    comm_latency,
    comp_latency,
    computation_load,
    omission_capacity,
    total_energy,
)
from semgraph.errors import InfeasibleInstanceError
from semgraph.generator import GeneratorConfig, generate_corpus
from semgraph.kg import Triple, dataset_from_objs
from semgraph.optimize import (
    OptimizerStats,
    min_feasible_power,
    optimize,
    optimize_bruteforce,
)
from semgraph.probgraph import (
    build_probability_graph,
    conditional_probability,
    marginal_probability,
)
from semgraph.sweep import SweepSpec, run_sweep


def report(criterion: str) -> None:
    print(f"ACCEPTANCE {criterion}: PASS")


def test_criterion_1_lossless_codec_over_100_corpora():
    started = time.monotonic()
    for seed in range(1, 101):
        cfg = GeneratorConfig(
            num_samples=32,
            num_pairs=128,
            relations_per_pair=4,
            skew=0.4,
            triples_per_sample=64,
            seed=seed,
            pair_coupling=0.6,
        )
        corpus = generate_corpus(cfg)
        pg = build_probability_graph(corpus)
        for graph in corpus.samples:
            assert len(graph) <= 200
            restored = decompress(compress(graph, pg, 2), pg)
            assert restored.triples == graph.triples
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"codec round-trip took {elapsed:.1f}s"
    report("1 lossless codec, 100 corpora")


def test_criterion_2_probability_oracle_equivalence():
    rng = random.Random(1002)
    datasets = [random_string_dataset(rng, n) for n in range(1, 17)]
    datasets += [random_string_dataset(rng, rng.randint(2, 16)) for _ in range(20)]
    for samples in datasets:
        objs = [
            {"sample_id": i, "triples": [list(t) for t in sample]}
            for i, sample in enumerate(samples, start=1)
        ]
        ds = dataset_from_objs(objs)
        pg = build_probability_graph(ds)
        universe = sorted({t for s in samples for t in s})

        def to_ids(str_triple):
            h, r, t = str_triple
            return Triple(
                ds.vocab.entities.get(h), ds.vocab.relations.get(r), ds.vocab.entities.get(t)
            )

        # every marginal, exactly
        for str_triple in universe:
            t = to_ids(str_triple)
            assert marginal_probability(pg, *t) == oracle_marginal(samples, str_triple)
        # every one-condition conditional, exactly
        for target in universe:
            for condition in universe:
                expected = oracle_conditional(samples, target, [condition])
                if expected is None:
                    continue
                got = conditional_probability(pg, to_ids(target), [to_ids(condition)])
                assert got == expected
        # sampled multi-condition conditionals, exactly
        for _ in range(30):
            target = rng.choice(universe)
            conditions = rng.sample(universe, k=min(len(universe), rng.randint(2, 3)))
            expected = oracle_conditional(samples, target, conditions)
            if expected is None:
                continue
            got = conditional_probability(pg, to_ids(target), [to_ids(c) for c in conditions])
            assert got == expected
    report("2 probability oracle equivalence (exact)")


def test_criterion_3_computation_load_structure():
    rng = random.Random(1003)
    for _ in range(300):
        length = rng.randint(1, 5)
        ratios = []
        for _ in range(length):
            roll = rng.random()
            if roll < 0.15:
                ratios.append(0.0)
            elif roll > 0.85:
                ratios.append(1.0)
            else:
                ratios.append(rng.random())
        profile = OmissionProfile(tuple(ratios))
        m = rng.randint(1, 300)
        caps, branch = branch_load_values(m, profile.ratios)
        capacity = omission_capacity(m, profile)
        # non-decreasing over every integer omission count
        values = [computation_load(m, profile, e) for e in range(int(capacity) + 1)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        # adjacent literal branch expressions agree at each stage boundary
        cum = 0.0
        for n, cap in enumerate(caps[:-1]):
            cum += cap
            if caps[n + 1] <= 0.0 or cap <= 0.0:
                continue
            left = branch(n, cum)
            right = branch(n + 1, cum)
            assert abs(left - right) <= 1e-9 * max(abs(left), 1e-300)
            # and the implementation returns that shared value
            assert computation_load(m, profile, cum) == pytest.approx(left, rel=1e-9)
    report("3 computation load: non-decreasing, branch expressions agree at boundaries")


def test_criterion_4_closed_form_power():
    rng = random.Random(1004)
    checked = 0
    while checked < 1000:
        params = random_params(rng)
        profile = random_profile(rng)
        cap = min(params.total_triples, int(omission_capacity(params.total_triples, profile)))
        omitted = rng.randint(0, cap)
        load = computation_load(params.total_triples, profile, omitted)
        if load >= params.latency_limit_s * params.cpu_hz / params.tau1:
            continue
        power = min_feasible_power(params, profile, omitted)
        if math.isinf(power) or power <= 0.0:
            continue
        total = comm_latency(params, power, omitted) + comp_latency(params, profile, omitted)
        assert total == pytest.approx(params.latency_limit_s, rel=1e-9)

        t2 = comp_latency(params, profile, omitted)

        def gap(p):
            return comm_latency(params, p, omitted) + t2 - params.latency_limit_s

        root = bisect_root(gap, power * 1e-3, power * 1e3)
        assert root == pytest.approx(power, rel=1e-9)
        checked += 1
    report("4 closed-form power: budget met and bisection agreement, 1000 instances")


def test_criterion_5_optimizer_vs_bruteforce():
    started = time.monotonic()
    rng = random.Random(1005)
    solved = 0
    while solved < 50:
        params = random_params(rng)
        profile = random_profile(rng)
        stats = OptimizerStats()
        try:
            fast = optimize(params, profile, stats=stats)
        except InfeasibleInstanceError:
            continue
        slow = optimize_bruteforce(params, profile, 10_000)
        assert abs(fast.total_energy_j - slow.total_energy_j) <= 0.005 * slow.total_energy_j
        assert stats.model_evaluations <= 3 * params.total_triples
        solved += 1
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"optimizer cross-check took {elapsed:.1f}s"
    report("5 optimizer within 0.5% of 10^4-point brute force, O(M) evaluations")


def test_criterion_6_energy_monotone_in_power():
    rng = random.Random(1006)
    checked = 0
    while checked < 100:
        params = random_params(rng)
        profile = random_profile(rng)
        cap = min(params.total_triples, int(omission_capacity(params.total_triples, profile)))
        omitted = rng.randint(0, cap)
        load = computation_load(params.total_triples, profile, omitted)
        if load >= params.latency_limit_s * params.cpu_hz / params.tau1:
            continue
        p_star = min_feasible_power(params, profile, omitted)
        if math.isinf(p_star) or p_star <= 0 or p_star >= params.max_power_w:
            continue
        closed_form = total_energy(params, profile, p_star, omitted)
        grid = np.geomspace(p_star, params.max_power_w, 1000)
        energies = np.array([total_energy(params, profile, p, omitted) for p in grid])
        assert (energies >= closed_form * (1 - 1e-12)).all()
        assert (np.diff(energies) >= -1e-12 * energies[:-1]).all()
        checked += 1
    report("6 total energy non-decreasing in power, 100 instances x 1000 powers")


def _sweep_table(axis, values):
    spec = SweepSpec(
        axis=axis,
        values=values,
        methods=("jccpg", "simplified", "traditional"),
        params=SystemParams(),
        profile=OmissionProfile((0.5, 0.5)),
    )
    table = {}
    for row in run_sweep(spec):
        assert row.solution is not None, f"unexpected infeasible point {row}"
        table.setdefault(row.method, []).append(row.solution)
    return table


def test_criterion_7_figure_trends():
    # (a) energy grows with message size; joint optimization stays cheapest
    m_values = tuple(float(m) for m in range(50, 301, 50))
    by_m = _sweep_table("total_triples", m_values)
    for method, solutions in by_m.items():
        energies = [s.total_energy_j for s in solutions]
        assert all(b >= a * (1 - 1e-12) for a, b in zip(energies, energies[1:])), method
    trad = [s.total_energy_j for s in by_m["traditional"]]
    assert all(b > a for a, b in zip(trad, trad[1:]))
    for i in range(len(m_values)):
        jccpg = by_m["jccpg"][i].total_energy_j
        simplified = by_m["simplified"][i].total_energy_j
        traditional = by_m["traditional"][i].total_energy_j
        assert jccpg <= simplified * (1 + 1e-12)
        assert simplified <= traditional * (1 + 1e-12)

    # (b) more bandwidth, less energy; method gap narrows
    b_values = tuple(float(b) * 1e6 for b in range(2, 21, 2))
    by_b = _sweep_table("bandwidth_hz", b_values)
    for method, solutions in by_b.items():
        energies = [s.total_energy_j for s in solutions]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(energies, energies[1:])), method
    gap_low = by_b["traditional"][0].total_energy_j - by_b["jccpg"][0].total_energy_j
    gap_high = by_b["traditional"][-1].total_energy_j - by_b["jccpg"][-1].total_energy_j
    assert gap_high < gap_low

    # (c) longer deadlines never cost more; the curve flattens past some point
    t_values = tuple(np.geomspace(2e-4, 5e-2, 14))
    by_t = _sweep_table("latency_limit_s", t_values)
    for method, solutions in by_t.items():
        energies = [s.total_energy_j for s in solutions]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(energies, energies[1:])), method
        changes = [abs(b - a) / a for a, b in zip(energies, energies[1:])]
        flat_from = next((i for i in range(len(changes)) if all(c < 0.01 for c in changes[i:])), None)
        assert flat_from is not None and flat_from <= len(changes) - 2, method

    # (d) computing stays cheaper than transmitting for the joint optimizer
    for solution in by_m["jccpg"]:
        assert solution.comp_energy_j < solution.comm_energy_j
    report("7 figure trends: growth with M, bandwidth relief, deadline plateau, compute < comm")


def test_criterion_8_cli_pipeline_deterministic(tmp_path):
    def pipeline(workdir):
        workdir.mkdir()
        corpus = workdir / "corpus.jsonl"
        kb = workdir / "kb.json"
        profile = workdir / "profile.json"
        solution = workdir / "solution.json"
        spec = workdir / "sweep.cfg"
        csv = workdir / "sweep.csv"
        assert cli_main([
            "gen", "--samples", "32", "--pairs", "64", "--relations", "4",
            "--skew", "0.4", "--triples", "32", "--coupling", "0.6",
            "--seed", "11", "--out", str(corpus),
        ]) == 0
        assert cli_main(["build-kb", "--in", str(corpus), "--out", str(kb)]) == 0
        assert cli_main([
            "profile", "--kb", str(kb), "--corpus", str(corpus), "--out", str(profile),
        ]) == 0
        ratios = json.load(open(profile))["ratios"]
        q = ",".join(str(r) for r in ratios[:2])
        assert cli_main(["optimize", "--q", q, "--out", str(solution)]) == 0
        spec.write_text(
            "axis = total_triples\n"
            "values = 50, 100, 150, 200\n"
            "methods = jccpg, simplified, traditional\n"
            f"corpus = {corpus}\n"
        )
        assert cli_main(["sweep", "--spec", str(spec), "--out", str(csv)]) == 0
        return {
            "corpus": corpus.read_bytes(),
            "kb": kb.read_bytes(),
            "profile": profile.read_bytes(),
            "solution": solution.read_bytes(),
            "csv": csv.read_bytes(),
        }

    first = pipeline(tmp_path / "run1")
    second = pipeline(tmp_path / "run2")
    assert first == second
    header = first["csv"].decode().splitlines()[0]
    assert header == (
        "axis,method,total_energy_j,comm_energy_j,comp_energy_j,"
        "power_w,omitted_E,comm_latency_s,comp_latency_s,feasible"
    )
    assert len(first["csv"].decode().strip().splitlines()) == 1 + 4 * 3
    report("8 CLI pipeline deterministic, byte-identical CSV on rerun")
