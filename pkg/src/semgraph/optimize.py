"""Joint transmit-power / omission-count energy minimization.

For a fixed omission count the total energy is monotone increasing in power,
so the best admissible power is the one that makes communication plus
computation latency land exactly on the budget; that power has a closed form
obtained by inverting the rate law. The optimizer linearly searches the
integer omission counts, pairing each with its closed-form power, which keeps
the whole solve at O(total_triples) cost-model evaluations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .codec import OmissionProfile
from .costs import (
    SystemParams,
    comm_energy,
    comm_latency,
    computation_load,
    message_bits,
    omission_capacity,
)
from .errors import ComputationBudgetError, InfeasibleInstanceError

Mode = Literal["strict", "paper_literal"]

_LATENCY_TOL = 1e-12
_EXP_OVERFLOW = 1020.0  # 2**x overflows float64 just above this


@dataclass(frozen=True)
class Solution:
    """Optimizer output. `feasible` means the latency budget and the method's
    own power constraint both hold; `clamped_at_pmax` marks points evaluated
    at the power cap even though the cap power misses the latency budget."""

    power_w: float
    omitted: int
    comm_energy_j: float
    comp_energy_j: float
    total_energy_j: float
    comm_latency_s: float
    comp_latency_s: float
    feasible: bool
    clamped_at_pmax: bool

    def to_dict(self) -> dict:
        return {
            "power_w": self.power_w,
            "omitted": self.omitted,
            "comm_energy_j": self.comm_energy_j,
            "comp_energy_j": self.comp_energy_j,
            "total_energy_j": self.total_energy_j,
            "comm_latency_s": self.comm_latency_s,
            "comp_latency_s": self.comp_latency_s,
            "feasible": self.feasible,
            "clamped_at_pmax": self.clamped_at_pmax,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass
class OptimizerStats:
    """Counts individual cost-model evaluations performed by a solve."""

    model_evaluations: int = 0

    def tick(self) -> None:
        self.model_evaluations += 1


def _power_for_load(params: SystemParams, load: float, omitted: float) -> float:
    """Smallest power whose transmission time fits the budget left after computing.

    Returns inf when the required power overflows floats; raises when the
    computation latency alone consumes the whole budget.
    """
    remaining = params.latency_limit_s - params.tau1 * load / params.cpu_hz
    if remaining <= 0:
        raise ComputationBudgetError(
            f"computation latency {params.tau1 * load / params.cpu_hz:.3e}s exceeds "
            f"the {params.latency_limit_s:.3e}s budget"
        )
    bits = message_bits(params.total_triples, omitted, params.bits_per_symbol)
    if bits <= 0:
        return 0.0
    exponent = bits / (params.bandwidth_hz * remaining)
    if exponent >= _EXP_OVERFLOW:
        return math.inf
    return (2.0**exponent - 1.0) * params.noise_power_w / params.channel_gain


def min_feasible_power(
    params: SystemParams, profile: OmissionProfile | Iterable[float], omitted: float
) -> float:
    """Power making communication + computation latency exactly meet the budget."""
    load = computation_load(params.total_triples, profile, omitted)
    return _power_for_load(params, load, omitted)


def max_feasible_omissions(params: SystemParams, profile: OmissionProfile | Iterable[float]) -> int:
    """Largest integer omission count whose computation alone still fits the budget."""
    profile = OmissionProfile.coerce(profile)
    m = params.total_triples
    bound = min(m, int(omission_capacity(m, profile) + 1e-9))
    budget = params.latency_limit_s * params.cpu_hz / params.tau1
    lo, hi = 0, bound
    # computation load is non-decreasing, so bisect the threshold
    if computation_load(m, profile, bound) < budget:
        return bound
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if computation_load(m, profile, mid) < budget:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _solution(
    params: SystemParams, power_w: float, omitted: int, load: float, clamped: bool
) -> Solution:
    t2 = params.tau1 * load / params.cpu_hz
    e2 = params.tau1 * params.tau2 * load * params.cpu_hz**2
    if math.isinf(power_w):
        t1, e1 = 0.0, math.inf
    else:
        t1 = comm_latency(params, power_w, omitted)
        e1 = comm_energy(params, power_w, omitted)
    feasible = (
        math.isfinite(power_w)
        and t1 + t2 <= params.latency_limit_s * (1.0 + _LATENCY_TOL)
    )
    return Solution(
        power_w=power_w,
        omitted=omitted,
        comm_energy_j=e1,
        comp_energy_j=e2,
        total_energy_j=e1 + e2,
        comm_latency_s=t1,
        comp_latency_s=t2,
        feasible=feasible,
        clamped_at_pmax=clamped,
    )


def optimize(
    params: SystemParams,
    profile: OmissionProfile | Iterable[float],
    mode: Mode = "strict",
    stats: OptimizerStats | None = None,
) -> Solution:
    """Linear search over integer omission counts with closed-form power.

    The search stops early once computation alone exceeds the latency budget
    (the load is non-decreasing). An omission count whose required power tops
    the cap is skipped in strict mode; in paper_literal mode it is evaluated
    at the cap and marked clamped, reproducing the reference search loop even
    when the capped power misses the latency budget. Energy ties prefer fewer
    omissions.
    """
    if mode not in ("strict", "paper_literal"):
        raise ValueError(f"unknown mode {mode!r}")
    profile = OmissionProfile.coerce(profile)
    stats = stats if stats is not None else OptimizerStats()
    m = params.total_triples
    bound = min(m, int(omission_capacity(m, profile) + 1e-9))
    budget = params.latency_limit_s * params.cpu_hz / params.tau1
    best: Solution | None = None
    for omitted in range(bound + 1):
        load = computation_load(m, profile, omitted)
        stats.tick()
        if load >= budget:
            break
        power = _power_for_load(params, load, omitted)
        stats.tick()
        if power > params.max_power_w:
            if mode == "strict":
                continue
            power, clamped = params.max_power_w, True
        else:
            clamped = False
        candidate = _solution(params, power, omitted, load, clamped)
        stats.tick()
        if best is None or candidate.total_energy_j < best.total_energy_j:
            best = candidate
    if best is None:
        raise InfeasibleInstanceError(
            "no omission count admits a power within the cap and the latency budget"
        )
    return best


def optimize_bruteforce(
    params: SystemParams,
    profile: OmissionProfile | Iterable[float],
    power_grid_size: int = 10_000,
) -> Solution:
    """Exhaustive oracle: for every integer omission count, sweep a log-spaced
    power grid from the minimum latency-feasible power up to the cap and keep
    the cheapest latency-feasible point."""
    if power_grid_size < 1000:
        raise ValueError("power_grid_size must be at least 1000")
    profile = OmissionProfile.coerce(profile)
    m = params.total_triples
    bound = min(m, int(omission_capacity(m, profile) + 1e-9))
    budget = params.latency_limit_s * params.cpu_hz / params.tau1
    best: Solution | None = None
    for omitted in range(bound + 1):
        load = computation_load(m, profile, omitted)
        if load >= budget:
            break
        p_lo = _power_for_load(params, load, omitted)
        if p_lo > params.max_power_w:
            continue
        bits = message_bits(m, omitted, params.bits_per_symbol)
        t2 = params.tau1 * load / params.cpu_hz
        e2 = params.tau1 * params.tau2 * load * params.cpu_hz**2
        if bits <= 0 or p_lo <= 0.0:
            candidate = _solution(params, p_lo, omitted, load, False)
        else:
            grid = np.geomspace(p_lo, params.max_power_w, power_grid_size)
            grid[0] = p_lo
            rate = params.bandwidth_hz * np.log2(1.0 + grid * params.channel_gain / params.noise_power_w)
            t1 = bits / rate
            energy = t1 * grid + e2
            feasible = t1 + t2 <= params.latency_limit_s * (1.0 + _LATENCY_TOL)
            if not feasible.any():
                continue
            energy[~feasible] = np.inf
            p_best = float(grid[int(np.argmin(energy))])
            candidate = _solution(params, p_best, omitted, load, False)
        if best is None or candidate.total_energy_j < best.total_energy_j:
            best = candidate
    if best is None:
        raise InfeasibleInstanceError(
            "no omission count admits a power within the cap and the latency budget"
        )
    return best


def baseline_traditional(params: SystemParams) -> Solution:
    """Send everything uncompressed, spending the whole latency budget on air
    time; the power cap is deliberately ignored by this method."""
    bits = message_bits(params.total_triples, 0, params.bits_per_symbol)
    if bits <= 0:
        return _solution(params, 0.0, 0, 0.0, False)
    exponent = bits / (params.bandwidth_hz * params.latency_limit_s)
    if exponent >= _EXP_OVERFLOW:
        power = math.inf
    else:
        power = (2.0**exponent - 1.0) * params.noise_power_w / params.channel_gain
    return _solution(params, power, 0, 0.0, False)


def baseline_simplified(
    params: SystemParams,
    profile: OmissionProfile | Iterable[float],
    mode: Mode = "strict",
    stats: OptimizerStats | None = None,
) -> Solution:
    """Joint optimization restricted to first-stage omissions only."""
    profile = OmissionProfile.coerce(profile)
    return optimize(params, OmissionProfile((profile.ratios[0],)), mode=mode, stats=stats)
