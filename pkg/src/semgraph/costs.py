"""Communication/computation cost model.

Message size is linear in the surviving payload, transmission follows the
Shannon rate under a static channel gain and noise floor, and the expected
comparison count to reach a given omission level is a piecewise-linear,
non-decreasing function of the omission count derived from the per-stage
omission ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .codec import OmissionProfile
from .errors import ConfigFileError, InsufficientOmissionCapacityError, ZeroRateError

_CAPACITY_TOL = 1e-9

# Defaults: bandwidth/power/gain/latency/cpu/total_triples mirror the headline
# simulation setup; noise power, symbol width and the two compute coefficients
# are package defaults chosen so stock sweeps keep computation energy below
# communication energy. All overridable.
@dataclass(frozen=True)
class SystemParams:
    bandwidth_hz: float = 10e6
    max_power_w: float = 1.0
    channel_gain: float = 1e-9
    noise_power_w: float = 1e-13
    latency_limit_s: float = 1e-3
    cpu_hz: float = 1e9
    tau1: float = 1.0
    tau2: float = 1e-28
    bits_per_symbol: float = 32.0
    total_triples: int = 100

    def __post_init__(self) -> None:
        positive = {
            "bandwidth_hz": self.bandwidth_hz,
            "max_power_w": self.max_power_w,
            "channel_gain": self.channel_gain,
            "noise_power_w": self.noise_power_w,
            "latency_limit_s": self.latency_limit_s,
            "cpu_hz": self.cpu_hz,
            "tau1": self.tau1,
            "tau2": self.tau2,
            "bits_per_symbol": self.bits_per_symbol,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.total_triples < 0:
            raise ValueError(f"total_triples must be >= 0, got {self.total_triples}")

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


def stage_capacities(total_triples: float, profile: OmissionProfile | Iterable[float]) -> tuple[float, ...]:
    """Expected omission capacity of each stage: stage n absorbs the stage
    ratio of whatever the earlier stages left over. Real-valued by design."""
    profile = OmissionProfile.coerce(profile)
    capacities = []
    remaining = float(total_triples)
    for q in profile.ratios:
        cap = remaining * q
        capacities.append(cap)
        remaining -= cap
    return tuple(capacities)


def omission_capacity(total_triples: float, profile: OmissionProfile | Iterable[float]) -> float:
    return math.fsum(stage_capacities(total_triples, profile))


def computation_load(
    total_triples: float, profile: OmissionProfile | Iterable[float], omitted: float
) -> float:
    """Expected number of probability comparisons to omit `omitted` relations.

    Piecewise linear: within stage 1 each omission costs 1/q1 comparisons;
    within stage n>=2 it costs (previous stage's capacity)/qn, because every
    surviving triple is tested against each entry omitted in the previous
    stage. Segments join continuously at the cumulative capacities.
    """
    profile = OmissionProfile.coerce(profile)
    if omitted < 0:
        raise ValueError(f"omitted must be >= 0, got {omitted}")
    caps = stage_capacities(total_triples, profile)
    capacity = math.fsum(caps)
    if omitted > capacity + _CAPACITY_TOL * max(1.0, capacity):
        raise InsufficientOmissionCapacityError(
            f"cannot omit {omitted} relations; profile capacity is {capacity}"
        )
    remaining = min(float(omitted), capacity)
    load = 0.0
    for idx, (cap, q) in enumerate(zip(caps, profile.ratios)):
        if remaining <= 0.0:
            break
        take = min(remaining, cap)
        if take > 0.0:
            per_omission = (1.0 / q) if idx == 0 else (caps[idx - 1] / q)
            load += take * per_omission
            remaining -= take
    return load


def message_bits(total_triples: float, omitted: float, bits_per_symbol: float) -> float:
    """Payload bits: three symbols per kept triple, two per relation-omitted one."""
    if not 0 <= omitted <= total_triples:
        raise ValueError(f"omitted must lie in [0, {total_triples}], got {omitted}")
    return bits_per_symbol * (3.0 * total_triples - omitted)


def transmission_rate(params: SystemParams, power_w: float) -> float:
    """Shannon rate in bits/s at the given transmit power."""
    if power_w < 0:
        raise ValueError(f"power must be >= 0, got {power_w}")
    snr = power_w * params.channel_gain / params.noise_power_w
    return params.bandwidth_hz * math.log2(1.0 + snr)


def comm_latency(params: SystemParams, power_w: float, omitted: float) -> float:
    """Transmission time of the compressed payload; inf at zero rate."""
    bits = message_bits(params.total_triples, omitted, params.bits_per_symbol)
    if bits == 0.0:
        return 0.0
    rate = transmission_rate(params, power_w)
    if rate == 0.0:
        return math.inf
    return bits / rate


def comp_latency(
    params: SystemParams, profile: OmissionProfile | Iterable[float], omitted: float
) -> float:
    return params.tau1 * computation_load(params.total_triples, profile, omitted) / params.cpu_hz


def comm_energy(params: SystemParams, power_w: float, omitted: float) -> float:
    """Transmit energy: latency times power."""
    bits = message_bits(params.total_triples, omitted, params.bits_per_symbol)
    if bits == 0.0:
        return 0.0
    if power_w == 0.0:
        raise ZeroRateError("zero transmit power with a non-empty payload")
    return comm_latency(params, power_w, omitted) * power_w


def comp_energy(
    params: SystemParams, profile: OmissionProfile | Iterable[float], omitted: float
) -> float:
    load = computation_load(params.total_triples, profile, omitted)
    return params.tau1 * params.tau2 * load * params.cpu_hz**2


def total_energy(
    params: SystemParams,
    profile: OmissionProfile | Iterable[float],
    power_w: float,
    omitted: float,
) -> float:
    return comm_energy(params, power_w, omitted) + comp_energy(params, profile, omitted)


# ---------------------------------------------------------------------------
# Flat key-value config files


_PARAM_KEYS = {
    "bandwidth_hz": float,
    "max_power_w": float,
    "channel_gain": float,
    "noise_power_w": float,
    "latency_limit_s": float,
    "cpu_hz": float,
    "tau1": float,
    "tau2": float,
    "bits_per_symbol": float,
    "total_triples": int,
}


def parse_flat_config(text: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment; blank lines ignored."""
    out: dict[str, str] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"line {line_number}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigFileError(f"line {line_number}: empty key")
        if key in out:
            raise ConfigFileError(f"line {line_number}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def params_from_config(
    entries: Mapping[str, str], strict: bool = True
) -> tuple[SystemParams, OmissionProfile | None]:
    """Build SystemParams (and the optional q_ratios profile) from parsed entries.

    With strict=True any key outside the parameter schema is an error; sweep
    loaders pass strict=False after consuming their own keys.
    """
    kwargs = {}
    ratios: OmissionProfile | None = None
    for key, value in entries.items():
        if key == "q_ratios":
            try:
                ratios = OmissionProfile(tuple(float(part) for part in value.split(",") if part.strip()))
            except ValueError as exc:
                raise ConfigFileError(f"q_ratios: {exc}") from exc
        elif key in _PARAM_KEYS:
            try:
                kwargs[key] = _PARAM_KEYS[key](value)
            except ValueError as exc:
                raise ConfigFileError(f"{key}: {exc}") from exc
        elif strict:
            raise ConfigFileError(f"unknown config key {key!r}")
    try:
        params = SystemParams(**kwargs)
    except ValueError as exc:
        raise ConfigFileError(str(exc)) from exc
    return params, ratios


def load_params_config(text: str) -> tuple[SystemParams, OmissionProfile | None]:
    return params_from_config(parse_flat_config(text))
