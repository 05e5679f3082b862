"""Pydantic request/response models. Wire shapes match the on-disk JSON formats."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class SampleWire(BaseModel):
    sample_id: int
    triples: list[tuple[str, str, str]]


class DatasetWire(BaseModel):
    samples: list[SampleWire]


class GraphWire(BaseModel):
    triples: list[tuple[str, str, str]]


class RelationWire(BaseModel):
    relation: str
    support: list[int]


class QuadrupleWire(BaseModel):
    head: str
    tail: str
    relations: list[RelationWire]


class KbWire(BaseModel):
    sample_count: int
    quadruples: list[QuadrupleWire]


class OmittedWire(BaseModel):
    pos: int
    head: str
    tail: str
    round: int
    conditions: list[int]


class MessageWire(BaseModel):
    total_triples: int
    kept: list[tuple[int, str, str, str]]
    omitted: list[OmittedWire]


class ParamsWire(BaseModel):
    model_config = ConfigDict(extra="forbid")

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


class SolutionWire(BaseModel):
    power_w: float
    omitted: int
    comm_energy_j: float
    comp_energy_j: float
    total_energy_j: float
    comm_latency_s: float
    comp_latency_s: float
    feasible: bool
    clamped_at_pmax: bool


class GenerateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    num_samples: int
    num_pairs: int
    relations_per_pair: int
    skew: float
    triples_per_sample: int
    seed: int = 0
    pair_coupling: float = 0.0


class BuildKbRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dataset: DatasetWire


class CompressRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kb: KbWire
    graph: GraphWire
    max_rounds: int = Field(default=2, ge=1)


class DecompressRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kb: KbWire
    message: MessageWire


class ProfileRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kb: KbWire
    corpus: DatasetWire
    max_rounds: int = Field(default=2, ge=1)


class ProfileResponse(BaseModel):
    ratios: list[float]


class OptimizeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsWire = ParamsWire()
    q_ratios: list[float] | None = None
    mode: Literal["strict", "paper_literal"] = "strict"
    method: Literal["jccpg", "simplified", "traditional"] = "jccpg"


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    axis: Literal["total_triples", "bandwidth_hz", "latency_limit_s"]
    values: list[float]
    methods: list[Literal["jccpg", "simplified", "traditional"]] = [
        "jccpg",
        "simplified",
        "traditional",
    ]
    params: ParamsWire = ParamsWire()
    q_ratios: list[float] | None = None
    corpus: DatasetWire | None = None
    max_rounds: int = Field(default=2, ge=1)
    mode: Literal["strict", "paper_literal"] = "strict"


class SweepResponse(BaseModel):
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str
