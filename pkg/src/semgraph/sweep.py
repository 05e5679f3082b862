"""Parameter sweeps over the optimizer and baselines, emitted as CSV rows."""

from __future__ import annotations

from dataclasses import dataclass

from .codec import OmissionProfile
from .costs import SystemParams
from .errors import InfeasibleInstanceError
from .optimize import Mode, Solution, baseline_simplified, baseline_traditional, optimize

AXES = ("total_triples", "bandwidth_hz", "latency_limit_s")
METHOD_ORDER = ("jccpg", "simplified", "traditional")

CSV_HEADER = (
    "axis,method,total_energy_j,comm_energy_j,comp_energy_j,"
    "power_w,omitted_E,comm_latency_s,comp_latency_s,feasible"
)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    methods: tuple[str, ...]
    params: SystemParams
    profile: OmissionProfile
    mode: Mode = "strict"

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ValueError("sweep needs at least one axis value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("axis values must be strictly increasing")
        if not self.methods:
            raise ValueError("sweep needs at least one method")
        unknown = set(self.methods) - set(METHOD_ORDER)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        # canonical, duplicate-free method order
        ordered = tuple(m for m in METHOD_ORDER if m in self.methods)
        object.__setattr__(self, "methods", ordered)
        if self.axis == "total_triples" and any(v != int(v) for v in self.values):
            raise ValueError("total_triples axis values must be integers")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    method: str
    solution: Solution | None  # None when the point is infeasible


def _solve(method: str, params: SystemParams, profile: OmissionProfile, mode: Mode) -> Solution | None:
    try:
        if method == "jccpg":
            return optimize(params, profile, mode=mode)
        if method == "simplified":
            return baseline_simplified(params, profile, mode=mode)
        return baseline_traditional(params)
    except InfeasibleInstanceError:
        return None


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per (axis value, method), ordered by axis index then method."""
    rows: list[SweepRow] = []
    for value in spec.values:
        if spec.axis == "total_triples":
            params = spec.params.with_(total_triples=int(value))
        else:
            params = spec.params.with_(**{spec.axis: float(value)})
        for method in spec.methods:
            rows.append(SweepRow(value, method, _solve(method, params, spec.profile, spec.mode)))
    return rows


def _fmt(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Render rows under the fixed header; infeasible rows leave numerics blank."""
    lines = [CSV_HEADER]
    for row in rows:
        if row.solution is None:
            cells = [_fmt(row.axis_value), row.method] + [""] * 7 + ["false"]
        else:
            s = row.solution
            cells = [
                _fmt(row.axis_value),
                row.method,
                _fmt(s.total_energy_j),
                _fmt(s.comm_energy_j),
                _fmt(s.comp_energy_j),
                _fmt(s.power_w),
                str(s.omitted),
                _fmt(s.comm_latency_s),
                _fmt(s.comp_latency_s),
                "true" if s.feasible else "false",
            ]
        lines.append(",".join(cells))
    return "".join(line + "\n" for line in lines)
