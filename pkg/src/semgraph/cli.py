"""Command-line front end. Every subcommand is a thin client of the HTTP
service: by default requests run against an in-process app instance, and
`--server URL` points them at a remote deployment instead.

Exit codes: 0 success, 1 usage/input error, 2 infeasible optimization instance.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

from .costs import parse_flat_config
from .errors import ConfigFileError
from .kg import dataset_from_objs, dataset_to_jsonl

DEFAULT_SEED = 0


class _UsageError(Exception):
    pass


class _InfeasibleError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit code 1
        raise _UsageError(message)


class ServiceClient:
    """POSTs JSON payloads either to a remote server or to the in-process app."""

    def __init__(self, server: str | None):
        self._server = server
        self._transport: httpx.ASGITransport | None = None
        if server is None:
            from .service.app import create_app

            self._transport = httpx.ASGITransport(app=create_app())

    def post(self, path: str, payload: dict) -> dict:
        if self._server is not None:
            response = httpx.post(self._server.rstrip("/") + path, json=payload, timeout=600.0)
        else:

            async def _go() -> httpx.Response:
                async with httpx.AsyncClient(
                    transport=self._transport, base_url="http://semgraph", timeout=600.0
                ) as client:
                    return await client.post(path, json=payload)

            response = asyncio.run(_go())
        if response.status_code == 200:
            return response.json()
        detail = _detail(response)
        if response.status_code == 409:
            raise _InfeasibleError(detail)
        raise _UsageError(detail)


def _detail(response: httpx.Response) -> str:
    try:
        return str(response.json().get("detail"))
    except Exception:
        return response.text


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)


def _dataset_wire_from_jsonl(text: str) -> dict:
    samples = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            samples.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise _UsageError(f"line {line_number}: invalid JSON: {exc}") from exc
    return {"samples": samples}


def _default_seed() -> int:
    env = os.environ.get("SEMGRAPH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise _UsageError(f"SEMGRAPH_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _params_payload(args) -> dict:
    params_kwargs = {}
    ratios = None
    if args.config is not None:
        entries = parse_flat_config(_read(args.config))
        if "q_ratios" in entries:
            ratios = [float(p) for p in entries.pop("q_ratios").split(",") if p.strip()]
        unknown = set(entries) - _PARAM_KEYS
        if unknown:
            raise _UsageError(f"unknown config keys: {sorted(unknown)}")
        params_kwargs = {
            k: (int(v) if k == "total_triples" else float(v)) for k, v in entries.items()
        }
    if getattr(args, "pmax_dbm", None) is not None:
        params_kwargs["max_power_w"] = dbm_to_watts(args.pmax_dbm)
    return {"params": params_kwargs, "ratios": ratios}


_PARAM_KEYS = {
    "bandwidth_hz",
    "max_power_w",
    "channel_gain",
    "noise_power_w",
    "latency_limit_s",
    "cpu_hz",
    "tau1",
    "tau2",
    "bits_per_symbol",
    "total_triples",
}

_SWEEP_KEYS = {"axis", "values", "methods", "mode", "max_rounds", "corpus"}


def _cmd_gen(client: ServiceClient, args) -> int:
    payload = {
        "num_samples": args.samples,
        "num_pairs": args.pairs,
        "relations_per_pair": args.relations,
        "skew": args.skew,
        "triples_per_sample": args.triples,
        "seed": args.seed if args.seed is not None else _default_seed(),
        "pair_coupling": args.coupling,
    }
    resp = client.post("/corpus/generate", payload)
    dataset = dataset_from_objs(resp["samples"])
    _write(args.out, dataset_to_jsonl(dataset))
    return 0


def _cmd_build_kb(client: ServiceClient, args) -> int:
    wire = _dataset_wire_from_jsonl(_read(args.infile))
    resp = client.post("/kb/build", {"dataset": wire})
    _write(args.out, json.dumps(resp, indent=2) + "\n")
    return 0


def _cmd_compress(client: ServiceClient, args) -> int:
    payload = {
        "kb": json.loads(_read(args.kb)),
        "graph": json.loads(_read(args.infile)),
        "max_rounds": args.max_rounds,
    }
    resp = client.post("/codec/compress", payload)
    _write(args.out, json.dumps(resp, indent=2) + "\n")
    return 0


def _cmd_decompress(client: ServiceClient, args) -> int:
    payload = {
        "kb": json.loads(_read(args.kb)),
        "message": json.loads(_read(args.infile)),
    }
    resp = client.post("/codec/decompress", payload)
    _write(args.out, json.dumps(resp, indent=2) + "\n")
    return 0


def _cmd_profile(client: ServiceClient, args) -> int:
    payload = {
        "kb": json.loads(_read(args.kb)),
        "corpus": _dataset_wire_from_jsonl(_read(args.corpus)),
        "max_rounds": args.max_rounds,
    }
    resp = client.post("/codec/profile", payload)
    _write(args.out, json.dumps(resp, indent=2) + "\n")
    return 0


def _cmd_optimize(client: ServiceClient, args) -> int:
    parsed = _params_payload(args)
    ratios = parsed["ratios"]
    if args.q is not None:
        ratios = [float(p) for p in args.q.split(",") if p.strip()]
    payload = {
        "params": parsed["params"],
        "q_ratios": ratios,
        "mode": args.mode,
        "method": args.method,
    }
    resp = client.post("/optimize", payload)
    _write(args.out, json.dumps(resp, indent=2) + "\n")
    return 0


def _cmd_sweep(client: ServiceClient, args) -> int:
    entries = parse_flat_config(_read(args.spec))
    sweep_entries = {k: entries.pop(k) for k in list(entries) if k in _SWEEP_KEYS}
    if "axis" not in sweep_entries or "values" not in sweep_entries:
        raise _UsageError("sweep spec must define 'axis' and 'values'")
    ratios = None
    if "q_ratios" in entries:
        ratios = [float(p) for p in entries.pop("q_ratios").split(",") if p.strip()]
    unknown = set(entries) - _PARAM_KEYS
    if unknown:
        raise _UsageError(f"unknown sweep spec keys: {sorted(unknown)}")
    params = {k: (int(v) if k == "total_triples" else float(v)) for k, v in entries.items()}
    if args.pmax_dbm is not None:
        params["max_power_w"] = dbm_to_watts(args.pmax_dbm)
    payload: dict = {
        "axis": sweep_entries["axis"],
        "values": [float(v) for v in sweep_entries["values"].split(",") if v.strip()],
        "params": params,
    }
    if "methods" in sweep_entries:
        payload["methods"] = [m.strip() for m in sweep_entries["methods"].split(",") if m.strip()]
    if "mode" in sweep_entries:
        payload["mode"] = sweep_entries["mode"]
    if "max_rounds" in sweep_entries:
        payload["max_rounds"] = int(sweep_entries["max_rounds"])
    if ratios is not None:
        payload["q_ratios"] = ratios
    if "corpus" in sweep_entries:
        payload["corpus"] = _dataset_wire_from_jsonl(_read(sweep_entries["corpus"]))
    resp = client.post("/sweep", payload)
    _write(args.out, resp["csv"])
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="semgraph", description=__doc__)
    parser.add_argument("--server", default=None, help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic corpus (JSON Lines)")
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--pairs", type=int, default=64)
    p.add_argument("--relations", type=int, default=4)
    p.add_argument("--skew", type=float, default=0.5)
    p.add_argument("--triples", type=int, default=32)
    p.add_argument("--coupling", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None, help="defaults to $SEMGRAPH_SEED or 0")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("build-kb", help="build a probability-graph snapshot from a corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_build_kb)

    p = sub.add_parser("compress", help="compress a knowledge graph against a snapshot")
    p.add_argument("--kb", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--max-rounds", type=int, default=2)
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("decompress", help="restore a compressed message")
    p.add_argument("--kb", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_decompress)

    p = sub.add_parser("profile", help="measure per-stage omission ratios over a corpus")
    p.add_argument("--kb", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--max-rounds", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("optimize", help="solve one power/omission instance")
    p.add_argument("--config", default=None, help="flat key=value parameter file")
    p.add_argument("--q", default=None, help="comma-separated omission ratios")
    p.add_argument("--mode", choices=["strict", "paper_literal"], default="strict")
    p.add_argument("--method", choices=["jccpg", "simplified", "traditional"], default="jccpg")
    p.add_argument("--pmax-dbm", type=float, default=None, help="power cap in dBm (overrides config watts)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep", help="run a parameter sweep and emit CSV")
    p.add_argument("--spec", required=True, help="flat key=value sweep spec file")
    p.add_argument("--pmax-dbm", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        client = ServiceClient(args.server)
        return args.func(client, args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1
    except _InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
