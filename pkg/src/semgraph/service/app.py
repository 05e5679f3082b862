"""FastAPI service exposing corpus generation, the knowledge base, the codec,
the optimizer, and parameter sweeps. The CLI is a thin client of this app."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..codec import (
    OmissionProfile,
    compress,
    decompress,
    measure_omission_profile,
    message_from_obj,
    message_to_obj,
)
from ..costs import SystemParams
from ..errors import InfeasibleInstanceError, SemgraphError
from ..generator import GeneratorConfig, generate_corpus
from ..kg import SampleDataset, dataset_from_objs, graph_from_obj, graph_to_obj
from ..optimize import baseline_simplified, baseline_traditional, optimize
from ..probgraph import ProbabilityGraph, build_probability_graph, snapshot_from_obj, snapshot_obj
from ..sweep import SweepSpec, rows_to_csv, run_sweep
from .schemas import (
    BuildKbRequest,
    CompressRequest,
    DatasetWire,
    DecompressRequest,
    GenerateRequest,
    GraphWire,
    HealthResponse,
    KbWire,
    MessageWire,
    OptimizeRequest,
    ProfileRequest,
    ProfileResponse,
    SolutionWire,
    SweepRequest,
    SweepResponse,
)

DEFAULT_SWEEP_PROFILE = (0.5, 0.5)


def _dataset_from_wire(wire: DatasetWire) -> SampleDataset:
    return dataset_from_objs(s.model_dump() for s in wire.samples)


def _dataset_to_wire(dataset: SampleDataset) -> DatasetWire:
    samples = []
    for g in dataset.samples:
        samples.append(
            {
                "sample_id": g.source_id,
                "triples": [dataset.vocab.triple_names(t) for t in g.triples],
            }
        )
    return DatasetWire.model_validate({"samples": samples})


def _kb_from_wire(wire: KbWire) -> ProbabilityGraph:
    return snapshot_from_obj(wire.model_dump())


def create_app() -> FastAPI:
    app = FastAPI(title="semgraph", version=__version__)

    @app.exception_handler(SemgraphError)
    async def semgraph_error(request, exc: SemgraphError):
        status = 409 if isinstance(exc, InfeasibleInstanceError) else 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/corpus/generate", response_model=DatasetWire)
    def corpus_generate(req: GenerateRequest):
        cfg = GeneratorConfig(**req.model_dump())
        return _dataset_to_wire(generate_corpus(cfg))

    @app.post("/kb/build", response_model=KbWire)
    def kb_build(req: BuildKbRequest):
        pg = build_probability_graph(_dataset_from_wire(req.dataset))
        return KbWire.model_validate(snapshot_obj(pg))

    @app.post("/codec/compress", response_model=MessageWire)
    def codec_compress(req: CompressRequest):
        pg = _kb_from_wire(req.kb)
        graph = graph_from_obj(req.graph.model_dump(), pg.vocab)
        msg = compress(graph, pg, req.max_rounds)
        return MessageWire.model_validate(message_to_obj(msg, pg.vocab))

    @app.post("/codec/decompress", response_model=GraphWire)
    def codec_decompress(req: DecompressRequest):
        pg = _kb_from_wire(req.kb)
        msg = message_from_obj(req.message.model_dump(), pg.vocab)
        graph = decompress(msg, pg)
        return GraphWire.model_validate(graph_to_obj(graph, pg.vocab))

    @app.post("/codec/profile", response_model=ProfileResponse)
    def codec_profile(req: ProfileRequest):
        pg = _kb_from_wire(req.kb)
        corpus = dataset_from_objs((s.model_dump() for s in req.corpus.samples), pg.vocab)
        profile = measure_omission_profile(corpus, pg, req.max_rounds)
        return ProfileResponse(ratios=list(profile.ratios))

    @app.post("/optimize", response_model=SolutionWire)
    def run_optimize(req: OptimizeRequest):
        params = SystemParams(**req.params.model_dump())
        if req.method == "traditional":
            solution = baseline_traditional(params)
        else:
            if req.q_ratios is None:
                raise ValueError(f"q_ratios is required for method {req.method!r}")
            profile = OmissionProfile.coerce(req.q_ratios)
            if req.method == "jccpg":
                solution = optimize(params, profile, mode=req.mode)
            else:
                solution = baseline_simplified(params, profile, mode=req.mode)
        return SolutionWire.model_validate(solution.to_dict())

    @app.post("/sweep", response_model=SweepResponse)
    def run_sweep_endpoint(req: SweepRequest):
        if req.q_ratios is not None and req.corpus is not None:
            raise ValueError("give either q_ratios or corpus, not both")
        if req.q_ratios is not None:
            profile = OmissionProfile.coerce(req.q_ratios)
        elif req.corpus is not None:
            corpus = _dataset_from_wire(req.corpus)
            pg = build_probability_graph(corpus)
            profile = measure_omission_profile(corpus, pg, req.max_rounds)
        else:
            profile = OmissionProfile(DEFAULT_SWEEP_PROFILE)
        spec = SweepSpec(
            axis=req.axis,
            values=tuple(req.values),
            methods=tuple(req.methods),
            params=SystemParams(**req.params.model_dump()),
            profile=profile,
            mode=req.mode,
        )
        return SweepResponse(csv=rows_to_csv(run_sweep(spec)))

    return app
