"""Knowledge-graph semantic compression over a shared probability graph,
with a joint communication/computation energy optimizer."""

__version__ = "0.1.0"

from .codec import (
    CompressedMessage,
    OmissionProfile,
    OmittedEntry,
    compress,
    decompress,
    measure_omission_profile,
)
from .costs import SystemParams
from .errors import SemgraphError
from .generator import GeneratorConfig, generate_corpus
from .kg import KnowledgeGraph, SampleDataset, Triple, Vocabulary, parse_dataset
from .optimize import (
    Solution,
    baseline_simplified,
    baseline_traditional,
    max_feasible_omissions,
    min_feasible_power,
    optimize,
    optimize_bruteforce,
)
from .probgraph import (
    ProbabilityGraph,
    build_probability_graph,
    conditional_probability,
    marginal_probability,
    relation_distribution,
    strict_argmax_relation,
)
from .sweep import SweepSpec, run_sweep

__all__ = [
    "CompressedMessage",
    "GeneratorConfig",
    "KnowledgeGraph",
    "OmissionProfile",
    "OmittedEntry",
    "ProbabilityGraph",
    "SampleDataset",
    "SemgraphError",
    "Solution",
    "SweepSpec",
    "SystemParams",
    "Triple",
    "Vocabulary",
    "baseline_simplified",
    "baseline_traditional",
    "build_probability_graph",
    "compress",
    "conditional_probability",
    "decompress",
    "generate_corpus",
    "marginal_probability",
    "max_feasible_omissions",
    "measure_omission_profile",
    "min_feasible_power",
    "optimize",
    "optimize_bruteforce",
    "parse_dataset",
    "relation_distribution",
    "run_sweep",
    "strict_argmax_relation",
]
