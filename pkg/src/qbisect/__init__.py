"""Quantum max/min graph bisection by partial negation and partial measurement, simulated classically."""
from .amplify import (
    BranchSet,
    ProbabilityTrace,
    Sampler,
    build_branches,
    compute_mu,
    evolve,
    probability_trace,
    required_iterations,
    sample_run,
)
from .config import AlgorithmConfig
from .graph import (
    Assignment,
    BisectionResult,
    ConstraintVector,
    Graph,
    brute_force_bisection,
    enumerate_balanced,
    evaluate_constraints,
    example_graph,
    parse_graph,
    read_graph,
)
from .kernels import BACKEND
from .prep import make_prep_plan

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "Assignment",
    "BACKEND",
    "BisectionResult",
    "BranchSet",
    "ConstraintVector",
    "Graph",
    "ProbabilityTrace",
    "Sampler",
    "brute_force_bisection",
    "build_branches",
    "compute_mu",
    "enumerate_balanced",
    "evaluate_constraints",
    "evolve",
    "example_graph",
    "make_prep_plan",
    "parse_graph",
    "probability_trace",
    "read_graph",
    "required_iterations",
    "sample_run",
]
