"""Implicit-hitting-set solving for weighted CSPs."""

from .driver import IterationCapExceeded, RunReport, SolverConfig, solve
from .encoding import InducedCspEncoding, Satisfiable, Unsatisfiable
from .hitting import HittingProblem, LevelSpace, cost_bounded_hv, greedy_hv, min_cost_hv
from .improve import (
    ImproveOutcome,
    improve_core,
    improve_cost_bounded,
    improve_lazy,
    improve_maximal,
    improve_partial_maximal,
)
from .merge import MergedProblem, build_merged, min_fill_order
from .model import (
    Assignment,
    CoreSet,
    CostFunction,
    CostVector,
    HardConstraint,
    WcspInstance,
    cost,
    dominates,
    evaluate,
    hits,
    make_cost_function,
    maximal_subset,
)
from .wcsp_io import (
    EnumerationCapExceeded,
    GeneratorParams,
    WcspParseError,
    brute_force_optimum,
    brute_force_optimum_slow,
    gen_scale_free,
    gen_uniform,
    parse_wcsp,
    write_wcsp,
)

__all__ = [
    "Assignment",
    "CoreSet",
    "CostFunction",
    "CostVector",
    "EnumerationCapExceeded",
    "GeneratorParams",
    "HardConstraint",
    "HittingProblem",
    "ImproveOutcome",
    "InducedCspEncoding",
    "IterationCapExceeded",
    "LevelSpace",
    "MergedProblem",
    "RunReport",
    "Satisfiable",
    "SolverConfig",
    "Unsatisfiable",
    "WcspInstance",
    "WcspParseError",
    "brute_force_optimum",
    "brute_force_optimum_slow",
    "build_merged",
    "cost",
    "cost_bounded_hv",
    "dominates",
    "evaluate",
    "gen_scale_free",
    "gen_uniform",
    "greedy_hv",
    "hits",
    "improve_core",
    "improve_cost_bounded",
    "improve_lazy",
    "improve_maximal",
    "improve_partial_maximal",
    "make_cost_function",
    "maximal_subset",
    "min_cost_hv",
    "min_fill_order",
    "parse_wcsp",
    "solve",
    "write_wcsp",
]
