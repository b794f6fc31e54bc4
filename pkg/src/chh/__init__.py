"""Correlated heavy hitters over two-dimensional streams.

Public surface: the two approximate algorithms (cascaded Space Saving and
the nested Misra-Gries baseline), the exact oracle, synthetic stream
generation, and the evaluation helpers used by the CLI.
"""

from .csschh import CascadeSketch, ChhParams, ChhSizing, ParameterError, plan_capacities
from .datagen import PairFileError, StreamSpec, generate_stream, zipf_sample
from .evaluation import (
    EmptyStreamError,
    EvalResult,
    InfeasibleSpaceError,
    SpaceConfig,
    equal_space_config,
    score,
    throughput,
)
from .mgchh import NestedMgSketch
from .oracle import ExactCounts
from .report import ChhReport
from .summaries import MisraGriesSummary, SpaceSavingSummary

__all__ = [
    "CascadeSketch",
    "ChhParams",
    "ChhReport",
    "ChhSizing",
    "EmptyStreamError",
    "EvalResult",
    "ExactCounts",
    "InfeasibleSpaceError",
    "MisraGriesSummary",
    "NestedMgSketch",
    "PairFileError",
    "ParameterError",
    "SpaceConfig",
    "SpaceSavingSummary",
    "StreamSpec",
    "equal_space_config",
    "generate_stream",
    "plan_capacities",
    "score",
    "throughput",
    "zipf_sample",
]
