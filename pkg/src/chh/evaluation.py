"""Accuracy metrics, equal-space configuration and throughput timing."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .report import ChhReport

# Modeled counter widths: item + 8-byte count for single-item counters,
# two items + 8-byte count for tuple counters (items are 32-bit).
ITEM_COUNTER_BYTES = 12
TUPLE_COUNTER_BYTES = 16

# The experimental configurations keep the primary table 210x larger than
# each embedded secondary table; equal_space_config preserves that ratio.
PRIMARY_PER_SECONDARY = 210


class InfeasibleSpaceError(ValueError):
    """Byte budget too small for any equal-space configuration."""


class EmptyStreamError(ValueError):
    """Throughput timing needs at least one update."""


@dataclass
class EvalResult:
    """Accuracy (and optionally speed) of one algorithm on one stream."""

    recall: float
    precision: float
    abs_err_max: float
    abs_err_mean: float
    rel_err_max: float
    rel_err_mean: float
    updates_per_ms: Optional[float] = None
    space_bytes_model: Optional[int] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def cascade_space_bytes(k1: int, k2: int) -> int:
    return ITEM_COUNTER_BYTES * k1 + TUPLE_COUNTER_BYTES * k2


def nested_mg_space_bytes(s1: int, s2: int) -> int:
    return ITEM_COUNTER_BYTES * (s1 + s1 * s2)


@dataclass(frozen=True)
class SpaceConfig:
    """Counter counts giving both algorithms exactly the same byte budget."""

    k1: int
    k2: int
    s1: int
    s2: int

    @property
    def bytes(self) -> int:
        return cascade_space_bytes(self.k1, self.k2)


def equal_space_config(space_bytes: int) -> SpaceConfig:
    """Largest equal-space configuration fitting in ``space_bytes``.

    Keeps k1 = s1 = 210*s2 with s2 even, so 12*k1 + 16*k2 and
    12*(s1 + s1*s2) land on the same exact byte count (k2 = 3*k1*s2/4).
    """
    # 12 * 210 * s2 * (1 + s2) <= space_bytes, s2 even.
    s2 = 2
    if nested_mg_space_bytes(PRIMARY_PER_SECONDARY * s2, s2) > space_bytes:
        raise InfeasibleSpaceError(
            f"no equal-space configuration fits in {space_bytes} bytes")
    while True:
        nxt = s2 + 2
        if nested_mg_space_bytes(PRIMARY_PER_SECONDARY * nxt, nxt) > space_bytes:
            break
        s2 = nxt
    s1 = PRIMARY_PER_SECONDARY * s2
    k2 = (ITEM_COUNTER_BYTES * s1 * s2) // TUPLE_COUNTER_BYTES
    return SpaceConfig(k1=s1, k2=k2, s1=s1, s2=s2)


def score(report: ChhReport, truth: ChhReport) -> EvalResult:
    """Score a reported CHH set against the exact one.

    Recall and precision are over the (primary, secondary) sets; absolute
    and relative estimation errors are computed on the reported true CHHs
    only, against the exact tuple frequencies carried by ``truth``.
    """
    reported = report.chh_set()
    true_set = truth.chh_set()
    hits = reported & true_set
    recall = 1.0 if not true_set else len(hits) / len(true_set)
    precision = 1.0 if not reported else len(hits) / len(reported)
    exact = truth.chh_freqs()
    est = report.chh_freqs()
    abs_errs = [abs(est[t] - exact[t]) for t in hits]
    rel_errs = [abs(est[t] - exact[t]) / exact[t] for t in hits]
    return EvalResult(
        recall=recall,
        precision=precision,
        abs_err_max=max(abs_errs, default=0.0),
        abs_err_mean=statistics.fmean(abs_errs) if abs_errs else 0.0,
        rel_err_max=max(rel_errs, default=0.0),
        rel_err_mean=statistics.fmean(rel_errs) if rel_errs else 0.0,
    )


@dataclass
class ThroughputResult:
    updates_per_ms: float           # median over runs
    samples: list = field(default_factory=list)


def throughput(make_sketch: Callable[[], object], xs, ys,
               runs: int = 3) -> ThroughputResult:
    """Median update throughput of a sketch over the given stream.

    Times the update loop only, on a fresh sketch per run.  Inputs are fed
    as given; callers pick the representation (lists, arrays) they want to
    measure and do any conversion before calling.
    """
    if runs < 1:
        raise ValueError("need at least one run")
    if len(xs) == 0:
        raise EmptyStreamError("cannot time an empty stream")
    samples = []
    for _ in range(runs):
        sketch = make_sketch()
        start = time.perf_counter()
        sketch.update_many(xs, ys)
        elapsed = time.perf_counter() - start
        samples.append(len(xs) / (elapsed * 1000.0))
    return ThroughputResult(updates_per_ms=statistics.median(samples),
                            samples=samples)
