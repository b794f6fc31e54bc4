"""Cascaded Space Saving for correlated heavy hitters.

Two independent Space Saving summaries run side by side: one over primary
items and one over whole (primary, secondary) tuples keyed as single items.
A query scans the primary summary for items above the primary threshold,
then scans the tuple summary for tuples whose primary qualified and whose
count clears the correlated threshold.

Streams of 32-bit integers (the common case; the CLI's wire format) are
routed to a compiled array kernel; anything else runs on the generic
pure-Python summaries.  Both backends maintain the same structure and
eviction order, so results are identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Optional

import numpy as np

from .report import ChhReport
from .summaries import SpaceSavingSummary

_U32_MASK = 0xFFFFFFFF


class ParameterError(ValueError):
    """Thresholds or tolerances outside their admissible ranges."""


@dataclass(frozen=True)
class ChhParams:
    """Problem parameters: support thresholds and false-positive tolerances.

    Requires 0 < eps1 < phi1 < 1 and 0 < eps2 < phi2 < 1.
    """

    phi1: float
    phi2: float
    eps1: float
    eps2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.eps1 < self.phi1 < 1.0):
            raise ParameterError(
                f"need 0 < eps1 < phi1 < 1, got eps1={self.eps1}, phi1={self.phi1}")
        if not (0.0 < self.eps2 < self.phi2 < 1.0):
            raise ParameterError(
                f"need 0 < eps2 < phi2 < 1, got eps2={self.eps2}, phi2={self.phi2}")


@dataclass(frozen=True)
class ChhSizing:
    """Counter counts minimizing k1 + k2 subject to the error tolerances."""

    beta: float
    gamma: float
    k1: int
    k2: int


def plan_capacities(params: ChhParams) -> ChhSizing:
    """Smallest counter allocation meeting the tolerances of ``params``.

    The real-valued optimum sits at max(1/eps1, gamma + sqrt(beta*gamma));
    both capacities are rounded up, k2 recomputed from the integer k1,
    which can only tighten the guarantees.
    """
    beta = 1.0 / (params.eps2 * params.phi1)
    gamma = (params.eps2 + params.phi2) / (params.eps2 * params.phi1)
    k1 = math.ceil(max(1.0 / params.eps1, gamma + math.sqrt(beta * gamma)))
    k2 = math.ceil(beta * k1 / (k1 - gamma))
    return ChhSizing(beta=beta, gamma=gamma, k1=k1, k2=k2)


def _int_kernel_available() -> bool:
    try:
        from . import _sskernel  # noqa: F401
        return True
    except ImportError:
        return False


class CascadeSketch:
    """Cascaded Space Saving sketch for two-dimensional streams.

    Built either from problem parameters (which also become the default
    query thresholds) or from explicit counter counts for equal-space
    experiments, in which case thresholds are supplied at query time.
    """

    __slots__ = ("k1", "k2", "primary", "tuples", "n", "_packed",
                 "default_phi1", "default_phi2", "sizing")

    def __init__(self, k1: int, k2: int,
                 phi1: Optional[float] = None,
                 phi2: Optional[float] = None) -> None:
        if k1 < 1 or k2 < 1:
            raise ValueError(f"capacities must be >= 1, got k1={k1}, k2={k2}")
        self.k1 = k1
        self.k2 = k2
        self.primary = SpaceSavingSummary(k1)
        self.tuples = SpaceSavingSummary(k2)
        self.n = 0
        self._packed = False
        self.default_phi1 = phi1
        self.default_phi2 = phi2
        self.sizing: Optional[ChhSizing] = None

    @classmethod
    def from_params(cls, params: ChhParams) -> "CascadeSketch":
        sizing = plan_capacities(params)
        sketch = cls(sizing.k1, sizing.k2, phi1=params.phi1, phi2=params.phi2)
        sketch.sizing = sizing
        return sketch

    def update(self, x: Hashable, y: Hashable) -> None:
        if self._packed:
            self.primary.update(x)
            self.tuples.update((int(x) << 32) | int(y))
        else:
            self.primary.update(x)
            self.tuples.update((x, y))
        self.n += 1

    def update_many(self, xs, ys) -> None:
        if self.n == 0 and not self._packed:
            self._maybe_pack(xs, ys)
        if self._packed:
            xs64 = np.ascontiguousarray(xs, dtype=np.uint64)
            ys64 = np.ascontiguousarray(ys, dtype=np.uint64)
            if xs64.size and (int(xs64.max()) > _U32_MASK
                              or int(ys64.max()) > _U32_MASK):
                raise ValueError("integer fast path requires items < 2**32")
            self.primary.update_many(xs64)
            self.tuples.update_many((xs64 << np.uint64(32)) | ys64)
            self.n += len(xs64)
            return
        p_upd = self.primary.update
        t_upd = self.tuples.update
        count = 0
        for xy in zip(xs, ys):
            p_upd(xy[0])
            t_upd(xy)
            count += 1
        self.n += count

    def _maybe_pack(self, xs, ys) -> None:
        # Switch to the compiled uint64 backend when the very first batch is
        # integral and fits in 32 bits.  Decided once, before any update.
        try:
            xs64 = np.ascontiguousarray(xs, dtype=np.uint64)
            ys64 = np.ascontiguousarray(ys, dtype=np.uint64)
        except (TypeError, ValueError, OverflowError):
            return
        if xs64.size and (int(xs64.max()) > _U32_MASK
                          or int(ys64.max()) > _U32_MASK):
            return
        if not _int_kernel_available():
            return
        from ._sskernel import IntSpaceSavingSummary
        self.primary = IntSpaceSavingSummary(self.k1)
        self.tuples = IntSpaceSavingSummary(self.k2)
        self._packed = True

    def query(self, phi1: Optional[float] = None,
              phi2: Optional[float] = None) -> ChhReport:
        """Report primaries with count > phi1*n and, among their tuples,
        those with count > phi2*(primary estimate - n/k1).

        Both comparisons are strict.  Thresholds default to the ones the
        sketch was built with.
        """
        phi1 = self.default_phi1 if phi1 is None else phi1
        phi2 = self.default_phi2 if phi2 is None else phi2
        if phi1 is None or phi2 is None:
            raise ParameterError(
                "sketch built without default thresholds; pass phi1 and phi2")
        n = self.n
        slack = n / self.k1
        frequent = {}
        primaries = []
        for item, f in self.primary:
            if f > phi1 * n:
                frequent[item] = f
                primaries.append((item, f))
        chhs = []
        if self._packed:
            for key, f in self.tuples:
                r = key >> 32
                fr = frequent.get(r)
                if fr is not None and f > phi2 * (fr - slack):
                    chhs.append((r, key & _U32_MASK, f))
        else:
            for pair, f in self.tuples:
                fr = frequent.get(pair[0])
                if fr is not None and f > phi2 * (fr - slack):
                    chhs.append((pair[0], pair[1], f))
        return ChhReport(primaries=primaries, chhs=chhs)
