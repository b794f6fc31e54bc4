"""Misra-Gries based baseline for correlated heavy hitters.

A table of primary counters, each carrying an embedded Misra-Gries summary
of the secondaries seen with that primary.  Deliberately kept simple; its
relative slowness versus the cascaded sketch is the point of comparison,
so no fast path is provided.
"""

from __future__ import annotations

import math
import random
from typing import Hashable, Optional, Tuple

from .csschh import ChhParams, ParameterError
from .report import ChhReport
from .summaries import MisraGriesSummary


def plan_capacities(params: ChhParams) -> Tuple[int, int]:
    """Counter counts (s1, s2) for the baseline; needs eps1 <= phi1/2.

    With alpha = (1+phi2)/(phi1-eps1): when eps1 >= eps2/(2*alpha) use
    s1 = 2*alpha/eps2, s2 = 2/eps2; otherwise s1 = 1/eps1 and
    s2 = 1/(eps2 - alpha*eps1).  Rounded up.
    """
    if params.eps1 > params.phi1 / 2.0:
        raise ParameterError(
            f"baseline requires eps1 <= phi1/2, got eps1={params.eps1}, "
            f"phi1={params.phi1}")
    alpha = (1.0 + params.phi2) / (params.phi1 - params.eps1)
    if params.eps1 >= params.eps2 / (2.0 * alpha):
        s1 = math.ceil(2.0 * alpha / params.eps2)
        s2 = math.ceil(2.0 / params.eps2)
    else:
        s1 = math.ceil(1.0 / params.eps1)
        s2 = math.ceil(1.0 / (params.eps2 - alpha * params.eps1))
    return s1, s2


class _Entry:
    __slots__ = ("freq", "secondaries")

    def __init__(self, freq: int, secondaries: MisraGriesSummary) -> None:
        self.freq = freq
        self.secondaries = secondaries


class NestedMgSketch:
    """Nested Misra-Gries tracker with s1 primary and s2-per-primary counters.

    The overflow path decrements every primary counter and, for each
    survivor, one randomly chosen nonzero secondary counter, so the
    secondary counts within a primary never sum past the primary's count.
    Deterministic for a fixed seed.
    """

    __slots__ = ("s1", "s2", "table", "n", "_rng")

    def __init__(self, s1: int, s2: int, seed: int = 0) -> None:
        if s1 < 1 or s2 < 1:
            raise ValueError(f"capacities must be >= 1, got s1={s1}, s2={s2}")
        self.s1 = s1
        self.s2 = s2
        self.table: dict = {}   # primary -> _Entry
        self.n = 0
        self._rng = random.Random(seed)

    @classmethod
    def from_params(cls, params: ChhParams, seed: int = 0) -> "NestedMgSketch":
        s1, s2 = plan_capacities(params)
        return cls(s1, s2, seed=seed)

    def update(self, x: Hashable, y: Hashable) -> None:
        self.n += 1
        table = self.table
        entry = table.get(x)
        if entry is not None:
            entry.freq += 1
            sec = entry.secondaries.counts
            if y in sec:
                sec[y] += 1
            elif len(sec) < self.s2:
                sec[y] = 1
            else:
                entry.secondaries.decrement_all()
            return
        if len(table) < self.s1:
            secondaries = MisraGriesSummary(self.s2)
            secondaries.counts[y] = 1
            table[x] = _Entry(1, secondaries)
            return
        # Table full and x unknown: decrement every primary; for survivors
        # also knock one unit off a random nonzero secondary.  x itself is
        # not installed this step; a freed slot serves a later arrival.
        rng = self._rng
        for d in list(table):
            entry = table[d]
            entry.freq -= 1
            if entry.freq == 0:
                del table[d]
                continue
            sec = entry.secondaries.counts
            if sec:
                keys = list(sec)
                s = keys[rng.randrange(len(keys))]
                c = sec[s] - 1
                if c == 0:
                    del sec[s]
                else:
                    sec[s] = c

    def update_many(self, xs, ys) -> None:
        upd = self.update
        for x, y in zip(xs, ys):
            upd(x, y)

    def query(self, phi1: float, phi2: float) -> ChhReport:
        """Report primaries with count >= (phi1 - 1/s1)*n and their
        secondaries with count >= (phi2 - 1/s2)*primary - n/s1.

        Comparisons are non-strict, compensating for underestimation.
        """
        n = self.n
        p_thresh = (phi1 - 1.0 / self.s1) * n
        primaries = []
        chhs = []
        for d, entry in self.table.items():
            fd = entry.freq
            if fd < p_thresh:
                continue
            primaries.append((d, fd))
            s_thresh = (phi2 - 1.0 / self.s2) * fd - n / self.s1
            for s, fds in entry.secondaries.counts.items():
                if fds >= s_thresh:
                    chhs.append((d, s, fds))
        return ChhReport(primaries=primaries, chhs=chhs)
