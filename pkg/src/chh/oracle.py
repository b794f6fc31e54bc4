"""Exact reference counting for two-dimensional streams.

Unbounded-memory ground truth: full hash-map counts of the primary and
tuple frequencies, and the exact correlated-heavy-hitter query both
approximate algorithms are scored against.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable

from .report import ChhReport

# Distinct-pair count above which callers should start worrying; the CLI
# warns when an input crosses it.
DEFAULT_DISTINCT_PAIR_CAP = 10 ** 8


class ExactCounts:
    """Exact frequencies of primaries and (primary, secondary) tuples."""

    __slots__ = ("n", "fx", "fxy")

    def __init__(self) -> None:
        self.n = 0
        self.fx: Counter = Counter()
        self.fxy: Counter = Counter()

    def ingest(self, x: Hashable, y: Hashable) -> None:
        self.n += 1
        self.fx[x] += 1
        self.fxy[(x, y)] += 1

    def ingest_many(self, xs, ys) -> None:
        pairs = list(zip(xs, ys))
        self.fxy.update(pairs)
        self.fx.update(xs)
        self.n += len(pairs)

    def query(self, phi1: float, phi2: float) -> ChhReport:
        """Exact answer: primaries with f_x > phi1*n and their tuples with
        f_xy > phi2*f_x (both strict)."""
        n = self.n
        frequent = {x: f for x, f in self.fx.items() if f > phi1 * n}
        primaries = sorted(frequent.items())
        chhs = []
        for (x, y), f in self.fxy.items():
            fx = frequent.get(x)
            if fx is not None and f > phi2 * fx:
                chhs.append((x, y, f))
        chhs.sort()
        return ChhReport(primaries=primaries, chhs=chhs)
