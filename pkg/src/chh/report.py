"""Query result container and its JSON/CSV serializations."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Optional


@dataclass
class ChhReport:
    """Result of a correlated-heavy-hitter query.

    ``primaries`` holds (item, estimated count) pairs; ``chhs`` holds
    (primary, secondary, estimated tuple count) triples.  Every triple's
    primary item also appears in ``primaries``.
    """

    primaries: list = field(default_factory=list)
    chhs: list = field(default_factory=list)

    def primary_set(self) -> set:
        return {p for p, _ in self.primaries}

    def chh_set(self) -> set:
        return {(p, s) for p, s, _ in self.chhs}

    def chh_freqs(self) -> dict:
        return {(p, s): f for p, s, f in self.chhs}

    def is_superset_of(self, other: "ChhReport") -> bool:
        return (self.primary_set() >= other.primary_set()
                and self.chh_set() >= other.chh_set())

    def to_dict(self) -> dict:
        return {
            "primaries": [{"primary": p, "est_freq": f}
                          for p, f in self.primaries],
            "chhs": [{"primary": p, "secondary": s, "est_freq": f}
                     for p, s, f in self.chhs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_json_lines(self) -> str:
        """One JSON record per correlated heavy hitter."""
        out = io.StringIO()
        for p, s, f in self.chhs:
            out.write(json.dumps(
                {"primary": p, "secondary": s, "est_freq": f}))
            out.write("\n")
        return out.getvalue()

    def to_csv(self, exact: Optional[Mapping] = None) -> str:
        """CSV rows, one per CHH.

        Column order is fixed: primary, secondary, est_freq and, when an
        exact frequency map is supplied, exact_freq.
        """
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        if exact is None:
            writer.writerow(["primary", "secondary", "est_freq"])
            for p, s, f in self.chhs:
                writer.writerow([p, s, f])
        else:
            writer.writerow(["primary", "secondary", "est_freq", "exact_freq"])
            for p, s, f in self.chhs:
                writer.writerow([p, s, f, exact.get((p, s), 0)])
        return out.getvalue()
