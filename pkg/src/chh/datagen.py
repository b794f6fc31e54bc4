"""Seeded synthetic two-dimensional Zipf streams and pair-file I/O.

Streams are pairs of 32-bit unsigned integers.  Both coordinates are Zipf
ranks pushed through seeded permutations of their universes; by default the
secondary permutation is additionally shifted per primary item so each
heavy primary gets its own set of heavy correlated secondaries.  Output is
a pure function of the spec: same spec, same bytes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

_PAIR_STRUCT = struct.Struct("<II")


class PairFileError(ValueError):
    """Malformed pair input; carries the byte or line offset of the fault."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True)
class StreamSpec:
    """Parameters of a synthetic stream.

    ``correlated=False`` switches to the plain-independent model where every
    primary shares a single secondary relabeling.
    """

    n: int
    rho: float = 1.0
    m1: int = 2 ** 20
    m2: int = 2 ** 20
    seed: int = 0
    correlated: bool = True

    def __post_init__(self) -> None:
        if self.n < 1 or self.m1 < 1 or self.m2 < 1:
            raise ValueError("n, m1 and m2 must all be >= 1")
        if self.rho < 0:
            raise ValueError(f"zipf skew must be >= 0, got {self.rho}")


def zipf_cdf(rho: float, m: int) -> np.ndarray:
    """Cumulative distribution of P(rank = i) proportional to i**-rho."""
    weights = np.arange(1, m + 1, dtype=np.float64) ** -rho
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    return cdf


def zipf_sample(rho: float, m: int, rng: np.random.Generator,
                size=None) -> np.ndarray:
    """Zipf ranks in [1, m]; scalar when ``size`` is None."""
    cdf = zipf_cdf(rho, m)
    u = rng.random(size)
    return np.searchsorted(cdf, u, side="right") + 1


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, vectorized over uint64.
    z = (z + np.uint64(0x9E3779B97F4A7C15)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def generate_stream(spec: StreamSpec) -> np.ndarray:
    """Return the stream as an (n, 2) uint32 array of (x, y) pairs."""
    rng = np.random.default_rng(spec.seed)
    cdf1 = zipf_cdf(spec.rho, spec.m1)
    cdf2 = zipf_cdf(spec.rho, spec.m2)
    rx = np.searchsorted(cdf1, rng.random(spec.n), side="right")
    ry = np.searchsorted(cdf2, rng.random(spec.n), side="right")
    perm1 = rng.permutation(spec.m1).astype(np.uint32)
    perm2 = rng.permutation(spec.m2).astype(np.uint32)
    x = perm1[rx] + np.uint32(1)
    if spec.correlated:
        # Per-primary permutation = per-primary rotation composed with the
        # global secondary permutation; O(m2) memory for any number of
        # distinct primaries.
        shift = _mix64(x.astype(np.uint64) ^ np.uint64(spec.seed * 0x9E3779B97F4A7C15 & 0xFFFFFFFFFFFFFFFF)) % np.uint64(spec.m2)
        ry = (ry.astype(np.uint64) + shift) % np.uint64(spec.m2)
    y = perm2[ry] + np.uint32(1)
    return np.column_stack((x, y)).astype(np.uint32)


# -- pair-file I/O ----------------------------------------------------------

def write_pairs_binary(path, pairs: np.ndarray) -> None:
    """Little-endian u32 x, u32 y, repeated."""
    np.ascontiguousarray(pairs, dtype="<u4").tofile(path)


def write_pairs_csv(path, pairs: np.ndarray) -> None:
    with open(path, "w") as fh:
        for x, y in pairs:
            fh.write(f"{x},{y}\n")


def read_pairs_binary(fh, chunk_pairs: int = 1 << 16):
    """Yield (xs, ys) uint32 chunk arrays from a binary pair stream.

    Raises PairFileError at the byte offset of the first incomplete field
    when the input does not end on a pair boundary.
    """
    offset = 0
    pending = b""
    while True:
        data = fh.read(chunk_pairs * 8)
        if not data:
            break
        data = pending + data
        usable = len(data) - (len(data) % 8)
        pending = data[usable:]
        if usable:
            arr = np.frombuffer(data[:usable], dtype="<u4")
            yield arr[0::2], arr[1::2]
        offset += usable
    if pending:
        raise PairFileError(
            f"truncated pair record at byte offset {offset + len(pending) - len(pending) % 4}",
            offset + len(pending) - len(pending) % 4)


def read_pairs_csv(fh, chunk_pairs: int = 1 << 16):
    """Yield (xs, ys) uint32 chunk arrays from "x,y" lines."""
    xs: list = []
    ys: list = []
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        try:
            x, y = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise PairFileError(f"bad pair at line {lineno}: {line!r}", lineno)
        xs.append(x)
        ys.append(y)
        if len(xs) >= chunk_pairs:
            yield np.asarray(xs, dtype=np.uint32), np.asarray(ys, dtype=np.uint32)
            xs, ys = [], []
    if xs:
        yield np.asarray(xs, dtype=np.uint32), np.asarray(ys, dtype=np.uint32)
