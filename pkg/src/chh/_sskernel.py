"""Array-backed Space Saving kernel for integer item streams.

Same structure and tie-breaking as ``summaries.SpaceSavingSummary`` -- a
doubly linked list of frequency buckets, FIFO eviction inside the minimum
bucket -- but laid out in flat numpy arrays and compiled with numba so bulk
updates run at native speed.  Items are uint64 keys; callers pack wider
identities (e.g. a pair of u32) into one key.

The pure-Python class stays the reference implementation; the test suite
checks both produce identical states on random streams.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_NIL = -1
_TOMB = -2
_HASH_C = np.uint64(0x9E3779B97F4A7C15)

# meta slots
_OCC = 0        # occupied counters
_HEADB = 1      # minimum bucket id
_FREETOP = 2    # free-bucket stack top
_TOMBS = 3      # tombstones in the hash table
_SHIFT = 4      # 64 - log2(table size)
_CAP = 5        # capacity k


class SsState:
    """Flat-array Space Saving state; mutated in place by the kernel."""

    __slots__ = ("meta", "key", "cnt_prev", "cnt_next", "cnt_bucket",
                 "bkt_freq", "bkt_head", "bkt_tail", "bkt_prev", "bkt_next",
                 "bkt_free", "ht_key", "ht_val")

    def __init__(self, capacity: int) -> None:
        k = capacity
        nb = k + 2
        size = 8
        while size < 4 * k:
            size *= 2
        self.meta = np.zeros(8, dtype=np.int64)
        self.meta[_HEADB] = _NIL
        self.meta[_SHIFT] = 64 - int(size).bit_length() + 1
        self.meta[_CAP] = k
        self.key = np.zeros(k, dtype=np.uint64)
        self.cnt_prev = np.full(k, _NIL, dtype=np.int64)
        self.cnt_next = np.full(k, _NIL, dtype=np.int64)
        self.cnt_bucket = np.full(k, _NIL, dtype=np.int64)
        self.bkt_freq = np.zeros(nb, dtype=np.int64)
        self.bkt_head = np.full(nb, _NIL, dtype=np.int64)
        self.bkt_tail = np.full(nb, _NIL, dtype=np.int64)
        self.bkt_prev = np.full(nb, _NIL, dtype=np.int64)
        self.bkt_next = np.full(nb, _NIL, dtype=np.int64)
        self.bkt_free = np.arange(nb - 1, -1, -1, dtype=np.int64)
        self.meta[_FREETOP] = nb
        self.ht_key = np.zeros(size, dtype=np.uint64)
        self.ht_val = np.full(size, _NIL, dtype=np.int64)

    def arrays(self) -> tuple:
        return (self.meta, self.key, self.cnt_prev, self.cnt_next,
                self.cnt_bucket, self.bkt_freq, self.bkt_head, self.bkt_tail,
                self.bkt_prev, self.bkt_next, self.bkt_free,
                self.ht_key, self.ht_val)


@njit(cache=True)
def _ht_find(ht_key, ht_val, shift, key):
    mask = ht_val.shape[0] - 1
    i = np.int64((key * _HASH_C) >> np.uint64(shift)) & mask
    while True:
        v = ht_val[i]
        if v == _NIL:
            return np.int64(_NIL)
        if v != _TOMB and ht_key[i] == key:
            return i
        i = (i + 1) & mask


@njit(cache=True)
def _ht_insert(meta, ht_key, ht_val, key, val):
    mask = ht_val.shape[0] - 1
    i = np.int64((key * _HASH_C) >> np.uint64(meta[_SHIFT])) & mask
    while True:
        v = ht_val[i]
        if v == _NIL or v == _TOMB:
            if v == _TOMB:
                meta[_TOMBS] -= 1
            ht_key[i] = key
            ht_val[i] = val
            return
        i = (i + 1) & mask


@njit(cache=True)
def _ht_rehash(meta, key, ht_key, ht_val):
    ht_val[:] = _NIL
    meta[_TOMBS] = 0
    for c in range(meta[_OCC]):
        _ht_insert(meta, ht_key, ht_val, key[c], c)


@njit(cache=True)
def _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail, b, c):
    t = bkt_tail[b]
    cnt_prev[c] = t
    cnt_next[c] = _NIL
    cnt_bucket[c] = b
    if t == _NIL:
        bkt_head[b] = c
    else:
        cnt_next[t] = c
    bkt_tail[b] = c


@njit(cache=True)
def _bkt_remove(cnt_prev, cnt_next, bkt_head, bkt_tail, b, c):
    p = cnt_prev[c]
    n = cnt_next[c]
    if p == _NIL:
        bkt_head[b] = n
    else:
        cnt_next[p] = n
    if n == _NIL:
        bkt_tail[b] = p
    else:
        cnt_prev[n] = p


@njit(cache=True)
def _bkt_unlink(meta, bkt_prev, bkt_next, bkt_free, b):
    p = bkt_prev[b]
    n = bkt_next[b]
    if p == _NIL:
        meta[_HEADB] = n
    else:
        bkt_next[p] = n
    if n != _NIL:
        bkt_prev[n] = p
    bkt_free[meta[_FREETOP]] = b
    meta[_FREETOP] += 1


@njit(cache=True)
def _bkt_new_after(meta, bkt_freq, bkt_head, bkt_tail, bkt_prev, bkt_next,
                   bkt_free, prev, nxt, f):
    meta[_FREETOP] -= 1
    b = bkt_free[meta[_FREETOP]]
    bkt_freq[b] = f
    bkt_head[b] = _NIL
    bkt_tail[b] = _NIL
    bkt_prev[b] = prev
    bkt_next[b] = nxt
    if prev == _NIL:
        meta[_HEADB] = b
    else:
        bkt_next[prev] = b
    if nxt != _NIL:
        bkt_prev[nxt] = b
    return b


@njit(cache=True)
def _place(meta, cnt_prev, cnt_next, cnt_bucket, bkt_freq, bkt_head, bkt_tail,
           bkt_prev, bkt_next, bkt_free, c, b, emptied, f):
    # Counter c has been detached from bucket b (whose count is f - 1) and
    # must land in a bucket of count f; `emptied` says b has no counters left.
    nxt = bkt_next[b]
    if emptied:
        if nxt != _NIL and bkt_freq[nxt] == f:
            _bkt_unlink(meta, bkt_prev, bkt_next, bkt_free, b)
            _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail,
                        nxt, c)
        else:
            bkt_freq[b] = f
            _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail,
                        b, c)
    elif nxt != _NIL and bkt_freq[nxt] == f:
        _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail, nxt, c)
    else:
        nb = _bkt_new_after(meta, bkt_freq, bkt_head, bkt_tail, bkt_prev,
                            bkt_next, bkt_free, b, nxt, f)
        _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail, nb, c)


@njit(cache=True)
def ss_update_many(meta, key, cnt_prev, cnt_next, cnt_bucket, bkt_freq,
                   bkt_head, bkt_tail, bkt_prev, bkt_next, bkt_free,
                   ht_key, ht_val, items):
    cap = meta[_CAP]
    rehash_at = ht_val.shape[0] >> 2
    for idx in range(items.shape[0]):
        it = items[idx]
        slot = _ht_find(ht_key, ht_val, meta[_SHIFT], it)
        if slot != _NIL:
            # Monitored: move its counter up by one.
            c = ht_val[slot]
            b = cnt_bucket[c]
            f = bkt_freq[b] + 1
            _bkt_remove(cnt_prev, cnt_next, bkt_head, bkt_tail, b, c)
            _place(meta, cnt_prev, cnt_next, cnt_bucket, bkt_freq, bkt_head,
                   bkt_tail, bkt_prev, bkt_next, bkt_free, c, b,
                   bkt_head[b] == _NIL, f)
        elif meta[_OCC] < cap:
            # Install in a fresh slot at count one.
            c = meta[_OCC]
            meta[_OCC] = c + 1
            key[c] = it
            hb = meta[_HEADB]
            if hb == _NIL or bkt_freq[hb] != 1:
                hb = _bkt_new_after(meta, bkt_freq, bkt_head, bkt_tail,
                                    bkt_prev, bkt_next, bkt_free, _NIL, hb, 1)
            _bkt_append(cnt_prev, cnt_next, cnt_bucket, bkt_head, bkt_tail,
                        hb, c)
            _ht_insert(meta, ht_key, ht_val, it, c)
        else:
            # Full: replace the oldest counter of the minimum bucket.
            hb = meta[_HEADB]
            c = bkt_head[hb]
            f = bkt_freq[hb] + 1
            vslot = _ht_find(ht_key, ht_val, meta[_SHIFT], key[c])
            ht_val[vslot] = _TOMB
            meta[_TOMBS] += 1
            _bkt_remove(cnt_prev, cnt_next, bkt_head, bkt_tail, hb, c)
            key[c] = it
            _place(meta, cnt_prev, cnt_next, cnt_bucket, bkt_freq, bkt_head,
                   bkt_tail, bkt_prev, bkt_next, bkt_free, c, hb,
                   bkt_head[hb] == _NIL, f)
            if meta[_TOMBS] > rehash_at:
                _ht_rehash(meta, key, ht_key, ht_val)
            else:
                _ht_insert(meta, ht_key, ht_val, it, c)


@njit(cache=True)
def ss_extract(meta, key, cnt_next, bkt_freq, bkt_head, bkt_next):
    # Counters in ascending count order, FIFO within a bucket.
    n = meta[_OCC]
    out_key = np.empty(n, dtype=np.uint64)
    out_freq = np.empty(n, dtype=np.int64)
    i = 0
    b = meta[_HEADB]
    while b != _NIL:
        f = bkt_freq[b]
        c = bkt_head[b]
        while c != _NIL:
            out_key[i] = key[c]
            out_freq[i] = f
            i += 1
            c = cnt_next[c]
        b = bkt_next[b]
    return out_key, out_freq


class IntSpaceSavingSummary:
    """Space Saving over uint64 keys, numba-accelerated.

    API-compatible with :class:`chh.summaries.SpaceSavingSummary` for the
    operations the sketches use.
    """

    __slots__ = ("capacity", "_s")

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._s = SsState(capacity)

    def __len__(self) -> int:
        return int(self._s.meta[_OCC])

    def update(self, item: int) -> None:
        self.update_many(np.asarray([item], dtype=np.uint64))

    def update_many(self, items) -> None:
        arr = np.ascontiguousarray(items, dtype=np.uint64)
        ss_update_many(*self._s.arrays(), arr)

    def estimate(self, item: int):
        s = self._s
        slot = _ht_find(s.ht_key, s.ht_val, s.meta[_SHIFT], np.uint64(item))
        if slot == _NIL:
            return None
        return int(s.bkt_freq[s.cnt_bucket[s.ht_val[slot]]])

    def __contains__(self, item: int) -> bool:
        return self.estimate(item) is not None

    def min_count(self) -> int:
        s = self._s
        if s.meta[_OCC] < self.capacity:
            return 0
        return int(s.bkt_freq[s.meta[_HEADB]])

    def extract(self) -> tuple:
        """(keys, counts) arrays in ascending count order."""
        s = self._s
        return ss_extract(s.meta, s.key, s.cnt_next, s.bkt_freq,
                          s.bkt_head, s.bkt_next)

    def __iter__(self):
        keys, freqs = self.extract()
        return iter(zip(keys.tolist(), freqs.tolist()))

    def total(self) -> int:
        _, freqs = self.extract()
        return int(freqs.sum())
