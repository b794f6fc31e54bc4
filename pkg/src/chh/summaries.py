"""Counter-based frequency summaries.

Two classic fixed-capacity sketches over opaque hashable items:

* :class:`SpaceSavingSummary` -- overestimates frequencies; on overflow the
  minimum counter's item is replaced and its count incremented.  Counters are
  kept in a doubly linked list of frequency buckets so every update touches a
  constant number of nodes regardless of capacity.
* :class:`MisraGriesSummary` -- underestimates frequencies; on overflow every
  counter is decremented and zeroed counters are evicted.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import Callable, Hashable, Iterator, Optional


class _Bucket:
    """Doubly linked list node holding all counters with the same count."""

    __slots__ = ("freq", "items", "prev", "next")

    def __init__(self, freq: int) -> None:
        self.freq = freq
        # FIFO-ordered: the first key is the one least recently moved into
        # this bucket, which is the eviction victim at the minimum.  An
        # OrderedDict keeps popping the head O(1) no matter how much churn
        # the bucket has seen (a plain dict never compacts dead slots).
        self.items: OrderedDict = OrderedDict()
        self.prev: Optional[_Bucket] = None
        self.next: Optional[_Bucket] = None


class SpaceSavingSummary:
    """Fixed-capacity summary with worst-case constant-time updates.

    Tracks at most ``capacity`` distinct items.  For any stream of length N:

    * the counts of the occupied counters sum to exactly N;
    * every tracked item's count overestimates its true frequency by at most
      the minimum count, which itself never exceeds N / capacity.
    """

    __slots__ = ("capacity", "_where", "_head", "ops")

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._where: dict = {}          # item -> _Bucket
        self._head: Optional[_Bucket] = None  # minimum-count bucket
        self.ops = 0                    # structural operations, for tests

    def __len__(self) -> int:
        return len(self._where)

    def __contains__(self, item: Hashable) -> bool:
        return item in self._where

    def update(self, item: Hashable) -> None:
        """Process one stream item."""
        where = self._where
        b = where.get(item)
        if b is not None:
            # Monitored: move the counter up by one.
            f = b.freq + 1
            nxt = b.next
            del b.items[item]
            if b.items:
                if nxt is not None and nxt.freq == f:
                    nxt.items[item] = None
                    where[item] = nxt
                else:
                    nb = _Bucket(f)
                    nb.items[item] = None
                    self._link_after(nb, b, nxt)
                    where[item] = nb
                    self.ops += 1
            elif nxt is not None and nxt.freq == f:
                self._unlink(b)
                nxt.items[item] = None
                where[item] = nxt
            else:
                # Bucket emptied and no neighbour matches: bump in place.
                b.freq = f
                b.items[item] = None
            self.ops += 1
            return
        if len(where) < self.capacity:
            # Free slot: install at count one.
            head = self._head
            if head is None or head.freq != 1:
                nb = _Bucket(1)
                nb.next = head
                if head is not None:
                    head.prev = nb
                self._head = nb
                head = nb
                self.ops += 1
            head.items[item] = None
            where[item] = head
            self.ops += 1
            return
        # Full: replace the oldest occupant of the minimum bucket.
        head = self._head
        victim, _ = head.items.popitem(last=False)
        del where[victim]
        self.ops += 1
        f = head.freq + 1
        nxt = head.next
        prev: Optional[_Bucket] = head
        if not head.items:
            self._unlink(head)
            prev = None
        if nxt is not None and nxt.freq == f:
            nxt.items[item] = None
            where[item] = nxt
        else:
            nb = _Bucket(f)
            nb.items[item] = None
            self._link_after(nb, prev, nxt)
            where[item] = nb
            self.ops += 1
        self.ops += 1

    def update_many(self, items) -> None:
        upd = self.update
        for item in items:
            upd(item)

    def estimate(self, item: Hashable) -> Optional[int]:
        """Estimated count of ``item``, or None if it is not tracked."""
        b = self._where.get(item)
        return None if b is None else b.freq

    def min_count(self) -> int:
        """Minimum count among the counters; 0 while the summary is not full."""
        if len(self._where) < self.capacity:
            return 0
        return self._head.freq

    def __iter__(self) -> Iterator[tuple]:
        """Yield each (item, estimated count) pair exactly once."""
        b = self._head
        while b is not None:
            for item in b.items:
                yield item, b.freq
            b = b.next

    def total(self) -> int:
        return sum(f for _, f in self)

    # -- bucket-list plumbing ------------------------------------------------

    def _link_after(self, nb: _Bucket, prev: Optional[_Bucket],
                    nxt: Optional[_Bucket]) -> None:
        nb.prev = prev
        nb.next = nxt
        if prev is not None:
            prev.next = nb
        else:
            self._head = nb
        if nxt is not None:
            nxt.prev = nb

    def _unlink(self, b: _Bucket) -> None:
        if b.prev is not None:
            b.prev.next = b.next
        else:
            self._head = b.next
        if b.next is not None:
            b.next.prev = b.prev
        self.ops += 1


class MisraGriesSummary:
    """Fixed-capacity decrement-all counter set.

    Counts are underestimates: for any item, the true frequency exceeds the
    tracked count by at most N / capacity.
    """

    __slots__ = ("capacity", "counts")

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.counts: dict = {}

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, item: Hashable) -> bool:
        return item in self.counts

    def update(self, item: Hashable) -> None:
        counts = self.counts
        if item in counts:
            counts[item] += 1
        elif len(counts) < self.capacity:
            counts[item] = 1
        else:
            # The incoming item is not installed; it only pays for the
            # global decrement.
            self.decrement_all()

    def decrement_all(self,
                      hook: Optional[Callable[[Hashable], None]] = None) -> None:
        """Decrement every count, evicting zeros.

        ``hook`` is invoked once per surviving entry, after its decrement.
        Entries that reach zero are evicted and never see the hook; the
        nested baseline relies on this ordering.
        """
        counts = self.counts
        for item in list(counts):
            c = counts[item] - 1
            if c == 0:
                del counts[item]
            else:
                counts[item] = c
                if hook is not None:
                    hook(item)

    def estimate(self, item: Hashable) -> Optional[int]:
        return self.counts.get(item)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.counts.items())
