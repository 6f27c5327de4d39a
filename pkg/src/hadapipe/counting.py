"""Stored-entry accounting for the memory-consumption comparison.

Counters track the number of logical sign entries held by live SignMatrix
values while a generator or builder runs.  They measure the algorithm's own
working set: sign matrices register on construction, and the streaming
generators release entries at the points where their algorithm drops a
value.  Scratch numpy arrays (transient dense views, byte buffers) are not
matrix values and are never counted.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager


class AllocationCounter:
    """Current / peak / cumulative counts of stored sign entries."""

    __slots__ = ("current_entries", "peak_entries", "total_entries")

    def __init__(self):
        self.current_entries = 0
        self.peak_entries = 0
        self.total_entries = 0

    def add(self, n):
        self.current_entries += n
        self.total_entries += n
        if self.current_entries > self.peak_entries:
            self.peak_entries = self.current_entries

    def remove(self, n):
        self.current_entries -= n

    def __repr__(self):
        return (f"AllocationCounter(current={self.current_entries}, "
                f"peak={self.peak_entries}, total={self.total_entries})")


_lock = threading.Lock()
_active: list[AllocationCounter] = []


def record_alloc(n: int) -> None:
    if not _active:
        return
    with _lock:
        for counter in _active:
            counter.add(n)


def record_free(n: int) -> None:
    if not _active:
        return
    with _lock:
        for counter in _active:
            counter.remove(n)


@contextmanager
def measure_allocations():
    """Context manager yielding a fresh counter wired to all sign-matrix
    construction that happens inside the block."""
    counter = AllocationCounter()
    with _lock:
        _active.append(counter)
    try:
        yield counter
    finally:
        with _lock:
            _active.remove(counter)
