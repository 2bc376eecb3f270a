"""Opt-in accounting of explicit auxiliary allocations, in machine words.

Library code reports its deliberate allocations (tables, key arrays) here;
inside an ``auditing()`` block the peak outstanding word count is tracked.
Python object overhead is not modeled: the audit covers what the algorithms
choose to allocate, which is what the in-place contracts constrain.
"""

import contextlib

_active = None


class AllocationAudit:
    def __init__(self):
        self.current = 0
        self.peak = 0

    def add(self, words):
        self.current += words
        if self.current > self.peak:
            self.peak = self.current

    def remove(self, words):
        self.current -= words


def record(words: int) -> None:
    if _active is not None:
        _active.add(words)


def release(words: int) -> None:
    if _active is not None:
        _active.remove(words)


@contextlib.contextmanager
def auditing():
    global _active
    aud = AllocationAudit()
    prev, _active = _active, aud
    try:
        yield aud
    finally:
        _active = prev
