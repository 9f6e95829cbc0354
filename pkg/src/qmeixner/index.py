"""Multi-indices n = (n_1, ..., n_r)."""
from __future__ import annotations

from typing import Iterable


class MultiIndex(tuple):
    """A tuple of non-negative integers with the usual multi-index helpers.

    Components are 0-based in code: ``n[0]`` is n_1.
    """

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise ValueError(f"multi-index entries must be non-negative: {entries}")
        return super().__new__(cls, entries)

    @property
    def r(self) -> int:
        return len(self)

    @property
    def norm(self) -> int:
        """|n| = n_1 + ... + n_r."""
        return sum(self)

    def partial(self, i: int) -> int:
        """|n|_i = n_1 + ... + n_{i-1} for the 0-based component ``i``."""
        return sum(self[:i])

    def raised(self, k: int) -> MultiIndex:
        return MultiIndex(e + (j == k) for j, e in enumerate(self))

    def lowered(self, k: int) -> MultiIndex:
        if self[k] == 0:
            raise ValueError(f"cannot lower component {k} of {tuple(self)}")
        return MultiIndex(e - (j == k) for j, e in enumerate(self))

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


def as_index(n, r: int) -> MultiIndex:
    if isinstance(n, int):
        n = (n,)
    n = MultiIndex(n)
    if len(n) != r:
        raise ValueError(f"multi-index {tuple(n)} has length {len(n)}, expected {r}")
    return n


def unit(r: int, k: int) -> MultiIndex:
    return MultiIndex(int(j == k) for j in range(r))


def indices_up_to(r: int, max_order: int):
    """All multi-indices of length r with |n| <= max_order, in graded order."""
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield prefix
            return
        for e in range(remaining + 1):
            yield from rec(prefix + (e,), remaining - e, slots - 1)

    out = [MultiIndex(t) for t in rec((), max_order, r)]
    out.sort(key=lambda m: (m.norm, tuple(-e for e in m)))
    return out
