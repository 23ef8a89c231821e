"""GF(2) linear algebra on bit-packed row vectors.

Rows are Python integers; bit positions are coordinates.  Reduction uses
the highest set bit as pivot, so a reduced basis is in row echelon form
with strictly decreasing leading bits, which doubles as a canonical form
for subspaces.
"""
from __future__ import annotations

from typing import Iterable, Iterator


def rref(rows: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis of the span of `rows` (canonical)."""
    basis: list[int] = []  # kept sorted by descending leading bit
    for v in rows:
        v = _reduce(v, basis)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return tuple(_back_substitute(basis))


def _back_substitute(basis: list[int]) -> list[int]:
    out = list(basis)
    for i in range(len(out)):
        lead = 1 << (out[i].bit_length() - 1)
        for j in range(len(out)):
            if j != i and out[j] & lead:
                out[j] ^= out[i]
    out.sort(reverse=True)
    return out


def _reduce(v: int, basis: list[int]) -> int:
    for row in basis:
        lead = 1 << (row.bit_length() - 1)
        if v & lead:
            v ^= row
    return v


def reduce_vector(v: int, basis: tuple[int, ...]) -> int:
    """Reduce v modulo the span of an echelon basis."""
    return _reduce(v, list(basis))


def reduce_track(v: int, basis: tuple[int, ...]) -> tuple[int, int]:
    """Reduce v, also returning the combination mask over basis rows used."""
    combo = 0
    for i, row in enumerate(basis):
        lead = 1 << (row.bit_length() - 1)
        if v & lead:
            v ^= row
            combo |= 1 << i
    return v, combo


def in_span(v: int, basis: tuple[int, ...]) -> bool:
    return reduce_vector(v, basis) == 0


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def span(basis: tuple[int, ...]) -> Iterator[int]:
    """All 2^k vectors of the span, in Gray-free binary order."""
    k = len(basis)
    for mask in range(1 << k):
        v = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                v ^= basis[i]
            m >>= 1
            i += 1
        yield v


def solve(rows: list[int], rhs: list[int]) -> list[int] | None:
    """Solve a GF(2) linear system given as (coefficient-mask, bit) pairs.

    `rows[i]` is a mask over variables, `rhs[i]` the parity it must produce.
    Returns one solution as a list of bits, or None if inconsistent.
    """
    eqs = [(rows[i], rhs[i] & 1) for i in range(len(rows))]
    pivots: dict[int, tuple[int, int]] = {}  # pivot bit position -> equation
    for mask, b in eqs:
        # a pivot row's mask has its pivot as leading bit, so descending
        # order never revisits an already-cleared position
        for pos in sorted(pivots, reverse=True):
            if mask >> pos & 1:
                pm, pb = pivots[pos]
                mask ^= pm
                b ^= pb
        if mask == 0:
            if b:
                return None
            continue
        pos = mask.bit_length() - 1
        pivots[pos] = (mask, b)
    nvars = max((m.bit_length() for m, _ in pivots.values()), default=0)
    assign = [0] * nvars
    # ascending order: each equation only references strictly lower bits,
    # which are either already-assigned pivots or free variables (left 0)
    for pos in sorted(pivots):
        mask, b = pivots[pos]
        acc = b
        rest = mask & ~(1 << pos)
        while rest:
            low = rest & -rest
            acc ^= assign[low.bit_length() - 1]
            rest ^= low
        assign[pos] = acc
    return assign
