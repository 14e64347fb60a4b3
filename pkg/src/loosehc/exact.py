"""Exhaustive search for loose Hamilton cycles on small hypergraphs."""

from __future__ import annotations

import time

from .hypergraph import BITSET_SOFT_LIMIT, Hypergraph3, LooseCycle, validate_loose_cycle

EXACT_GUARD = 16


class SearchTimeout(Exception):
    """Raised when a search exceeds its time budget before deciding."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exact_loose_hc(H: Hypergraph3, time_budget: float | None = None, max_n: int = EXACT_GUARD):
    """Return a loose Hamilton cycle of H, or None if none exists.

    The search walks the cycle two vertices at a time: from the current
    junction j it picks a middle vertex m and the next junction j' with jmj'
    an edge. Rotation is fixed by putting vertex 0 at position 0 (0 is a
    junction) or position 1 (0 is a middle vertex); reflection by requiring
    the second junction to be smaller than the last one. A node is cut when
    some unused vertex has no edge left inside the still-available vertices.

    Raises SearchTimeout when ``time_budget`` seconds pass first.
    """
    n = H.n
    if n < 6 or n % 2:
        return None
    if n > max_n or n > BITSET_SOFT_LIMIT:
        raise ValueError(f"n={n} exceeds max_n={max_n}; pass a larger max_n to force")
    if H.min_degree(1) == 0:
        return None

    nb = H.pair_masks
    deadline = None if time_budget is None else time.monotonic() + time_budget
    full = (1 << n) - 1
    counter = [0]

    def check_time():
        counter[0] += 1
        if deadline is not None and counter[0] % 512 == 0 and time.monotonic() > deadline:
            raise SearchTimeout(f"budget of {time_budget}s exceeded")

    def coverable(free: int, avail: int) -> bool:
        # every free vertex still needs an edge with both partners available
        for w in _bits(free):
            rest = avail & ~(1 << w)
            row = nb[w]
            ok = False
            for p in _bits(rest):
                if row[p] & rest & ~(1 << p):
                    ok = True
                    break
            if not ok:
                return False
        return True

    seq: list[int] = []

    def extend(end: int, start: int, used: int, orient: bool) -> bool:
        check_time()
        free = full & ~used
        remaining = bin(free).count("1")
        if remaining == 1:
            last = free.bit_length() - 1
            if nb[end][last] >> start & 1 and (not orient or seq[2] < end):
                seq.append(last)
                return True
            return False
        if not coverable(free, free | (1 << end) | (1 << start)):
            return False
        row = nb[end]
        for m in _bits(free):
            cand = row[m] & free & ~(1 << m)
            for j in _bits(cand):
                seq.append(m)
                seq.append(j)
                if extend(j, start, used | (1 << m) | (1 << j), orient):
                    return True
                seq.pop()
                seq.pop()
        return False

    # vertex 0 is a junction at position 0; reflection fixed at the closing step
    seq = [0]
    if extend(0, 0, 1, True):
        return _finish(H, seq)
    # vertex 0 is a middle vertex: order (a, 0, b, ...); reflection swaps a and b
    for a in range(1, n):
        for b in _bits(nb[a][0] & ~((1 << (a + 1)) - 1)):
            seq = [a, 0, b]
            if extend(b, a, 1 | (1 << a) | (1 << b), False):
                return _finish(H, seq)
    return None


def _finish(H, seq):
    C = LooseCycle(tuple(seq))
    v = validate_loose_cycle(H, C, hamilton=True)
    if not v:
        raise AssertionError(f"solver produced an invalid cycle: {v.reason}")
    return C
