"""Tight paths, M-tilings, rounding fractional tilings, and loose path tilings.

Vertex sets are handled as Python int bitmasks throughout; ``H.pair_masks``
gives, for a pair (a, b), the mask of all c with abc an edge.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

import numpy as np

from .constructions import M_EDGES, L29Instance, l29_host
from .fractional import (
    FractionalTiling, canonical_M_weights, search_L29_fractional, validate_fractional_tiling,
)
from .hypergraph import Hypergraph3, LoosePath, TightPath, validate_loose_path
from .regularity import Partition, cluster_hypergraph, random_balanced_partition


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


# ---------------------------------------------------------------------------
# tight paths


def greedy_tight_path(H: Hypergraph3, d) -> TightPath:
    """Trim low-codegree pairs to a fixpoint, then grow a maximal tight path.

    With m = |V(H)|, every edge on a pair of codegree in (0, 2dm) is removed
    until no such pair is left. A tight path is then started from the
    smallest surviving edge and extended at both ends while possible. If
    e(H) >= d m^3 the path has at least 2(dm + 1) vertices; that bound is
    asserted whenever the hypothesis holds.
    """
    d = _frac(d)
    m = H.n
    thresh = 2 * d * m
    edges = set(H.edges)
    co: dict[tuple[int, int], set] = {}
    for e in edges:
        a, b, c = e
        for p in ((a, b), (a, c), (b, c)):
            co.setdefault(p, set()).add(e)
    queue = deque(p for p, es in co.items() if 0 < len(es) < thresh)
    while queue:
        p = queue.popleft()
        es = co.get(p)
        if not es or len(es) >= thresh:
            continue
        for e in list(es):
            edges.discard(e)
            a, b, c = e
            for q in ((a, b), (a, c), (b, c)):
                co[q].discard(e)
                if 0 < len(co[q]) < thresh:
                    queue.append(q)
    hyp = len(H.edges) >= d * m**3
    if not edges:
        assert not hyp, "trimming emptied a hypergraph with at least d m^3 edges"
        return TightPath(())

    def third(a, b, used):
        key = (a, b) if a < b else (b, a)
        cands = [x for e in co.get(key, ()) for x in e if x not in (a, b) and x not in used]
        return min(cands) if cands else None

    path = list(min(edges))
    used = set(path)
    for _ in range(2):
        while True:
            w = third(path[-2], path[-1], used)
            if w is None:
                break
            path.append(w)
            used.add(w)
        path.reverse()
    P = TightPath(tuple(path))
    if hyp:
        assert len(P) >= 2 * (d * m + 1), f"tight path of {len(P)} vertices below 2(dm+1)"
    return P


# ---------------------------------------------------------------------------
# M copies


@dataclass
class MTiling:
    """Vertex-disjoint copies of M; each copy lists 8 host vertices in role order."""

    copies: list[tuple[int, ...]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def covered(self) -> set[int]:
        return {v for c in self.copies for v in c}

    def __len__(self):
        return len(self.copies)


def validate_m_tiling(H: Hypergraph3, T: MTiling) -> list[str]:
    """Empty list when every copy embeds M and copies are disjoint."""
    problems = []
    seen: set[int] = set()
    for i, c in enumerate(T.copies):
        if len(c) != 8 or len(set(c)) != 8:
            problems.append(f"copy {i}: not 8 distinct vertices")
            continue
        for e in M_EDGES:
            if not H.has_edge(*(c[r] for r in e)):
                problems.append(f"copy {i}: edge {e} missing")
        if seen & set(c):
            problems.append(f"copy {i}: overlaps an earlier copy")
        seen |= set(c)
    return problems


def find_M_copy_in_triple(H: Hypergraph3, parts, i: int, avail: int | None = None, node_budget: int = 200_000):
    """A copy of M with two vertices in parts[i] and three in each other class.

    Searches for a crossing tight path on eight vertices whose classes cycle
    (j, k, i, j, k, i, j, k); its first eight vertices carry M in role order.
    Only vertices in ``avail`` (a bitmask, default all) are used. Returns the
    8-tuple or None.
    """
    cm = [_mask(p) for p in parts]
    if avail is None:
        avail = cm[0] | cm[1] | cm[2]
    j, k = [c for c in range(3) if c != i]
    nb = H.pair_masks
    budget = [node_budget]
    for order in ((j, k, i), (k, j, i)):
        seq = [order[p % 3] for p in range(8)]

        def dfs(path, free):
            budget[0] -= 1
            if budget[0] < 0:
                return None
            if len(path) == 8:
                return tuple(path)
            cand = nb[path[-2]][path[-1]] & free & cm[seq[len(path)]]
            for w in _bits(cand):
                path.append(w)
                got = dfs(path, free & ~(1 << w))
                if got:
                    return got
                path.pop()
            return None

        for a in _bits(avail & cm[seq[0]]):
            rest = avail & ~(1 << a)
            for b in _bits(rest & cm[seq[1]]):
                if nb[a][b] & rest & cm[seq[2]]:
                    got = dfs([a, b], rest & ~(1 << b))
                    if got:
                        return got
            if budget[0] < 0:
                return None
    return None


def m_tile_quotas(sizes, eps) -> list[Fraction]:
    """t_i = (1 - eps)(3|V_j| + 3|V_k| - 5|V_i|)/8 as exact fractions."""
    eps = _frac(eps)
    s = [Fraction(x) for x in sizes]
    return [(1 - eps) * (3 * (sum(s) - s[i]) - 5 * s[i]) / 8 for i in range(3)]


@dataclass
class MTileReport:
    quotas: list[int]
    extracted: list[int]
    uncovered: list[int]
    stalls: list[int]
    flags: list[str]

    @property
    def uncovered_total(self) -> int:
        return sum(self.uncovered)


def m_tile_regular_triple(H: Hypergraph3, parts, eps, d, top_up: bool = True) -> tuple[MTiling, MTileReport]:
    """Tile the triple with M copies: quota phase, then an optional top-up.

    ``parts`` must satisfy |V1| >= |V2| >= |V3| and 5|V1| <= 3(|V2| + |V3|),
    and d >= 2 eps. The quota phase takes floor(t_i) copies of each profile,
    round robin. The top-up phase keeps extracting copies that take two
    vertices from the class with fewest remaining vertices.
    """
    eps, d = _frac(eps), _frac(d)
    sizes = [len(p) for p in parts]
    if not sizes[0] >= sizes[1] >= sizes[2]:
        raise ValueError(f"class sizes {sizes} must be non-increasing")
    if 5 * sizes[0] > 3 * (sizes[1] + sizes[2]):
        raise ValueError(f"class sizes {sizes} violate 5|V1| <= 3(|V2|+|V3|)")
    if d < 2 * eps:
        raise ValueError("need d >= 2 eps")
    flags = []
    if 2 * eps**2 * sizes[0] <= 7:
        flags.append("small-m")  # below the size where the quotas are guaranteed
    quotas = [max(0, floor(t)) for t in m_tile_quotas(sizes, eps)]
    cm = [_mask(p) for p in parts]
    avail = cm[0] | cm[1] | cm[2]
    copies: list[tuple[int, ...]] = []
    got = [0, 0, 0]
    stalls = [0, 0, 0]
    live = [q > 0 for q in quotas]
    while any(live):
        for i in range(3):
            if not live[i]:
                continue
            c = find_M_copy_in_triple(H, parts, i, avail)
            if c is None:
                stalls[i] += 1
                live[i] = False
                continue
            copies.append(c)
            avail &= ~_mask(c)
            got[i] += 1
            if got[i] >= quotas[i]:
                live[i] = False
    if top_up:
        while True:
            left = [(avail & m).bit_count() for m in cm]
            placed = False
            for i in sorted(range(3), key=lambda c: (left[c], c)):
                if left[i] < 2 or min(left[c] for c in range(3) if c != i) < 3:
                    continue
                c = find_M_copy_in_triple(H, parts, i, avail)
                if c is not None:
                    copies.append(c)
                    avail &= ~_mask(c)
                    got[i] += 1
                    placed = True
                    break
            if not placed:
                break
    uncovered = [(avail & m).bit_count() for m in cm]
    return (
        MTiling(copies, {"kind": "regular-triple"}),
        MTileReport(quotas, got, uncovered, stalls, flags),
    )


def _embeddings_containing(nb, avail: int, v: int, role: int):
    """All M embeddings inside ``avail`` with vertex v in the given role."""
    order = sorted(range(8), key=lambda r: (abs(r - role), r))
    # edges to check when a role is assigned: those whose roles are all placed
    pos = {r: i for i, r in enumerate(order)}
    closing = {r: [] for r in range(8)}
    for e in M_EDGES:
        last = max(e, key=lambda r: pos[r])
        closing[last].append(e)
    emb = [-1] * 8

    def rec(idx: int, free: int):
        if idx == 8:
            yield tuple(emb)
            return
        r = order[idx]
        cand = free
        for e in closing[r]:
            a, b = (emb[x] for x in e if x != r)
            cand &= nb[a][b]
        for w in _bits(cand):
            emb[r] = w
            yield from rec(idx + 1, free & ~(1 << w))
        emb[r] = -1

    emb[role] = v
    yield from rec(1, avail & ~(1 << v))


def m_copies_containing(H: Hypergraph3, v: int, avail: int | None = None):
    """Distinct vertex sets of M copies through v, one embedding each."""
    if avail is None:
        avail = (1 << H.n) - 1
    nb = H.pair_masks
    seen = set()
    # by the automorphisms of M, x1, w1 and y1 represent every role
    for role in (0, 2, 3):
        for emb in _embeddings_containing(nb, avail, v, role):
            key = _mask(emb)
            if key not in seen:
                seen.add(key)
                yield emb


MAX_M_EXACT_GUARD = 40


def max_M_tiling(H: Hypergraph3, budget: float | None = 10.0, exact_guard: int = MAX_M_EXACT_GUARD) -> MTiling:
    """Maximum number of disjoint copies of M.

    Branch and bound on the smallest available vertex: cover it by a copy
    or leave it uncovered, cutting branches that cannot beat the best count
    even if every remaining 8 vertices formed a copy. Beyond ``exact_guard``
    vertices, or after ``budget`` seconds, the best tiling found is returned
    with ``meta['exact'] = False``.
    """
    n = H.n
    if n > exact_guard:
        T = _greedy_m_tiling(H)
        T.meta.update({"exact": False, "reason": "size-guard"})
        return T
    deadline = None if budget is None else time.monotonic() + budget
    best: list = [[]]
    cur: list = []
    timed_out = [False]
    steps = [0]
    # vertices in no edge can never be covered
    live = 0
    for e in H.edges:
        live |= _mask(e)

    def rec(avail: int):
        steps[0] += 1
        if deadline is not None and steps[0] % 256 == 0 and time.monotonic() > deadline:
            timed_out[0] = True
        if timed_out[0]:
            return
        if len(cur) > len(best[0]):
            best[0] = list(cur)
        if len(cur) + avail.bit_count() // 8 <= len(best[0]):
            return
        v = (avail & -avail).bit_length() - 1
        for emb in m_copies_containing(H, v, avail):
            cur.append(emb)
            rec(avail & ~_mask(emb))
            cur.pop()
            if timed_out[0] or len(best[0]) == n // 8:
                return
        rec(avail & ~(1 << v))

    rec(live)
    return MTiling(list(best[0]), {"exact": not timed_out[0], "reason": "timeout" if timed_out[0] else ""})


def _greedy_m_tiling(H: Hypergraph3) -> MTiling:
    avail = (1 << H.n) - 1
    copies = []
    for v in range(H.n):
        if not avail >> v & 1:
            continue
        emb = next(m_copies_containing(H, v, avail), None)
        if emb is not None:
            copies.append(emb)
            avail &= ~_mask(emb)
    return MTiling(copies)


# ---------------------------------------------------------------------------
# augmentation via L29


def crossing_mask(K: Hypergraph3, x: int, Mi, Mj) -> int:
    """Bit 8a + b is set iff {x, Mi[a], Mj[b]} is an edge of K."""
    nb = K.pair_masks[x]
    mj = [1 << w for w in Mj]
    out = 0
    for a, va in enumerate(Mi):
        row = nb[va]
        for b in range(8):
            if row & mj[b]:
                out |= 1 << (8 * a + b)
    return out


def find_augmenting_structure(K: Hypergraph3, tiling: MTiling, min_common: int = 29, exclude=()):
    """An L29 gadget: two copies and two uncovered vertices with >= 29 common crossing pairs.

    Returns an L29Instance on the common pairs with ``embedding`` mapping
    its 18 local vertices into K (copy i, copy j, x, x'), or None.
    """
    covered = tiling.covered
    X = [v for v in range(K.n) if v not in covered and v not in exclude]
    if len(X) < 2:
        return None
    copies = tiling.copies
    for i, j in itertools.permutations(range(len(copies)), 2):
        if i > j:
            continue  # the swap is a symmetry of the gadget
        Mi, Mj = copies[i], copies[j]
        masks = {x: crossing_mask(K, x, Mi, Mj) for x in X}
        cand = [x for x in X if masks[x].bit_count() >= min_common]
        for x, y in itertools.combinations(cand, 2):
            common = masks[x] & masks[y]
            if common.bit_count() >= min_common:
                crossing = frozenset(divmod(p, 8) for p in _bits(common))
                L = L29Instance(crossing, l29_host(crossing), tuple(Mi) + tuple(Mj) + (x, y))
                L.host.meta["copies"] = (i, j)
                return L
    return None


def augmented_fractional_tiling(K: Hypergraph3, tiling: MTiling, budget: float = 5.0) -> FractionalTiling:
    """Canonical weights on every copy, upgraded to 49/3 on disjoint L29 gadgets.

    Each gadget found consumes two copies and two uncovered vertices, so the
    weight is 8|copies| + |gadgets|/3 at least.
    """
    used_copies: set[int] = set()
    used_x: set[int] = set()
    T = FractionalTiling(K)
    gadgets = 0
    while True:
        index = [k for k in range(len(tiling.copies)) if k not in used_copies]
        rest = MTiling([tiling.copies[k] for k in index])
        L = find_augmenting_structure(K, rest, exclude=used_x | tiling.covered)
        if L is None:
            break
        i, j = L.host.meta["copies"]
        used_copies |= {index[i], index[j]}
        used_x |= {L.embedding[16], L.embedding[17]}
        local = search_L29_fractional(L, budget)
        T = T.union(local.relabel(K, L.embedding))
        gadgets += 1
    for k, c in enumerate(tiling.copies):
        if k not in used_copies:
            T = T.union(canonical_M_weights(K, c))
    T.meta.update({"kind": "augmented", "gadgets": gadgets})
    return T


# ---------------------------------------------------------------------------
# fractional to integral


@dataclass
class RoundingReport:
    covered: int
    weighted_mass: Fraction
    subtriples: list[dict]
    skipped: list[dict]


def round_fractional_to_integral(
    H: Hypergraph3, Q: Partition, h: FractionalTiling, eps, d,
) -> tuple[MTiling, RoundingReport]:
    """Turn a fractional tiling of the cluster hypergraph into an M-tiling of H.

    Each class V_a is cut into consecutive slices U_a^e of size
    floor(h(a, e)|V_a|), one per weighted edge e at a (in sorted edge order;
    leftovers stay uncovered). Each edge's slice triple is then tiled by
    :func:`m_tile_regular_triple`.
    """
    rep = validate_fractional_tiling(h)
    if not rep.valid:
        raise ValueError(f"fractional tiling invalid: {rep.violations[:3]}")
    if h.weights and rep.h_min < Fraction(1, 3):
        raise ValueError("rounding needs h_min >= 1/3")
    ev = h.edge_values()
    slices: dict[tuple[int, tuple], list[int]] = {}
    mass = Fraction(0)
    for a in range(len(Q.classes)):
        Va = Q.classes[a]
        start = 0
        for e in sorted(ev):
            x = ev[e].get(a, Fraction(0))
            if not x:
                continue
            mass += x * len(Va)
            size = floor(x * len(Va))
            slices[(a, e)] = Va[start : start + size]
            start += size
    copies, subs, skipped = [], [], []
    for e in sorted(ev):
        trip = sorted((slices[(a, e)] for a in e if (a, e) in slices), key=len, reverse=True)
        info = {"edge": e, "sizes": [len(t) for t in trip]}
        if len(trip) < 3 or min(len(t) for t in trip) == 0:
            skipped.append({**info, "reason": "empty-slice"})
            continue
        try:
            T, r = m_tile_regular_triple(H, trip, eps, d)
        except ValueError as exc:
            skipped.append({**info, "reason": str(exc)})
            continue
        copies += T.copies
        subs.append({**info, "copies": len(T), "uncovered": r.uncovered, "flags": r.flags})
    tiling = MTiling(copies, {"kind": "rounded"})
    return tiling, RoundingReport(8 * len(copies), mass, subs, skipped)


# ---------------------------------------------------------------------------
# loose paths

# Classes of consecutive vertices along a loose path through a (3m, 3m, 2m)
# triple; every edge is crossing and each period of 8 takes 3, 3, 2.
LOOSE_CLASS_PATTERN = (0, 1, 2, 0, 1, 0, 2, 1)


@dataclass
class PathTileReport:
    paths: int
    covered: int
    uncovered: int
    flags: list[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)


def _static_degree(nb, avail: int, v: int) -> int:
    row = nb[v]
    return sum((row[u] & avail).bit_count() for u in _bits(avail & ~(1 << v))) // 2


def _grow(nb, avail: int, start: int, cls=None, pattern=None, rank=None):
    """Extend a loose path from ``start`` two vertices at a time; returns (order, avail)."""
    path = [start]
    avail &= ~(1 << start)
    while True:
        pos = len(path) - 1
        cm_mid = cm_end = avail
        if pattern is not None:
            cm_mid = avail & cls[pattern[(pos + 1) % len(pattern)]]
            cm_end = avail & cls[pattern[(pos + 2) % len(pattern)]]
        cur = path[-1]
        choice = None
        for m in sorted(_bits(cm_mid), key=lambda u: (rank[u], u)):
            J = nb[cur][m] & cm_end & ~(1 << m)
            if J:
                j = max(_bits(J), key=lambda u: (rank[u], -u))
                choice = (m, j)
                break
        if choice is None:
            return path, avail
        path += choice
        avail &= ~((1 << choice[0]) | (1 << choice[1]))


def loose_path_tile_triple(H: Hypergraph3, parts, eps=0.1, d=0.2, seed=None):
    """Greedy loose path tiling of a triple with sizes in ratio 3:3:2.

    Paths start in the first class and follow the class pattern
    (1, 2, 3, 1, 2, 1, 3, 2) repeated, so every edge is crossing. Each path
    grows until no crossing continuation is left; a new path then starts at
    the lowest-ranked free vertex of the first class.
    """
    eps, d = _frac(eps), _frac(d)
    parts = sorted((sorted(p) for p in parts), key=len, reverse=True)
    sizes = [len(p) for p in parts]
    flags = []
    if d < 2 * eps:
        raise ValueError("need d >= 2 eps")
    if sizes[2] and abs(2 * sizes[0] - 3 * sizes[2]) > 3:
        flags.append("ratio-off")
    nb = H.pair_masks
    cls = [_mask(p) for p in parts]
    avail = cls[0] | cls[1] | cls[2]
    rng = np.random.default_rng(seed)
    tie = rng.random(H.n)
    paths: list[LoosePath] = []
    while True:
        rank = {v: (_static_degree(nb, avail, v), tie[v]) for v in _bits(avail)}
        placed = False
        for s in sorted(_bits(avail & cls[0]), key=lambda u: rank[u]):
            order, rest = _grow(nb, avail, s, cls, LOOSE_CLASS_PATTERN, rank)
            if len(order) >= 3:
                paths.append(LoosePath(order))
                avail = rest
                placed = True
                break
        if not placed:
            break
    covered = sum(len(p) for p in paths)
    total = sum(sizes)
    return paths, PathTileReport(len(paths), covered, total - covered, flags)


def greedy_loose_paths(H: Hypergraph3, vertices, seed=None) -> list[LoosePath]:
    """Unconstrained greedy loose paths inside ``vertices``, grown at both ends."""
    nb = H.pair_masks
    avail = _mask(vertices)
    tie = np.random.default_rng(seed).random(max(H.n, 1))
    paths = []
    while True:
        rank = {v: (_static_degree(nb, avail, v), tie[v]) for v in _bits(avail)}
        starts = [v for v in sorted(_bits(avail), key=lambda u: rank[u]) if rank[v][0] > 0]
        if not starts:
            break
        placed = False
        for s in starts:
            order, rest = _grow(nb, avail, s, rank=rank)
            if len(order) < 3:
                continue
            back, rest = _grow(nb, rest | (1 << order[0]), order[0], rank=rank)
            order = back[::-1] + order[1:]
            paths.append(LoosePath(order))
            avail = rest
            placed = True
            break
        if not placed:
            break
    return paths


@dataclass
class PathTiling:
    paths: list[LoosePath]
    uncovered: list[int]
    route: str
    report: dict = field(default_factory=dict)


def _split_copy(classes, rng):
    """The four 3:3:2 triples cut from the clusters of one M copy (roles 1..8)."""
    V = [list(c) for c in classes]
    for c in V:
        rng.shuffle(c)
    s3, s4, s5, s6 = (len(V[i]) for i in (2, 3, 4, 5))
    V3a, V3b = V[2][: 2 * s3 // 3], V[2][2 * s3 // 3 :]
    V6a, V6b = V[5][: 2 * s6 // 3], V[5][2 * s6 // 3 :]
    V4a, V4b = V[3][: s4 // 2], V[3][s4 // 2 :]
    V5a, V5b = V[4][: s5 // 2], V[4][s5 // 2 :]
    return [(V[0], V[1], V3a), (V[7], V[6], V6a), (V3b, V4a, V5a), (V4b, V5b, V6b)]


def path_tile(
    H: Hypergraph3, gamma=0.3, alpha=0.25, seed=None, t: int = 8, eps=0.05,
    k: int = 200, cleanup: bool = True,
) -> PathTiling:
    """Disjoint loose paths covering most of V(H).

    Cluster route (when H has at least 6t vertices): a random balanced
    partition into t clusters of size divisible by 6, the cluster hypergraph
    at d = gamma/3, a maximum M-tiling of it, and per copy the four 3:3:2
    triples tiled by :func:`loose_path_tile_triple`. Vertices left over
    (and all vertices when the cluster route does not apply) go through
    :func:`greedy_loose_paths`; the report flags that step.
    """
    gamma, alpha = _frac(gamma), _frac(alpha)
    rng = np.random.default_rng(seed)
    n = H.n
    paths: list[LoosePath] = []
    report: dict = {"flags": []}
    route = "greedy"
    size = 6 * (n // (6 * t)) if t else 0
    if size >= 6:
        route = "cluster"
        Q = random_balanced_partition(n, t, rng.integers(2**63), class_size=size)
        d = gamma / 3
        K = cluster_hypergraph(H, Q, eps, d, k, int(rng.integers(2**31)))
        Kh = K.hypergraph
        MT = max_M_tiling(Kh)
        report.update({"cluster_edges": len(K.edges), "copies": len(MT), "m_exact": MT.meta.get("exact")})
        for copy in MT.copies:
            for trip in _split_copy([Q.classes[c] for c in copy], rng):
                ps, _ = loose_path_tile_triple(H, trip, eps=eps, d=max(d, 2 * _frac(eps)), seed=rng.integers(2**31))
                paths += ps
    covered = {v for p in paths for v in p.order}
    left = [v for v in range(n) if v not in covered]
    if cleanup and left:
        extra = greedy_loose_paths(H, left, rng.integers(2**31))
        if extra:
            report["flags"].append("greedy-cleanup")
        paths += extra
        covered |= {v for p in extra for v in p.order}
        left = [v for v in range(n) if v not in covered]
    for p in paths:
        v = validate_loose_path(H, p)
        assert v, f"path tiling produced an invalid path: {v.reason}"
    report["uncovered"] = len(left)
    report["within_alpha"] = len(left) <= alpha * n
    return PathTiling(paths, left, route, report)
