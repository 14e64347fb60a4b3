"""Connecting triples, reservoir, absorbers and the Hamilton cycle assembly."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, perm

import networkx as nx
import numpy as np

from .hypergraph import Hypergraph3, LooseCycle, LoosePath, validate_loose_cycle, validate_loose_path
from .tiling import path_tile

log = logging.getLogger(__name__)

EXACT_COUNT_GUARD = 24
STAGES = ("absorbing", "reservoir", "tiling", "connecting", "absorbing-capacity")


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


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


# ---------------------------------------------------------------------------
# connecting


@dataclass
class PairSystem:
    pairs: list[tuple[int, int]]

    def __post_init__(self):
        vs = [v for p in self.pairs for v in p]
        if len(set(vs)) != len(vs):
            raise ValueError("pairs must be mutually disjoint")

    @property
    def vertices(self) -> set[int]:
        return {v for p in self.pairs for v in p}


@dataclass
class ConnectionSet:
    triples: list[tuple[int, int, int]]


def validate_connection(H: Hypergraph3, system: PairSystem, conn: ConnectionSet) -> bool:
    if len(system.pairs) != len(conn.triples):
        return False
    vs = [v for p in system.pairs for v in p] + [v for t in conn.triples for v in t]
    if len(set(vs)) != 5 * len(system.pairs):
        return False
    return all(
        H.has_edge(a, x, y) and H.has_edge(y, z, b)
        for (a, b), (x, y, z) in zip(system.pairs, conn.triples)
    )


def find_connecting_triples(
    H: Hypergraph3, system: PairSystem, allowed, node_budget: int = 100_000, rng=None,
) -> ConnectionSet | None:
    """Triples (x_i, y_i, z_i) from ``allowed`` with a_i x_i y_i and y_i z_i b_i edges.

    Pairs are handled one at a time as in the inductive argument; when a
    later pair gets stuck the search backtracks into earlier choices. The
    middle vertex y is tried in order of how many (x, z) options it leaves.
    """
    allowed = set(allowed)
    if allowed & system.vertices:
        raise ValueError("allowed vertices must avoid the pair system")
    nb = H.pair_masks
    tie = _rng(rng).random(H.n) if rng is not None else np.zeros(H.n)
    budget = [node_budget]
    out: list[tuple[int, int, int]] = []

    def rec(i: int, free: int) -> bool:
        if i == len(system.pairs):
            return True
        budget[0] -= 1
        if budget[0] < 0:
            return False
        a, b = system.pairs[i]
        opts = []
        for y in _bits(free):
            X = nb[a][y] & free & ~(1 << y)
            Z = nb[b][y] & free & ~(1 << y)
            if X and Z and not (X == Z and X & (X - 1) == 0):
                opts.append((-(X.bit_count() * Z.bit_count()), tie[y], y, X, Z))
        opts.sort()
        for _, _, y, X, Z in opts:
            for x in _bits(X):
                for z in _bits(Z & ~(1 << x)):
                    out.append((x, y, z))
                    if rec(i + 1, free & ~((1 << x) | (1 << y) | (1 << z))):
                        return True
                    out.pop()
                    if budget[0] < 0:
                        return False
                    break  # other z for this x leave the same situation up to relabelling
        return False

    if rec(0, _mask(allowed)):
        return ConnectionSet(list(out))
    return None


# ---------------------------------------------------------------------------
# reservoir


@dataclass
class ReservoirR:
    members: list[int]
    gamma: float
    attempts: int = 1


class StageFailure(RuntimeError):
    def __init__(self, stage: str, message: str, detail: dict | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.detail = detail or {}


def reservoir_violation(H: Hypergraph3, R, gamma) -> str | None:
    """None when R meets the size cap and the degree floor, else the failed condition."""
    gamma = Fraction(str(gamma))
    r = len(R)
    if r > gamma * H.n:
        return f"size {r} > gamma n"
    floor_ = (Fraction(1, 4) + gamma**2) * comb(r, 2)
    mask = _mask(R)
    nb = H.pair_masks
    Rl = sorted(R)
    for v in range(H.n):
        row = nb[v]
        deg = sum((row[u] & mask & ~(1 << v)).bit_count() for u in Rl if u != v) // 2
        if deg < floor_:
            return f"vertex {v} has deg_R {deg} < {float(floor_):.2f}"
    return None


def build_reservoir(H: Hypergraph3, gamma, rng=None, max_retries: int = 100, pool=None, min_size: int = 1) -> ReservoirR:
    """Keep each vertex of ``pool`` with probability gamma - gamma^3; retry until valid."""
    if not 0 < float(gamma) < 1:
        raise ValueError("gamma must lie in (0, 1)")
    rng = _rng(rng)
    p = float(gamma) - float(gamma) ** 3
    pool = sorted(range(H.n) if pool is None else pool)
    last = "no attempt"
    for attempt in range(1, max_retries + 1):
        keep = rng.random(len(pool)) < p
        R = [v for v, k in zip(pool, keep) if k]
        if len(R) < min_size:
            last = f"size {len(R)} < {min_size}"
            continue
        bad = reservoir_violation(H, R, gamma)
        if bad is None:
            return ReservoirR(R, float(gamma), attempt)
        last = bad
    raise StageFailure("reservoir", f"no valid reservoir in {max_retries} tries", {"last": last})


# ---------------------------------------------------------------------------
# absorbers


def is_absorbing_tuple(H: Hypergraph3, t, x: int, y: int) -> bool:
    """v1v2v3, v3v4v5, v5v6v7, v2xv4 and v4yv6 are all edges."""
    if len(t) != 7 or len(set(t) | {x, y}) != 9:
        raise ValueError("need 7 tuple vertices and x, y, all distinct")
    v1, v2, v3, v4, v5, v6, v7 = t
    return (
        H.has_edge(v1, v2, v3) and H.has_edge(v3, v4, v5) and H.has_edge(v5, v6, v7)
        and H.has_edge(v2, x, v4) and H.has_edge(v4, y, v6)
    )


@dataclass
class CountResult:
    value: float
    exact: bool
    radius: float = 0.0
    samples: int = 0


def count_absorbing_tuples(H: Hypergraph3, x: int, y: int, mode: str = "exact", samples: int = 20000, rng=None) -> CountResult:
    """Number of 7-tuples absorbing (x, y), exactly or by uniform sampling.

    Exact mode nests v4, v2 in N(x, v4), v6 in N(y, v4), v3, v1 in N(v2, v3),
    v5 in N(v3, v4), and counts v7 in N(v5, v6) by popcount.
    """
    n = H.n
    if x == y:
        raise ValueError("x and y must differ")
    if mode == "exact":
        if n > EXACT_COUNT_GUARD:
            raise ValueError(f"exact counting is limited to n <= {EXACT_COUNT_GUARD}")
        nb = H.pair_masks
        base = ((1 << n) - 1) & ~(1 << x) & ~(1 << y)
        total = 0
        for v4 in _bits(base):
            f4 = base & ~(1 << v4)
            for v2 in _bits(nb[x][v4] & f4):
                f2 = f4 & ~(1 << v2)
                for v6 in _bits(nb[y][v4] & f2):
                    f6 = f2 & ~(1 << v6)
                    for v3 in _bits(f6):
                        f3 = f6 & ~(1 << v3)
                        c1 = nb[v2][v3] & f3
                        if not c1:
                            continue
                        for v1 in _bits(c1):
                            f1 = f3 & ~(1 << v1)
                            for v5 in _bits(nb[v3][v4] & f1):
                                total += (nb[v5][v6] & f1 & ~(1 << v5)).bit_count()
        return CountResult(total, True)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = _rng(rng)
    others = np.array([v for v in range(n) if v not in (x, y)])
    if len(others) < 7:
        return CountResult(0.0, False, 0.0, 0)
    space = perm(len(others), 7)
    hits = 0
    for _ in range(samples):
        t = rng.choice(others, size=7, replace=False).tolist()
        hits += is_absorbing_tuple(H, t, x, y)
    p = hits / samples
    rad = 1.96 * np.sqrt(max(p * (1 - p), 1 / samples) / samples) * space
    return CountResult(p * space, False, float(rad), samples)


@dataclass
class AbsorbingPath:
    path: LoosePath
    absorbers: list[tuple[int, ...]]
    starts: list[int]  # index in path.order of each absorber's v1

    @property
    def capacity(self) -> int:
        return 2 * len(self.absorbers)


def _random_loose7(H: Hypergraph3, avail: int, rng, tries: int = 50):
    """A random loose path on 7 vertices inside ``avail``, or None."""
    nb = H.pair_masks
    verts = list(_bits(avail))
    if len(verts) < 7:
        return None
    for _ in range(tries):
        v1 = int(rng.choice(verts))
        seq = [v1]
        free = avail & ~(1 << v1)
        ok = True
        for _ in range(3):
            cur = seq[-1]
            opts = [(m, j) for m in _bits(free) for j in _bits(nb[cur][m] & free & ~(1 << m))]
            if not opts:
                ok = False
                break
            m, j = opts[int(rng.integers(len(opts)))]
            seq += [m, j]
            free &= ~((1 << m) | (1 << j))
        if ok:
            return tuple(seq)
    return None


def _absorb_score(H: Hypergraph3, t) -> int:
    nb = H.pair_masks
    return nb[t[1]][t[3]].bit_count() * nb[t[3]][t[5]].bit_count()


def default_absorber_count(n: int, gamma) -> int:
    """Desk-scale stand-in for the asymptotic family size: max(1, floor(gamma n / 6))."""
    return max(1, int(float(gamma) * n // 6))


def build_absorbing_path(
    H: Hypergraph3, gamma=0.3, rng=None, n_absorbers: int | None = None, candidates: int = 20,
    avoid=(),
) -> AbsorbingPath:
    """Disjoint absorbers chained into one loose path by connecting triples.

    Each absorber is the best of ``candidates`` random loose 7-paths, scored
    by how many pairs it could absorb. Consecutive absorbers are joined
    through triples drawn from the unused vertices.
    """
    rng = _rng(rng)
    k = default_absorber_count(H.n, gamma) if n_absorbers is None else n_absorbers
    avail = ((1 << H.n) - 1) & ~_mask(avoid)
    chosen: list[tuple[int, ...]] = []
    for _ in range(k):
        best = None
        for _ in range(candidates):
            t = _random_loose7(H, avail, rng, tries=5)
            if t is not None and (best is None or _absorb_score(H, t) > _absorb_score(H, best)):
                best = t
        if best is None:
            raise StageFailure("absorbing", "no loose 7-path left for an absorber", {"found": len(chosen)})
        chosen.append(best)
        avail &= ~_mask(best)
    system = PairSystem([(chosen[i][6], chosen[i + 1][0]) for i in range(k - 1)])
    conn = find_connecting_triples(H, system, list(_bits(avail)), rng=rng) if k > 1 else ConnectionSet([])
    if conn is None:
        raise StageFailure("absorbing", "absorbers could not be connected", {"absorbers": k})
    order: list[int] = []
    starts = []
    for i, t in enumerate(chosen):
        starts.append(len(order))
        order += t
        if i < k - 1:
            order += conn.triples[i]
    P = LoosePath(tuple(order))
    v = validate_loose_path(H, P)
    assert v, f"absorbing path invalid: {v.reason}"
    return AbsorbingPath(P, chosen, starts)


class AbsorbFailure(RuntimeError):
    def __init__(self, message: str, blocking=None):
        super().__init__(message)
        self.blocking = blocking


def _can_take(nb, t, x, y) -> bool:
    return bool(nb[t[1]][t[3]] >> x & 1 and nb[t[3]][t[5]] >> y & 1)


def _pairings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1 :]
        for p in _pairings(rest):
            yield [(a, items[i])] + p


def _assign(H: Hypergraph3, P: AbsorbingPath, U: list[int], max_pairings: int):
    """Map pairs of U to absorbers: first fit, then pairings plus bipartite matching."""
    nb = H.pair_masks
    A = P.absorbers
    # first fit
    used: set[int] = set()
    left = list(U)
    plan = {}
    while left:
        x = left.pop(0)
        hit = None
        for y in left:
            for i, t in enumerate(A):
                if i in used:
                    continue
                if _can_take(nb, t, x, y):
                    hit = (i, x, y)
                elif _can_take(nb, t, y, x):
                    hit = (i, y, x)
                if hit:
                    break
            if hit:
                break
        if hit is None:
            break
        i, a, b = hit
        used.add(i)
        plan[i] = (a, b)
        left.remove(y)
    else:
        return plan, None
    # complete search: every pairing of U, each checked by a bipartite matching
    blocking = None
    for count, pairing in enumerate(_pairings(list(U))):
        if count >= max_pairings:
            break
        G = nx.Graph()
        G.add_nodes_from((("p", j) for j in range(len(pairing))), bipartite=0)
        G.add_nodes_from((("a", i) for i in range(len(A))), bipartite=1)
        for j, (x, y) in enumerate(pairing):
            for i, t in enumerate(A):
                if _can_take(nb, t, x, y) or _can_take(nb, t, y, x):
                    G.add_edge(("p", j), ("a", i))
        top = [("p", j) for j in range(len(pairing))]
        M = nx.bipartite.hopcroft_karp_matching(G, top_nodes=top)
        if all(p in M for p in top):
            plan = {}
            for j, (x, y) in enumerate(pairing):
                i = M[("p", j)][1]
                plan[i] = (x, y) if _can_take(nb, A[i], x, y) else (y, x)
            return plan, None
        if blocking is None:
            blocking = next(pairing[j] for j, p in enumerate(top) if p not in M)
    return None, blocking


def absorb(H: Hypergraph3, P: AbsorbingPath, U, max_pairings: int = 10_000) -> LoosePath:
    """Swallow the vertices of U into P without moving its ends.

    Each pair (x, y) goes to its own absorber (v1..v7), which is rewired to
    (v1, v3, v2, x, v4, y, v6, v5, v7).
    """
    U = sorted(set(U))
    if len(U) % 2:
        raise AbsorbFailure("an odd number of vertices cannot be absorbed")
    if set(U) & set(P.path.order):
        raise AbsorbFailure("U meets the absorbing path")
    if len(U) > P.capacity:
        raise AbsorbFailure(f"|U| = {len(U)} exceeds capacity {P.capacity}")
    if not U:
        return P.path
    plan, blocking = _assign(H, P, U, max_pairings)
    if plan is None:
        raise AbsorbFailure("no assignment of pairs to absorbers", blocking)
    order = list(P.path.order)
    # rewire from the back so earlier start indices stay valid
    for i in sorted(plan, key=lambda i: P.starts[i], reverse=True):
        s = P.starts[i]
        v1, v2, v3, v4, v5, v6, v7 = order[s : s + 7]
        x, y = plan[i]
        order[s : s + 7] = [v1, v3, v2, x, v4, y, v6, v5, v7]
    Q = LoosePath(tuple(order))
    v = validate_loose_path(H, Q)
    assert v, f"absorption produced an invalid path: {v.reason}"
    return Q


# ---------------------------------------------------------------------------
# assembly


@dataclass
class PipelineResult:
    cycle: LooseCycle | None
    stage: str | None
    log: list[dict] = field(default_factory=list)
    seed: object = None

    @property
    def ok(self) -> bool:
        return self.cycle is not None


def assemble_hamilton_cycle(
    H: Hypergraph3, gamma=0.3, rng=None, budget: float | None = 30.0,
    n_absorbers: int | None = None, attempts: int = 20, alpha=0.25,
) -> PipelineResult:
    """Absorbing path, reservoir, path tiling, connection through R, absorption.

    The reservoir, tiling, connection and absorption steps are retried with
    fresh randomness up to ``attempts`` times. The result is either a loose
    Hamilton cycle accepted by the validator or the stage that failed last.
    """
    if H.n % 2:
        raise ValueError("a loose Hamilton cycle needs an even number of vertices")
    seed = rng if not isinstance(rng, np.random.Generator) else None
    rng = _rng(rng)
    t0 = time.monotonic()
    steps: list[dict] = []

    def out_of_time():
        return budget is not None and time.monotonic() - t0 > budget

    try:
        P0 = build_absorbing_path(H, gamma, rng, n_absorbers)
    except StageFailure as exc:
        return PipelineResult(None, "absorbing", [{"stage": "absorbing", "error": str(exc)}], seed)
    steps.append({"stage": "absorbing", "vertices": len(P0.path), "capacity": P0.capacity})
    rest_pool = [v for v in range(H.n) if v not in set(P0.path.order)]
    stage = "reservoir"
    for attempt in range(attempts):
        if out_of_time():
            steps.append({"stage": "budget", "attempt": attempt})
            break
        try:
            R = build_reservoir(H, gamma, rng, max_retries=20, pool=rest_pool, min_size=3)
        except StageFailure as exc:
            stage = "reservoir"
            steps.append({"stage": stage, "attempt": attempt, "error": str(exc)})
            continue
        inner = [v for v in rest_pool if v not in set(R.members)]
        sub, relabel = H.induced(inner)
        back = {i: v for v, i in relabel.items()}
        PT = path_tile(sub, gamma, alpha, seed=rng.integers(2**31))
        paths = [LoosePath(tuple(back[v] for v in p.order)) for p in PT.paths]
        T = [back[v] for v in PT.uncovered]
        chain = [P0.path] + paths
        system = PairSystem([(chain[i].order[-1], chain[(i + 1) % len(chain)].order[0]) for i in range(len(chain))])
        if 3 * len(chain) > len(R.members):
            stage = "connecting"
            steps.append({"stage": stage, "attempt": attempt, "error": f"{len(chain)} paths, |R| = {len(R.members)}"})
            continue
        conn = find_connecting_triples(H, system, R.members, rng=rng)
        if conn is None:
            stage = "connecting"
            steps.append({"stage": stage, "attempt": attempt, "paths": len(chain), "R": len(R.members)})
            continue
        used = {v for t in conn.triples for v in t}
        U = sorted(set(T) | (set(R.members) - used))
        try:
            Q = absorb(H, P0, U)
        except AbsorbFailure as exc:
            stage = "absorbing-capacity"
            steps.append({"stage": stage, "attempt": attempt, "U": len(U), "error": str(exc)})
            continue
        order: list[int] = []
        for i, p in enumerate([Q] + paths):
            order += p.order
            order += conn.triples[i]
        C = LooseCycle(tuple(order))
        v = validate_loose_cycle(H, C, hamilton=True)
        if not v:  # pragma: no cover - would be a bug, never a certificate
            log.error("assembled cycle rejected: %s", v.reason)
            raise AssertionError(f"assembled cycle rejected: {v.reason}")
        steps.append({"stage": "done", "attempt": attempt, "paths": len(chain), "U": len(U)})
        return PipelineResult(C, None, steps, seed)
    return PipelineResult(None, stage, steps, seed)
