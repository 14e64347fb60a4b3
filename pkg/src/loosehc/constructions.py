"""Generators for the named hypergraphs and for seeded random instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .hypergraph import Hypergraph3

# Role names of the 8 vertices of M, in the order 1..8 of its edges 123, 345, 456, 678.
M_ROLES = ("x1", "x2", "w1", "y1", "y2", "w2", "z1", "z2")
M_EDGES = ((0, 1, 2), (2, 3, 4), (3, 4, 5), (5, 6, 7))


def _rng(seed):
    return np.random.default_rng(seed)


def make_H3(n: int) -> Hypergraph3:
    """All triples meeting A, with |A| = floor(n/4) - 1 and A = {0, ..., |A|-1}."""
    if n < 6 or n % 2:
        raise ValueError(f"make_H3 needs an even n >= 6, got {n}")
    a = n // 4 - 1
    edges = [e for e in combinations(range(n), 3) if e[0] < a]
    legend = {"A": list(range(a)), "B": list(range(a, n))}
    return Hypergraph3(n, edges, {"generator": "H3", "params": {"n": n}, "legend": legend})


def H3_min_degree(n: int) -> int:
    a = n // 4 - 1
    return comb(a, 2) + a * (n - a - 1)


def make_Hk(n: int, k: int) -> tuple[list[tuple[int, ...]], int]:
    """k-sets of range(n) meeting A, |A| = n/(2(k-1)) - 1 (no floor).

    Returns the edge list and |A|; A is {0, ..., |A|-1}.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    if n % (2 * (k - 1)):
        raise ValueError(f"n={n} is not divisible by 2(k-1)={2 * (k - 1)}")
    a = n // (2 * (k - 1)) - 1
    if a < 0:
        raise ValueError("n too small")
    return [e for e in combinations(range(n), k) if e[0] < a], a


def make_M() -> Hypergraph3:
    legend = dict(zip(M_ROLES, range(8)))
    return Hypergraph3(8, M_EDGES, {"generator": "M", "params": {}, "legend": legend})


def make_complete(n: int) -> Hypergraph3:
    if n < 0:
        raise ValueError("n must be non-negative")
    return Hypergraph3(n, combinations(range(n), 3), {"generator": "complete", "params": {"n": n}})


def make_loose_cycle(n: int) -> Hypergraph3:
    if n < 6 or n % 2:
        raise ValueError("a loose cycle needs an even number of at least 6 vertices")
    edges = [(i, i + 1, (i + 2) % n) for i in range(0, n, 2)]
    return Hypergraph3(n, edges, {"generator": "loose_cycle", "params": {"n": n}})


def make_loose_path(t: int) -> Hypergraph3:
    if t < 3 or t % 2 == 0:
        raise ValueError("a loose path needs an odd number of at least 3 vertices")
    edges = [(i, i + 1, i + 2) for i in range(0, t - 2, 2)]
    return Hypergraph3(t, edges, {"generator": "loose_path", "params": {"t": t}})


def make_tight_path(t: int) -> Hypergraph3:
    if t < 3:
        raise ValueError("a tight path needs at least 3 vertices")
    edges = [(i, i + 1, i + 2) for i in range(t - 2)]
    return Hypergraph3(t, edges, {"generator": "tight_path", "params": {"t": t}})


def random_binomial(n: int, p: float, seed=None) -> Hypergraph3:
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = _rng(seed)
    triples = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    keep = rng.random(len(triples)) < p
    return Hypergraph3(
        n, triples[keep].tolist(),
        {"generator": "random_binomial", "params": {"n": n, "p": p}, "seed": seed},
    )


def random_min_degree(n: int, target: int, seed=None, base_fraction: float = 0.8) -> Hypergraph3:
    """Random hypergraph with minimum vertex degree at least ``target``.

    Starts from a binomial hypergraph at density ``base_fraction * target /
    C(n-1, 2)``, then repeatedly adds a random missing edge at a minimum-degree
    vertex until the target is met. ``meta['augmented']`` is the number of
    edges added in that phase.
    """
    top = comb(n - 1, 2)
    if target < 0 or target > top:
        raise ValueError(f"target {target} outside [0, C(n-1,2)={top}]")
    rng = _rng(seed)
    p0 = min(1.0, base_fraction * target / top) if top else 0.0
    triples = list(combinations(range(n), 3))
    mask = rng.random(len(triples)) < p0
    edges = {t for t, keep in zip(triples, mask) if keep}
    deg = np.zeros(n, dtype=np.int64)
    for e in edges:
        deg[list(e)] += 1
    added = 0
    while n >= 3 and deg.min() < target:
        low = np.flatnonzero(deg == deg.min())
        v = int(rng.choice(low))
        others = [u for u in range(n) if u != v]
        # pick a missing edge at v, preferring low-degree partners
        order = sorted(others, key=lambda u: (deg[u], rng.random()))
        placed = False
        for i, a in enumerate(order):
            for b in order[i + 1 :]:
                e = tuple(sorted((v, a, b)))
                if e not in edges:
                    edges.add(e)
                    deg[list(e)] += 1
                    added += 1
                    placed = True
                    break
            if placed:
                break
        if not placed:  # cannot happen while target <= C(n-1, 2)
            raise RuntimeError("augmentation stalled")
    return Hypergraph3(
        n, edges,
        {"generator": "random_min_degree", "params": {"n": n, "target": target},
         "seed": seed, "augmented": added},
    )


def tripartite_random(sizes, d: float, seed=None) -> tuple[Hypergraph3, list[list[int]]]:
    """Crossing triples of a 3-partition, each kept independently with probability d."""
    if not 0 <= d <= 1:
        raise ValueError("d must lie in [0, 1]")
    m1, m2, m3 = (int(s) for s in sizes)
    parts = [list(range(m1)), list(range(m1, m1 + m2)), list(range(m1 + m2, m1 + m2 + m3))]
    rng = _rng(seed)
    a, b, c = np.meshgrid(parts[0], parts[1], parts[2], indexing="ij")
    triples = np.stack([a.ravel(), b.ravel(), c.ravel()], axis=1)
    keep = rng.random(len(triples)) < d
    H = Hypergraph3(
        m1 + m2 + m3, triples[keep].tolist(),
        {"generator": "tripartite_random", "params": {"sizes": [m1, m2, m3], "d": d},
         "seed": seed, "legend": {"parts": parts}},
    )
    return H, parts


# ---------------------------------------------------------------------------
# The L29 gadget: two copies of M plus u, v with identical crossing links.

L29_U, L29_V = 16, 17


def l29_role_names() -> list[str]:
    return list(M_ROLES) + [r + "'" for r in M_ROLES] + ["u", "v"]


@dataclass
class L29Instance:
    """Host on 18 vertices: M1 = 0..7, M2 = 8..15 (role order x1 x2 w1 y1 y2 w2 z1 z2), u = 16, v = 17.

    ``crossing`` holds role-index pairs (a, b), a a vertex of M1 and b of M2,
    both in range(8). ``embedding`` optionally maps the 18 local vertices into
    a larger host (set by the augmentation search).
    """

    crossing: frozenset[tuple[int, int]]
    host: Hypergraph3 = field(repr=False)
    embedding: tuple[int, ...] | None = None

    @property
    def labels(self) -> dict[str, int]:
        return dict(zip(l29_role_names(), range(18)))

    def check(self, min_crossing: int = 29) -> None:
        if len(self.crossing) < min_crossing:
            raise ValueError(f"|crossing| = {len(self.crossing)} < {min_crossing}")
        H = self.host
        if H.degree(L29_U) != len(self.crossing) or H.degree(L29_V) != len(self.crossing):
            raise ValueError("deg(u), deg(v) must both equal |crossing|")


def l29_host(crossing) -> Hypergraph3:
    edges = [e for e in M_EDGES] + [tuple(x + 8 for x in e) for e in M_EDGES]
    for a, b in crossing:
        edges.append((a, b + 8, L29_U))
        edges.append((a, b + 8, L29_V))
    return Hypergraph3(18, edges, {"generator": "L29", "params": {"crossing": sorted(crossing)}})


def make_L29(crossing=None, seed=None, min_crossing: int = 29) -> L29Instance:
    """Build an L29 instance; with no ``crossing`` a random one is drawn.

    The random draw picks |crossing| uniformly from [29, 64], then a uniform
    subset of the 8x8 role grid of that size.
    """
    if crossing is None:
        rng = _rng(seed)
        size = int(rng.integers(29, 65))
        cells = rng.choice(64, size=size, replace=False)
        crossing = {(int(c) // 8, int(c) % 8) for c in cells}
    crossing = frozenset((int(a), int(b)) for a, b in crossing)
    for a, b in crossing:
        if not (0 <= a < 8 and 0 <= b < 8):
            raise ValueError(f"crossing pair {(a, b)} outside the 8x8 role grid")
    if len(crossing) < min_crossing:
        raise ValueError(f"|crossing| = {len(crossing)} < {min_crossing}")
    host = l29_host(crossing)
    host.meta["seed"] = seed
    return L29Instance(crossing, host)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> Hypergraph3:
        return generate(self)


FAMILIES = (
    "H3", "Hk", "M", "L29", "loose_path", "loose_cycle", "tight_path", "complete",
    "random_binomial", "random_min_degree", "tripartite_random",
)


def generate(spec: GeneratorSpec) -> Hypergraph3:
    """Dispatch a GeneratorSpec to its generator; the result records spec and seed."""
    name, p, seed = spec.name, dict(spec.params), spec.seed
    if name == "H3":
        H = make_H3(int(p["n"]))
    elif name == "Hk":
        k = int(p["k"])
        if k != 3:
            raise ValueError("only k=3 instances are hypergraphs here; use make_Hk for edge data")
        edges, a = make_Hk(int(p["n"]), 3)
        H = Hypergraph3(int(p["n"]), edges, {"legend": {"A": list(range(a))}})
    elif name == "M":
        H = make_M()
    elif name == "L29":
        L = make_L29(p.get("crossing"), seed)
        H = L.host
        p["crossing"] = [list(c) for c in sorted(L.crossing)]
    elif name == "loose_path":
        H = make_loose_path(int(p["t"]))
    elif name == "loose_cycle":
        H = make_loose_cycle(int(p["n"]))
    elif name == "tight_path":
        H = make_tight_path(int(p["t"]))
    elif name == "complete":
        H = make_complete(int(p["n"]))
    elif name == "random_binomial":
        H = random_binomial(int(p["n"]), float(p["p"]), seed)
    elif name == "random_min_degree":
        n = int(p["n"])
        target = p.get("target")
        if target is None:
            target = int(np.ceil(float(p["ratio"]) * comb(n, 2)))
            target = min(target, comb(n - 1, 2))
        H = random_min_degree(n, int(target), seed)
    elif name == "tripartite_random":
        H, _ = tripartite_random(p["sizes"], float(p["d"]), seed)
    else:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    H.meta.update({"generator": name, "params": p, "seed": seed})
    return H
