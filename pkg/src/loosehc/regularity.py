"""Triple densities, epsilon-regularity checks and cluster hypergraphs.

Partitions are inputs here; nothing in this module constructs a regular
partition. The checks follow the definition directly: a triple is
(eps, d)-regular when every sub-triple with |A_i| >= eps |V_i| has density
within eps of d, and eps-regular when some d works, which is the same as
all such sub-densities lying in an interval of length 2 eps.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

import numpy as np

from .hypergraph import Hypergraph3

EXHAUSTIVE_GUARD = 12
DEFAULT_SAMPLES = 200


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


@dataclass
class Partition:
    classes: list[list[int]]
    exceptional: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.classes = [sorted(int(v) for v in c) for c in self.classes]
        self.exceptional = sorted(int(v) for v in self.exceptional)

    @property
    def t(self) -> int:
        return len(self.classes)

    @property
    def balanced(self) -> bool:
        sizes = [len(c) for c in self.classes]
        return not sizes or max(sizes) - min(sizes) <= 1

    def validate(self, n: int) -> None:
        seen: set[int] = set()
        for c in self.classes + [self.exceptional]:
            for v in c:
                if v in seen:
                    raise ValueError(f"vertex {v} appears twice in the partition")
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} outside V")
                seen.add(v)
        if len(seen) != n:
            raise ValueError(f"partition covers {len(seen)} of {n} vertices")

    def to_json(self) -> dict:
        return {"classes": self.classes, "exceptional": self.exceptional}

    @classmethod
    def from_json(cls, data) -> "Partition":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["classes"], data.get("exceptional", []))


def random_balanced_partition(n: int, t: int, seed=None, class_size: int | None = None) -> Partition:
    """t classes of equal size (n // t unless given); leftovers go to V_0."""
    s = n // t if class_size is None else class_size
    if s * t > n:
        raise ValueError(f"{t} classes of size {s} do not fit in {n} vertices")
    perm = np.random.default_rng(seed).permutation(n).tolist()
    classes = [perm[i * s : (i + 1) * s] for i in range(t)]
    return Partition(classes, perm[t * s :])


def crossing_count(H: Hypergraph3, A1, A2, A3) -> int:
    m3 = _mask(A3)
    pm = H.pair_masks
    return sum((pm[a][b] & m3).bit_count() for a in A1 for b in A2)


def density(H: Hypergraph3, A1, A2, A3) -> Fraction:
    """e(A1, A2, A3) / (|A1||A2||A3|) as an exact fraction."""
    A1, A2, A3 = (sorted(set(A)) for A in (A1, A2, A3))
    if not (A1 and A2 and A3):
        raise ValueError("density needs three nonempty sets")
    if set(A1) & set(A2) or set(A1) & set(A3) or set(A2) & set(A3):
        raise ValueError("density needs pairwise disjoint sets")
    return Fraction(crossing_count(H, A1, A2, A3), len(A1) * len(A2) * len(A3))


@dataclass
class RegularityVerdict:
    """``status`` is one of regular, irregular, plausibly-regular.

    Only the exhaustive mode can return ``regular``. ``witness`` holds two
    sub-triples whose densities are too far apart (or one too far from d).
    """

    status: str
    density: Fraction
    eps: Fraction
    d: Fraction | None
    spread: tuple[Fraction, Fraction] | None = None
    witness: tuple | None = None
    flags: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def regular(self) -> bool:
        return self.status == "regular"

    @property
    def irregular(self) -> bool:
        return self.status == "irregular"


def min_subset_size(size: int, eps: Fraction) -> int:
    return max(1, ceil(eps * size))


def _decide(lo, hi, eps, d) -> bool:
    if d is None:
        return hi[0] - lo[0] <= 2 * eps
    return hi[0] - d <= eps and d - lo[0] <= eps


def check_regular_triple(
    H: Hypergraph3, parts, eps, d=None, mode: str = "exhaustive",
    k: int = DEFAULT_SAMPLES, seed=None,
) -> RegularityVerdict:
    """Test (eps, d)-regularity, or eps-regularity when ``d`` is None."""
    eps = _frac(eps)
    d = None if d is None else _frac(d)
    V = [sorted(p) for p in parts]
    flags = []
    if any(len(p) == 0 for p in V):
        # no sub-triple qualifies, so the condition holds vacuously
        return RegularityVerdict("regular", Fraction(0), eps, d, flags=["vacuous"])
    if any(eps * len(p) < 1 for p in V):
        flags.append("small-class")
    whole = density(H, *V)
    if mode == "exhaustive":
        if max(len(p) for p in V) > EXHAUSTIVE_GUARD:
            raise ValueError(f"exhaustive mode is limited to classes of size <= {EXHAUSTIVE_GUARD}")
        lo, hi, checked = _exhaustive_extremes(H, V, eps)
        ok = _decide(lo, hi, eps, d)
        return RegularityVerdict(
            "regular" if ok else "irregular", whole, eps, d, (lo[0], hi[0]),
            None if ok else (lo[1], hi[1]), flags, checked,
        )
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    sizes = [min_subset_size(len(p), eps) for p in V]
    lo = hi = (whole, tuple(tuple(p) for p in V))
    for _ in range(k):
        A = tuple(tuple(sorted(rng.choice(p, size=s, replace=False).tolist())) for p, s in zip(V, sizes))
        x = density(H, *A)
        if x < lo[0]:
            lo = (x, A)
        if x > hi[0]:
            hi = (x, A)
        if not _decide(lo, hi, eps, d):
            return RegularityVerdict("irregular", whole, eps, d, (lo[0], hi[0]), (lo[1], hi[1]), flags, _ + 1)
    return RegularityVerdict("plausibly-regular", whole, eps, d, (lo[0], hi[0]), None, flags, k)


def _exhaustive_extremes(H, V, eps):
    """Min and max sub-density over all qualifying sub-triples.

    For fixed A1, A2 the count of edges through each c in V3 is known, so the
    extreme A3 of each size takes the largest or smallest counts.
    """
    a, b, c = (len(p) for p in V)
    s1, s2, s3 = (min_subset_size(len(p), eps) for p in V)
    E = np.zeros((a, b, c), dtype=np.int64)
    idx3 = {v: i for i, v in enumerate(V[2])}
    for i, x in enumerate(V[0]):
        for j, y in enumerate(V[1]):
            m = H.pair_masks[x][y]
            for z in V[2]:
                if m >> z & 1:
                    E[i, j, idx3[z]] = 1

    def subsets(size, smin):
        rows = [r for r in itertools.product((0, 1), repeat=size) if sum(r) >= smin]
        return np.array(rows, dtype=np.int64).reshape(-1, size)

    S1, S2 = subsets(a, s1), subsets(b, s2)
    n1, n2 = S1.sum(1), S2.sum(1)
    P = np.einsum("ia,abc->ibc", S1, E)  # per A1: counts by (y, z)
    best_lo = (Fraction(2), None)
    best_hi = (Fraction(-1), None)
    checked = 0
    sizes3 = np.arange(1, c + 1)
    for i in range(len(S1)):
        Q = S2 @ P[i]  # (len S2, c): edges through each z from A1 x A2
        Qs = np.sort(Q, axis=1)
        low_cum = np.cumsum(Qs, axis=1)
        high_cum = np.cumsum(Qs[:, ::-1], axis=1)
        denom = n1[i] * n2[:, None] * sizes3[None, :]
        lo_d = low_cum / denom
        hi_d = high_cum / denom
        lo_d[:, : s3 - 1] = np.inf
        hi_d[:, : s3 - 1] = -np.inf
        checked += len(S2) * (c - s3 + 1)
        j, s = np.unravel_index(np.argmin(lo_d), lo_d.shape)
        val = Fraction(int(low_cum[j, s]), int(denom[j, s]))
        if val < best_lo[0]:
            best_lo = (val, _witness(V, S1[i], S2[j], np.argsort(Q[j], kind="stable")[: s + 1]))
        j, s = np.unravel_index(np.argmax(hi_d), hi_d.shape)
        val = Fraction(int(high_cum[j, s]), int(denom[j, s]))
        if val > best_hi[0]:
            best_hi = (val, _witness(V, S1[i], S2[j], np.argsort(-Q[j], kind="stable")[: s + 1]))
    return best_lo, best_hi, checked


def _witness(V, r1, r2, idx3):
    A1 = tuple(v for v, k in zip(V[0], r1) if k)
    A2 = tuple(v for v, k in zip(V[1], r2) if k)
    A3 = tuple(sorted(V[2][int(i)] for i in idx3))
    return (A1, A2, A3)


# ---------------------------------------------------------------------------


@dataclass
class ClusterHypergraphK:
    t: int
    edges: list[tuple[int, int, int]]
    eps: Fraction
    d: Fraction
    provenance: dict = field(default_factory=dict)

    @property
    def hypergraph(self) -> Hypergraph3:
        return Hypergraph3(self.t, self.edges, {"generator": "cluster", "eps": str(self.eps), "d": str(self.d)})

    def provenance_json(self) -> dict:
        return {
            "eps": str(self.eps), "d": str(self.d),
            "triples": {
                "-".join(map(str, key)): {"density": str(p["density"]), "verdict": p["verdict"]}
                for key, p in sorted(self.provenance.items())
            },
        }


def cluster_hypergraph(
    H: Hypergraph3, Q: Partition, eps, d, k: int = DEFAULT_SAMPLES, seed: int = 0,
) -> ClusterHypergraphK:
    """K(eps, d, Q): edge ijl iff d(V_i, V_j, V_l) >= d and no sampled irregularity.

    Each triple gets its own generator seeded by (seed, i, j, l) so the
    result does not depend on evaluation order.
    """
    eps, d = _frac(eps), _frac(d)
    edges, prov = [], {}
    for tri in itertools.combinations(range(Q.t), 3):
        parts = [Q.classes[i] for i in tri]
        if not all(parts):
            prov[tri] = {"density": Fraction(0), "verdict": "empty"}
            continue
        dens = density(H, *parts)
        if dens < d:
            prov[tri] = {"density": dens, "verdict": "sparse"}
            continue
        ss = np.random.SeedSequence([int(seed), *tri])
        v = check_regular_triple(H, parts, eps, None, "sampled", k, ss)
        prov[tri] = {"density": dens, "verdict": v.status}
        if not v.irregular:
            edges.append(tri)
    return ClusterHypergraphK(Q.t, edges, eps, d, prov)


@dataclass
class InheritanceReport:
    host_ratio: float
    cluster_ratio: float
    gap: float
    host_min_degree: int
    cluster_min_degree: int
    cluster_edges: int


def degree_inheritance_report(H: Hypergraph3, Q: Partition, eps, d, k: int = DEFAULT_SAMPLES, seed: int = 0):
    """Normalised minimum degrees of H and of K(eps, d, Q) side by side."""
    K = cluster_hypergraph(H, Q, eps, d, k, seed).hypergraph
    dh = H.min_degree(1) if H.n >= 3 else 0
    dk = K.min_degree(1) if K.n >= 3 else 0
    hr = dh / comb(H.n, 2) if H.n >= 2 else 0.0
    kr = dk / comb(K.n, 2) if K.n >= 2 else 0.0
    return InheritanceReport(hr, kr, hr - kr, dh, dk, len(K.edges))
