"""Core 3-uniform hypergraph type, degree queries and structural validators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

Edge = tuple[int, int, int]

# Soft limit for the exact searches; Python ints are unbounded, so this is a
# runtime guard rather than a storage constraint.
BITSET_SOFT_LIMIT = 64


def canon(a: int, b: int, c: int) -> Edge:
    if a == b or b == c or a == c:
        raise ValueError(f"edge needs 3 distinct vertices, got {(a, b, c)}")
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


class Hypergraph3:
    """Immutable 3-uniform hypergraph on the vertex set ``range(n)``.

    Edges are stored as sorted triples. Pair codegrees and pair-neighbour
    bitmasks are computed lazily on first use; both are what the solvers
    query in their inner loops.

    ``meta`` carries free-form provenance (generator name, parameters, seed,
    label legend). It does not take part in equality.
    """

    __slots__ = ("n", "edges", "meta", "__dict__")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), meta: dict | None = None):
        if n < 0:
            raise ValueError("n must be non-negative")
        canon_edges = set()
        for e in edges:
            if len(e) != 3:
                raise ValueError(f"edge {e!r} is not a triple")
            t = canon(*(int(x) for x in e))
            if t[0] < 0 or t[2] >= n:
                raise ValueError(f"edge {t} out of range for n={n}")
            canon_edges.add(t)
        self.n = n
        self.edges: frozenset[Edge] = frozenset(canon_edges)
        self.meta = dict(meta or {})

    # -- basic protocol ---------------------------------------------------

    def __repr__(self):
        name = self.meta.get("generator")
        tag = f" {name}" if name else ""
        return f"<Hypergraph3{tag} n={self.n} m={len(self.edges)}>"

    def __eq__(self, other):
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __contains__(self, e) -> bool:
        try:
            return canon(*e) in self.edges
        except ValueError:
            return False

    def __len__(self):
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, a: int, b: int, c: int) -> bool:
        if a == b or b == c or a == c:
            return False
        return tuple(sorted((a, b, c))) in self.edges

    # -- derived tables ---------------------------------------------------

    @cached_property
    def vertex_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for e in self.edges:
            deg[list(e)] += 1
        return deg

    @cached_property
    def codegree(self) -> np.ndarray:
        cd = np.zeros((self.n, self.n), dtype=np.int64)
        for a, b, c in self.edges:
            cd[a, b] += 1
            cd[b, a] += 1
            cd[a, c] += 1
            cd[c, a] += 1
            cd[b, c] += 1
            cd[c, b] += 1
        return cd

    @cached_property
    def pair_masks(self) -> list[list[int]]:
        """``pair_masks[a][b]`` is the bitmask of all c with abc an edge."""
        masks = [[0] * self.n for _ in range(self.n)]
        for a, b, c in self.edges:
            masks[a][b] |= 1 << c
            masks[b][a] |= 1 << c
            masks[a][c] |= 1 << b
            masks[c][a] |= 1 << b
            masks[b][c] |= 1 << a
            masks[c][b] |= 1 << a
        return masks

    @cached_property
    def incident(self) -> list[list[Edge]]:
        inc: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edge_list:
            for v in e:
                inc[v].append(e)
        return inc

    # -- queries ----------------------------------------------------------

    def _check_set(self, S) -> tuple[int, ...]:
        S = tuple(sorted(set(S)))
        if len(S) not in (1, 2):
            raise ValueError(f"degree queries take 1 or 2 vertices, got {len(S)}")
        for v in S:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} not in V(H)")
        return S

    def degree(self, S) -> int:
        """Number of edges containing the vertex set ``S`` (|S| in {1, 2})."""
        if isinstance(S, (int, np.integer)):
            S = (int(S),)
        S = self._check_set(S)
        if len(S) == 1:
            return int(self.vertex_degrees[S[0]])
        return int(self.codegree[S[0], S[1]])

    def min_degree(self, s: int = 1) -> int:
        if s not in (1, 2):
            raise ValueError("s must be 1 or 2")
        if self.n < 3:
            return 0
        if s == 1:
            return int(self.vertex_degrees.min())
        cd = self.codegree
        iu = np.triu_indices(self.n, k=1)
        return int(cd[iu].min())

    def neighborhood(self, S) -> set[frozenset[int]]:
        """All (3-|S|)-sets T with S ∪ T an edge."""
        if isinstance(S, (int, np.integer)):
            S = (int(S),)
        S = self._check_set(S)
        out = set()
        for e in self.incident[S[0]]:
            if all(v in e for v in S):
                out.add(frozenset(e) - frozenset(S))
        return out

    def link_graph(self, v: int) -> nx.Graph:
        """Graph on V minus v with uw an edge iff uvw is an edge of H."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} not in V(H)")
        g = nx.Graph()
        g.add_nodes_from(u for u in range(self.n) if u != v)
        for e in self.incident[v]:
            u, w = (x for x in e if x != v)
            g.add_edge(u, w)
        return g

    def induced(self, W: Iterable[int]) -> tuple["Hypergraph3", dict[int, int]]:
        """Induced subhypergraph on W, relabelled densely in sorted order.

        Returns the new hypergraph and the map old label -> new label.
        """
        W = sorted(set(W))
        for v in W:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} not in V(H)")
        relabel = {v: i for i, v in enumerate(W)}
        keep = set(W)
        edges = [
            (relabel[a], relabel[b], relabel[c])
            for a, b, c in self.edges
            if a in keep and b in keep and c in keep
        ]
        return Hypergraph3(len(W), edges), relabel

    def restrict(self, W: Iterable[int]) -> "Hypergraph3":
        """Edges inside W, keeping the original labels and n."""
        keep = set(W)
        return Hypergraph3(
            self.n, (e for e in self.edges if e[0] in keep and e[1] in keep and e[2] in keep)
        )

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Hypergraph3":
        return Hypergraph3(self.n, list(self.edges) + list(extra), self.meta)

    # -- serialisation ----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        lines += [f"{a} {b} {c}" for a, b, c in self.edge_list]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph3":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0][0] != "n" or len(rows[0]) != 2:
            raise ValueError("first line must be 'n <count>'")
        n = int(rows[0][1])
        return cls(n, [tuple(int(x) for x in r) for r in rows[1:]])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edge_list], "meta": self.meta}

    @classmethod
    def from_json(cls, data: dict) -> "Hypergraph3":
        return cls(data["n"], data["edges"], data.get("meta"))


def save(H: Hypergraph3, path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "text")
    if fmt == "json":
        path.write_text(json.dumps(H.to_json(), sort_keys=True) + "\n")
    else:
        path.write_text(H.to_text())


def load(path) -> Hypergraph3:
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return Hypergraph3.from_json(json.loads(text))
    return Hypergraph3.from_text(text)


# ---------------------------------------------------------------------------
# Paths and cycles


@dataclass(frozen=True)
class LoosePath:
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    @property
    def edges(self) -> list[Edge]:
        o = self.order
        return [canon(o[i], o[i + 1], o[i + 2]) for i in range(0, len(o) - 2, 2)]

    @property
    def ends(self) -> tuple[int, int]:
        return self.order[0], self.order[-1]

    def __len__(self):
        return len(self.order)

    def reversed(self) -> "LoosePath":
        return LoosePath(self.order[::-1])


@dataclass(frozen=True)
class LooseCycle:
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    @property
    def edges(self) -> list[Edge]:
        o, k = self.order, len(self.order)
        return [canon(o[i], o[(i + 1) % k], o[(i + 2) % k]) for i in range(0, k, 2)]

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True)
class TightPath:
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    @property
    def edges(self) -> list[Edge]:
        o = self.order
        return [canon(o[i], o[i + 1], o[i + 2]) for i in range(len(o) - 2)]

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _distinct(order, n) -> Verdict | None:
    if len(set(order)) != len(order):
        seen = set()
        for v in order:
            if v in seen:
                return Verdict(False, "repeated-vertex", {"vertex": v})
            seen.add(v)
    for v in order:
        if not 0 <= v < n:
            return Verdict(False, "vertex-out-of-range", {"vertex": v})
    return None


def validate_loose_path(H: Hypergraph3, P) -> Verdict:
    order = tuple(P.order if hasattr(P, "order") else P)
    t = len(order)
    if t < 3 or t % 2 == 0:
        return Verdict(False, "bad-length", {"length": t})
    bad = _distinct(order, H.n)
    if bad is not None:
        return bad
    for i in range(0, t - 2, 2):
        if not H.has_edge(order[i], order[i + 1], order[i + 2]):
            return Verdict(False, "missing-edge", {"edge": order[i : i + 3], "index": i // 2})
    return Verdict(True)


def validate_tight_path(H: Hypergraph3, P) -> Verdict:
    order = tuple(P.order if hasattr(P, "order") else P)
    if len(order) < 3:
        return Verdict(False, "bad-length", {"length": len(order)})
    bad = _distinct(order, H.n)
    if bad is not None:
        return bad
    for i in range(len(order) - 2):
        if not H.has_edge(*order[i : i + 3]):
            return Verdict(False, "missing-edge", {"edge": order[i : i + 3], "index": i})
    return Verdict(True)


def validate_loose_cycle(H: Hypergraph3, C, hamilton: bool = False) -> Verdict:
    """Check a cyclic vertex order against H.

    A loose cycle needs an even number of at least 6 vertices (3 edges), all
    distinct, with every implied triple an edge of H. With ``hamilton`` the
    cycle must also cover V(H) exactly.
    """
    order = tuple(C.order if hasattr(C, "order") else C)
    k = len(order)
    if k < 6 or k % 2:
        return Verdict(False, "bad-length", {"length": k})
    bad = _distinct(order, H.n)
    if bad is not None:
        return bad
    for i in range(0, k, 2):
        tri = (order[i], order[(i + 1) % k], order[(i + 2) % k])
        if not H.has_edge(*tri):
            return Verdict(False, "missing-edge", {"edge": tri, "index": i // 2})
    if hamilton and k != H.n:
        return Verdict(False, "not-spanning", {"covered": k, "n": H.n})
    return Verdict(True)

