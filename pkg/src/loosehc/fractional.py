"""Exact-rational fractional hom(M)-tilings and the L29 case analysis.

Every weight here is a :class:`fractions.Fraction`. The six edge patterns are
the only weight shapes used; each already satisfies the labelling condition
(two equal top values, third value between 2/3 of the top and the top).
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .constructions import L29_U, L29_V, M_ROLES, L29Instance, l29_host, l29_role_names
from .hypergraph import Edge, Hypergraph3, canon

ONE = Fraction(1)
TARGET_WEIGHT = Fraction(49, 3)
HMIN_FLOOR = Fraction(1, 3)


class Pattern(enum.Enum):
    """Edge weight shapes as (top, top, low)."""

    a1 = (Fraction(1), Fraction(1), Fraction(1))
    a2 = (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    a3 = (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
    b1 = (Fraction(1), Fraction(1), Fraction(2, 3))
    b2 = (Fraction(1, 2), Fraction(1, 2), Fraction(1, 3))
    b3 = (Fraction(2, 3), Fraction(2, 3), Fraction(1, 2))

    @property
    def top(self) -> Fraction:
        return self.value[0]

    @property
    def low(self) -> Fraction:
        return self.value[2]

    @property
    def uniform(self) -> bool:
        return self.top == self.low

    @property
    def total(self) -> Fraction:
        return sum(self.value, Fraction(0))

    def assign(self, edge, low_vertex=None) -> dict[int, Fraction]:
        """Vertex weights on ``edge``; ``low_vertex`` receives the low value."""
        if self.uniform:
            return {v: self.top for v in edge}
        if low_vertex not in edge:
            raise ValueError(f"low vertex {low_vertex} not in edge {edge}")
        return {v: (self.low if v == low_vertex else self.top) for v in edge}


def satisfies_labelling(values) -> bool:
    a, b, c = sorted(values, reverse=True)
    if a == 0:
        return b == 0 and c == 0
    return a == b and c >= Fraction(2, 3) * a and c > 0


# ---------------------------------------------------------------------------


@dataclass
class FractionalTiling:
    """Weight function h on (vertex, edge) pairs of ``host``.

    ``weights`` maps (v, e) with e a sorted triple to a Fraction. Pairs not
    present are zero.
    """

    host: Hypergraph3
    weights: dict[tuple[int, Edge], Fraction] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_edges(cls, host, edge_weights, meta=None) -> "FractionalTiling":
        """Build from ``{edge: {vertex: weight}}``."""
        w = {}
        for e, vals in edge_weights.items():
            ce = canon(*e)
            for v, x in vals.items():
                x = Fraction(x)
                if x:
                    w[(v, ce)] = w.get((v, ce), Fraction(0)) + x
        return cls(host, w, dict(meta or {}))

    def edge_values(self) -> dict[Edge, dict[int, Fraction]]:
        out: dict[Edge, dict[int, Fraction]] = {}
        for (v, e), x in self.weights.items():
            out.setdefault(e, {})[v] = x
        return out

    def load(self, v: int) -> Fraction:
        return sum((x for (u, _), x in self.weights.items() if u == v), Fraction(0))

    def loads(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for (v, _), x in self.weights.items():
            out[v] = out.get(v, Fraction(0)) + x
        return out

    @property
    def weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @property
    def h_min(self):
        nz = [x for x in self.weights.values() if x != 0]
        return min(nz) if nz else float("inf")

    def union(self, other: "FractionalTiling") -> "FractionalTiling":
        if other.host is not self.host and other.host != self.host:
            raise ValueError("union needs a common host")
        w = dict(self.weights)
        for k, x in other.weights.items():
            w[k] = w.get(k, Fraction(0)) + x
        return FractionalTiling(self.host, w)

    def relabel(self, host: Hypergraph3, mapping) -> "FractionalTiling":
        """Push the tiling through a vertex map into another host."""
        w = {}
        for (v, e), x in self.weights.items():
            ne = canon(*(mapping[u] for u in e))
            w[(mapping[v], ne)] = x
        return FractionalTiling(host, w, dict(self.meta))

    def to_json(self) -> list:
        rows = []
        for e, vals in sorted(self.edge_values().items()):
            rows.append([list(e), [str(vals.get(v, Fraction(0))) for v in e]])
        return rows

    @classmethod
    def from_json(cls, host, rows) -> "FractionalTiling":
        return cls.from_edges(
            host, {tuple(e): dict(zip(e, (Fraction(s) for s in vals))) for e, vals in rows}
        )


@dataclass
class TilingReport:
    valid: bool
    h_min: object
    weight: Fraction
    violations: list[tuple[str, object]] = field(default_factory=list)

    def __bool__(self):
        return self.valid


def validate_fractional_tiling(T: FractionalTiling) -> TilingReport:
    """Check conditions (a) support, (b) vertex load and (c) labelling exactly."""
    bad: list[tuple[str, object]] = []
    for (v, e), x in T.weights.items():
        if not isinstance(x, Fraction):
            bad.append(("type", (v, e)))
            continue
        if x < 0 or x > 1:
            bad.append(("range", (v, e)))
        if x != 0 and (e not in T.host.edges or v not in e):
            bad.append(("a", (v, e)))
    for v, load in sorted(T.loads().items()):
        if load > 1:
            bad.append(("b", v))
    for e, vals in sorted(T.edge_values().items()):
        if e not in T.host.edges:
            continue
        trio = [vals.get(v, Fraction(0)) for v in e]
        if any(trio) and not satisfies_labelling(trio):
            bad.append(("c", e))
    return TilingReport(not bad, T.h_min, T.weight, bad)


def canonical_M_weights(host: Hypergraph3 | None = None, embedding=None) -> FractionalTiling:
    """Weight-8 tiling of one copy of M.

    Outer edges x1x2w1 and w2z1z2 get (1, 1, 2/3) with w1, w2 low; inner
    edges w1y1y2 and y1y2w2 get (1/2, 1/2, 1/3) with w1, w2 low. With
    ``embedding`` (8 host vertices in role order) the copy lives in ``host``.
    """
    from .constructions import make_M

    if host is None:
        host, embedding = make_M(), tuple(range(8))
    emb = tuple(embedding)
    x1, x2, w1, y1, y2, w2, z1, z2 = emb
    ew = {
        (x1, x2, w1): Pattern.b1.assign((x1, x2, w1), w1),
        (w1, y1, y2): Pattern.b2.assign((w1, y1, y2), w1),
        (y1, y2, w2): Pattern.b2.assign((y1, y2, w2), w2),
        (w2, z1, z2): Pattern.b1.assign((w2, z1, z2), w2),
    }
    return FractionalTiling.from_edges(host, ew, {"kind": "canonical-M", "embedding": emb})


# ---------------------------------------------------------------------------
# Figure templates on the L29 role labels

ROLE = {name: i for i, name in enumerate(l29_role_names())}
U, V = L29_U, L29_V
PAIR_CLASSES = {"X": ("x1", "x2"), "Y": ("y1", "y2"), "Z": ("z1", "z2")}
# two disjoint edges of M minus one of its pair classes
M_MINUS = {
    "X": (("w1", "y1", "y2"), ("w2", "z1", "z2")),
    "Y": (("x1", "x2", "w1"), ("w2", "z1", "z2")),
    "Z": (("x1", "x2", "w1"), ("y1", "y2", "w2")),
}
FAMILY_ORDER = ("matching", "co-neighbour", "cross-class", "forb")


def _r(name: str) -> int:
    return ROLE[name]


def _p(names) -> tuple[str, ...]:
    return tuple(n + "'" for n in names)


@dataclass(frozen=True)
class Template:
    """A weighted edge list on the 18 L29 roles.

    ``edges`` holds (sorted local triple, pattern, low vertex or None).
    """

    case: str
    family: str
    edges: tuple[tuple[Edge, Pattern, int | None], ...]

    @property
    def required(self) -> frozenset[tuple[int, int]]:
        """Crossing pairs (M1 role, M2 role) the template needs present."""
        req = set()
        for e, _, _ in self.edges:
            if U in e or V in e:
                a, b = sorted(x for x in e if x not in (U, V))
                req.add((a, b - 8))
        return frozenset(req)

    @property
    def weight(self) -> Fraction:
        return sum((p.total for _, p, _ in self.edges), Fraction(0))

    def edge_weights(self) -> dict[Edge, dict[int, Fraction]]:
        return {e: p.assign(e, low) for e, p, low in self.edges}

    def tiling(self, host: Hypergraph3) -> FractionalTiling:
        return FractionalTiling.from_edges(
            host, self.edge_weights(), {"kind": "L29-template", "case": self.case, "family": self.family}
        )

    def permuted(self, perm) -> "Template":
        edges = []
        for e, p, low in self.edges:
            ne = canon(*(perm[x] for x in e))
            edges.append((ne, p, None if low is None else perm[low]))
        return Template(self.case, self.family, tuple(sorted(edges, key=lambda t: (t[0], t[1].name))))

    def describe(self) -> list[str]:
        names = l29_role_names()
        out = []
        for e, p, low in self.edges:
            lbl = "".join(names[x] for x in e)
            out.append(f"{p.name}:{lbl}" + (f"(low {names[low]})" if low is not None else ""))
        return out


def _orient(case, family, spec) -> Template:
    """Resolve which vertex takes the low value on each non-uniform edge.

    ``spec`` lists (role names, pattern). The first orientation (in a fixed
    enumeration order) keeping every vertex load at most 1 wins.
    """
    edges = [(canon(*(_r(n) for n in names)), pat) for names, pat in spec]
    choices = [list(e) if not pat.uniform else [None] for e, pat in edges]
    for combo in itertools.product(*choices):
        load: dict[int, Fraction] = {}
        for (e, pat), low in zip(edges, combo):
            for v, x in pat.assign(e, low).items():
                load[v] = load.get(v, Fraction(0)) + x
        if all(x <= 1 for x in load.values()):
            return Template(case, family, tuple((e, pat, low) for (e, pat), low in zip(edges, combo)))
    raise ValueError(f"template {case} admits no feasible orientation")


def _case1(A: str, B: str) -> Template:
    a1, a2 = PAIR_CLASSES[A]
    b1, b2 = _p(PAIR_CLASSES[B])
    spec = [(("u", a1, b1), Pattern.a1), (("v", a2, b2), Pattern.a1)]
    spec += [(e, Pattern.a1) for e in M_MINUS[A]]
    spec += [(_p(e), Pattern.a1) for e in M_MINUS[B]]
    return _orient("case1" if (A, B) == ("X", "X") else f"case1[{A},{B}']", "matching", spec)


def _case2(A: str, wide: bool) -> Template:
    """a in A adjacent to both vertices of X' (``wide``) or of Y'."""
    a = PAIR_CLASSES[A][0]
    spec = [(e, Pattern.a1) for e in M_MINUS[A]]
    spec.append((_p(("w2", "z1", "z2")), Pattern.a1))
    if wide:
        spec += [
            (("u", a, "x1'"), Pattern.b3), (("v", a, "x2'"), Pattern.b3),
            (_p(("w1", "y1", "y2")), Pattern.b1), (_p(("x1", "x2", "w1")), Pattern.a3),
        ]
        name = "case2"
    else:
        spec += [
            (("u", a, "y1'"), Pattern.b3), (("v", a, "y2'"), Pattern.b3),
            (_p(("x1", "x2", "w1")), Pattern.b1), (_p(("w1", "y1", "y2")), Pattern.a3),
        ]
        name = "case2a"
    return _orient(name if A == "X" else f"{name}[{A}]", "co-neighbour", spec)


def _case3(A: str, far: bool) -> Template:
    """a1 b1, a2 b2 with b1 in X' and b2 in Y' (or in Z' when ``far``)."""
    a1, a2 = PAIR_CLASSES[A]
    spec = [(e, Pattern.a1) for e in M_MINUS[A]]
    if not far:
        spec += [
            (_p(("w2", "z1", "z2")), Pattern.a1),
            (("u", a1, "x1'"), Pattern.b1), (("v", a2, "y1'"), Pattern.b1),
            (_p(("x1", "x2", "w1")), Pattern.b2), (_p(("w1", "y1", "y2")), Pattern.b2),
        ]
        name = "case3"
    else:
        spec += [
            (("u", a1, "x1'"), Pattern.b1), (("v", a2, "z1'"), Pattern.b1),
            (_p(("x1", "x2", "w1")), Pattern.b2), (_p(("w2", "z1", "z2")), Pattern.b2),
            (_p(("w1", "y1", "y2")), Pattern.a2), (_p(("y1", "y2", "w2")), Pattern.a2),
        ]
        name = "case3a"
    return _orient(name if A == "X" else f"{name}[{A}]", "cross-class", spec)


def _forb_templates() -> list[Template]:
    P = Pattern
    case6 = [  # w1 y2' forbidden for y1 y1'
        (("w2'", "z1'", "z2'"), P.a1),
        (("y1", "y1'", "u"), P.a2),
        (("x1", "x2", "w1"), P.b1), (("w2", "z1", "z2"), P.b1), (("x1'", "x2'", "w1'"), P.b1),
        (("w1", "y2'", "v"), P.b2), (("y1", "y2", "w2"), P.b2), (("w1'", "y1'", "y2'"), P.b2),
    ]
    case4 = [  # x2 w1' forbidden for x1 x1'
        (("x1", "x1'", "u"), P.a1), (("w1", "y1", "y2"), P.a1), (("w2", "z1", "z2"), P.a1),
        (("x2", "w1'", "v"), P.b1), (("w2'", "z1'", "z2'"), P.b1),
        (("w1'", "y1'", "y2'"), P.b2), (("y1'", "y2'", "w2'"), P.b2),
    ]
    case4a = [  # y2 w1' forbidden for y1 x1'
        (("y1", "x1'", "u"), P.a1), (("x1", "x2", "w1"), P.a1), (("w2", "z1", "z2"), P.a1),
        (("y2", "w1'", "v"), P.b1), (("w2'", "z1'", "z2'"), P.b1),
        (("w1'", "y1'", "y2'"), P.b2), (("y1'", "y2'", "w2'"), P.b2),
    ]
    case5 = [  # w1 x2' forbidden for y1 x1'
        (("w2'", "z1'", "z2'"), P.a1),
        (("y1", "x1'", "u"), P.a2),
        (("x1", "x2", "w1"), P.b1), (("w2", "z1", "z2"), P.b1), (("w1'", "y1'", "y2'"), P.b1),
        (("w1", "x2'", "v"), P.b2), (("y1", "y2", "w2"), P.b2), (("x1'", "x2'", "w1'"), P.b2),
    ]
    return [
        _orient("case6", "forb", case6), _orient("case4", "forb", case4),
        _orient("case4a", "forb", case4a), _orient("case5", "forb", case5),
    ]


FIGURE_CASES = ("case1", "case2", "case2a", "case3", "case3a", "case6", "case4", "case4a", "case5")


@lru_cache(maxsize=None)
def _base_templates() -> tuple[Template, ...]:
    out = [_case1(A, B) for A in ("X", "Y") for B in ("X", "Y")]
    out += [_case2(A, wide) for A in ("X", "Y") for wide in (True, False)]
    out += [_case3(A, far) for A in ("X", "Y") for far in (False, True)]
    out += _forb_templates()
    return tuple(out)


def figure_template(case_id: str) -> Template:
    """The weighted edge list drawn for one of the nine figure cases."""
    for t in _base_templates():
        if t.case == case_id:
            return t
    raise ValueError(f"unknown figure case {case_id!r}; expected one of {FIGURE_CASES}")


# -- symmetries of the L29 role set ----------------------------------------


def _perm_from_swaps(swaps) -> tuple[int, ...]:
    p = list(range(18))
    for a, b in swaps:
        p[_r(a)], p[_r(b)] = _r(b), _r(a)
    return tuple(p)


def _generators() -> list[tuple[int, ...]]:
    gens = []
    for primed in ("", "'"):
        for a, b in (("x1", "x2"), ("y1", "y2"), ("z1", "z2")):
            gens.append(_perm_from_swaps([(a + primed, b + primed)]))
        gens.append(_perm_from_swaps(
            [("x1" + primed, "z1" + primed), ("x2" + primed, "z2" + primed), ("w1" + primed, "w2" + primed)]
        ))
    gens.append(_perm_from_swaps([(r, r + "'") for r in M_ROLES]))
    gens.append(_perm_from_swaps([("u", "v")]))
    return gens


@lru_cache(maxsize=None)
def l29_symmetries() -> tuple[tuple[int, ...], ...]:
    """All role permutations preserving the L29 structure (1024 of them)."""
    ident = tuple(range(18))
    seen = {ident}
    frontier = [ident]
    gens = _generators()
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(18))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return tuple(sorted(seen))


@lru_cache(maxsize=None)
def template_catalogue() -> dict[str, tuple[Template, ...]]:
    """Every distinct symmetric image of every base template, grouped by family."""
    cat: dict[str, dict] = {f: {} for f in FAMILY_ORDER}
    for base in _base_templates():
        for g in l29_symmetries():
            t = base.permuted(g)
            cat[t.family].setdefault(t.edges, t)
    return {f: tuple(sorted(d.values(), key=_sort_key)) for f, d in cat.items()}


def _sort_key(t: Template):
    return (t.case, [(e, p.name, -1 if low is None else low) for e, p, low in t.edges])


def _is_m_edge(e: Edge) -> bool:
    return U not in e and V not in e


# -- the search --------------------------------------------------------------


class L29SearchFailure(RuntimeError):
    """No tiling of the required weight was found; every instance with >= 29 crossing pairs should have one."""


def _stage1(crossing) -> Template | None:
    crossing = frozenset(crossing)
    cat = template_catalogue()
    for fam in FAMILY_ORDER:
        for t in cat[fam]:
            if t.required <= crossing:
                return t
    return None


def pattern_search(
    host: Hypergraph3,
    target: Fraction = TARGET_WEIGHT,
    edges=None,
    time_budget: float | None = 5.0,
) -> FractionalTiling | None:
    """Depth-first search over pattern assignments to ``edges``.

    Each edge is skipped or given one of the six patterns (with a choice of
    low vertex for the non-uniform ones). Branches whose weight plus the
    remaining vertex capacity cannot reach ``target`` are cut.
    """
    edges = sorted(edges if edges is not None else host.edges)
    options = []
    for e in edges:
        opts = []
        for pat in sorted(Pattern, key=lambda p: -p.total):
            lows = [None] if pat.uniform else list(e)
            for low in lows:
                opts.append(pat.assign(e, low))
        options.append(opts)
    verts = sorted({v for e in edges for v in e})
    load = {v: Fraction(0) for v in verts}
    # last edge index touching each vertex, for the capacity bound
    last_use = {v: max(i for i, e in enumerate(edges) if v in e) for v in verts}
    deadline = None if time_budget is None else time.monotonic() + time_budget
    chosen: list[tuple[Edge, dict]] = []
    steps = [0]

    def bound(i: int, w: Fraction) -> Fraction:
        cap = sum((1 - load[v] for v in verts if last_use[v] >= i), Fraction(0))
        return w + cap

    def dfs(i: int, w: Fraction) -> bool:
        steps[0] += 1
        if deadline is not None and steps[0] % 1024 == 0 and time.monotonic() > deadline:
            raise TimeoutError
        if w >= target:
            return True
        if i == len(edges) or bound(i, w) < target:
            return False
        e = edges[i]
        for vals in options[i]:
            if all(load[v] + x <= 1 for v, x in vals.items()):
                for v, x in vals.items():
                    load[v] += x
                chosen.append((e, vals))
                if dfs(i + 1, w + sum(vals.values(), Fraction(0))):
                    return True
                chosen.pop()
                for v, x in vals.items():
                    load[v] -= x
        return dfs(i + 1, w)

    try:
        found = dfs(0, Fraction(0))
    except TimeoutError:
        return None
    if not found:
        return None
    return FractionalTiling.from_edges(host, dict(chosen), {"kind": "pattern-search"})


def search_L29_fractional(L: L29Instance, budget: float = 5.0, stage1: bool = True) -> FractionalTiling:
    """Fractional hom(M)-tiling of L with h_min >= 1/3 and weight >= 49/3.

    Stage 1 scans the figure templates and all their symmetric images in a
    fixed family order (matching, co-neighbour, cross-class, forbidden pair)
    and instantiates the first one whose crossing pairs are all present.
    Stage 2 runs :func:`pattern_search` on the whole instance.
    """
    if stage1:
        t = _stage1(L.crossing)
        if t is not None:
            T = t.tiling(L.host)
            T.meta.update({"stage": 1, "template": t.describe()})
            return T
    T = pattern_search(L.host, TARGET_WEIGHT, time_budget=budget)
    if T is None:
        raise L29SearchFailure(
            f"no tiling of weight >= 49/3 for crossing of size {len(L.crossing)}: {sorted(L.crossing)}"
        )
    T.meta["stage"] = 2
    return T


# -- the forbidden-pair injection -------------------------------------------

FORB_TABLE = {
    ("x1", "x1'"): ("w1", "x2'"),
    ("x1", "y1'"): ("x2", "w1'"),
    ("x1", "z1'"): ("x2", "w2'"),
    ("y1", "x1'"): ("y2", "w1'"),
    ("y1", "y1'"): ("w1", "y2'"),
    ("y1", "z1'"): ("w1", "z2'"),
    ("z1", "x1'"): ("w2", "x2'"),
    ("z1", "y1'"): ("w2", "y2'"),
    ("z1", "z1'"): ("z2", "w2'"),
}


def forb_set() -> set[tuple[int, int]]:
    """Role pairs (a, b) touching w1, w2 on the M1 side or w1', w2' on the M2 side."""
    ws = {_r("w1"), _r("w2")}
    return {(a, b) for a in range(8) for b in range(8) if a in ws or b in ws}


@dataclass
class ForbReport:
    table: dict
    injective: bool
    images_in_F: bool
    F_size: int
    domain_disjoint_from_F: bool
    certificates: dict
    ok: bool = False


def forb_injection() -> ForbReport:
    """The 9-entry table and its verification.

    For each entry (a, b) -> f the minimal instance with crossing {ab, f}
    must carry a template instantiation of weight >= 49/3.
    """
    F = forb_set()

    def pair(names):
        return (_r(names[0]), _r(names[1]) - 8)

    images = [pair(v) for v in FORB_TABLE.values()]
    domain = [pair(k) for k in FORB_TABLE]
    injective = len(set(images)) == len(images) == 9
    certs = {}
    for k, v in FORB_TABLE.items():
        crossing = frozenset({pair(k), pair(v)})
        t = _stage1(crossing)
        ok = False
        if t is not None:
            rep = validate_fractional_tiling(t.tiling(l29_host(crossing)))
            ok = rep.valid and rep.h_min >= HMIN_FLOOR and rep.weight >= TARGET_WEIGHT
        certs[k] = {"image": v, "template": None if t is None else t.case,
                    "weight": None if t is None else t.weight, "ok": ok}
    rep = ForbReport(
        table=dict(FORB_TABLE),
        injective=injective,
        images_in_F=all(p in F for p in images),
        F_size=len(F),
        domain_disjoint_from_F=not (set(domain) & F),
        certificates=certs,
    )
    rep.ok = (rep.injective and rep.images_in_F and rep.F_size == 28
              and rep.domain_disjoint_from_F and all(c["ok"] for c in certs.values()))
    return rep


# -- unions over M-tilings ----------------------------------------------------


def m_tiling_weights(K: Hypergraph3, copies) -> FractionalTiling:
    """Disjoint union of the canonical weight-8 tilings on each copy."""
    T = FractionalTiling(K)
    for emb in copies:
        T = T.union(canonical_M_weights(K, emb))
    T.meta["kind"] = "M-tiling-union"
    return T


def stage1_certificate() -> dict:
    """Exhaustive proof that stage 1 never fails once |crossing| >= 29.

    Stage 1 fails on a crossing set exactly when the set contains no
    template's required pair, i.e. when it is independent in the conflict
    graph on the 64 role cells. So the largest independent set bounds every
    failing crossing.
    """
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from((a, b) for a in range(8) for b in range(8))
    for ts in template_catalogue().values():
        for t in ts:
            req = sorted(t.required)
            if len(req) != 2:  # pragma: no cover - every template uses u and v once
                raise ValueError("expected exactly two crossing pairs per template")
            G.add_edge(*req)
    clique, alpha = nx.max_weight_clique(nx.complement(G), weight=None)
    return {
        "alpha": alpha,
        "witness": sorted(clique),
        "witness_is_F": set(clique) == forb_set(),
        "conflict_edges": G.number_of_edges(),
    }
