from fractions import Fraction
from math import floor

import numpy as np
import pytest

from oracles import edge_set, m_vertex_sets, max_disjoint
from loosehc.constructions import l29_host, make_complete, make_L29, make_M, random_binomial, tripartite_random
from loosehc.fractional import TARGET_WEIGHT, Pattern, FractionalTiling, validate_fractional_tiling
from loosehc.hypergraph import Hypergraph3, validate_loose_path, validate_tight_path
from loosehc.regularity import Partition
from loosehc.tiling import (
    LOOSE_CLASS_PATTERN, MTiling, augmented_fractional_tiling, crossing_mask, find_augmenting_structure,
    find_M_copy_in_triple, greedy_loose_paths, greedy_tight_path, loose_path_tile_triple,
    m_copies_containing, m_tile_quotas, m_tile_regular_triple, max_M_tiling, path_tile,
    round_fractional_to_integral, validate_m_tiling,
)

F = Fraction


# -- greedy tight path ---------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_greedy_tight_path_bound(seed):
    H = random_binomial(14, 0.6, seed)
    d = F(len(H.edges), 14**3)  # hypothesis holds with equality
    P = greedy_tight_path(H, d)
    assert validate_tight_path(H, P)
    assert len(P) >= 2 * (d * 14 + 1)


def test_greedy_tight_path_complete_spans():
    P = greedy_tight_path(make_complete(10), F(1, 20))
    assert len(P) == 10 and validate_tight_path(make_complete(10), P)


def test_greedy_tight_path_empty():
    assert len(greedy_tight_path(Hypergraph3(6), F(1, 10))) == 0


# -- M copies ------------------------------------------------------------------

def test_validate_m_tiling():
    M = make_M()
    assert validate_m_tiling(M, MTiling([tuple(range(8))])) == []
    assert validate_m_tiling(M, MTiling([(1, 0, 2, 3, 4, 5, 6, 7)])) == []  # x1, x2 swap
    assert validate_m_tiling(M, MTiling([(0, 2, 1, 3, 4, 5, 6, 7)]))
    K = make_complete(12)
    assert validate_m_tiling(K, MTiling([tuple(range(8)), tuple(range(4, 12))]))


def test_m_copies_containing_every_vertex_of_M():
    M = make_M()
    for v in range(8):
        assert [frozenset(c) for c in m_copies_containing(M, v)] == [frozenset(range(8))]


def test_max_M_tiling_complete():
    assert len(max_M_tiling(make_complete(16))) == 2
    assert len(max_M_tiling(make_complete(15))) == 1
    assert len(max_M_tiling(make_complete(7))) == 0
    T = max_M_tiling(make_complete(16))
    assert T.meta["exact"] and validate_m_tiling(make_complete(16), T) == []


def sparse_host(rng, n, m):
    """Planted disjoint M copies plus a little noise, small enough for the 4-subset oracle."""
    perm = rng.permutation(n).tolist()
    edges = set()
    for k in range(m):
        r = perm[8 * k : 8 * k + 8]
        for a, b, c in ((0, 1, 2), (2, 3, 4), (3, 4, 5), (5, 6, 7)):
            edges.add(tuple(sorted((r[a], r[b], r[c]))))
    while len(edges) < 4 * m + 6:
        edges.add(tuple(sorted(rng.choice(n, 3, replace=False).tolist())))
    return Hypergraph3(n, edges)


def test_max_M_tiling_agrees_with_oracle():
    rng = np.random.default_rng(3)
    for _ in range(12):
        n = int(rng.integers(10, 20))
        H = sparse_host(rng, n, int(rng.integers(1, n // 8 + 1)))
        T = max_M_tiling(H)
        assert T.meta["exact"]
        assert validate_m_tiling(H, T) == []
        assert len(T) == max_disjoint(m_vertex_sets(H))


def test_max_M_tiling_greedy_fallback():
    T = max_M_tiling(make_complete(24), exact_guard=20)
    assert not T.meta["exact"] and len(T) == 3


# -- regular triples -------------------------------------------------------------

def test_quotas_balanced():
    for m in (8, 16, 24):
        assert m_tile_quotas((m, m, m), 0) == [F(m, 8)] * 3
    q = m_tile_quotas((12, 10, 10), F(1, 10))
    assert q == [F(9, 10) * (60 - 60) / 8, F(9, 10) * (66 - 50) / 8, F(9, 10) * (66 - 50) / 8]


def test_find_copy_profile():
    H, parts = tripartite_random((6, 6, 6), 1.0, 0)
    for i in range(3):
        c = find_M_copy_in_triple(H, parts, i)
        assert validate_m_tiling(H, MTiling([c])) == []
        counts = [sum(v in p for v in c) for p in parts]
        assert counts[i] == 2 and sorted(counts) == [2, 3, 3]


def test_m_tile_dense_triple():
    H, parts = tripartite_random((24, 24, 24), 0.9, 1)
    T, rep = m_tile_regular_triple(H, parts, F(1, 10), F(9, 10))
    assert validate_m_tiling(H, T) == []
    assert rep.quotas == [floor(t) for t in m_tile_quotas((24, 24, 24), F(1, 10))]
    assert all(g >= q for g, q in zip(rep.extracted, rep.quotas))
    assert rep.uncovered_total <= 8


def test_m_tile_preconditions():
    H, parts = tripartite_random((8, 8, 8), 1.0, 0)
    with pytest.raises(ValueError):
        m_tile_regular_triple(H, [parts[0][:4], parts[1], parts[2]], F(1, 10), F(1, 2))
    H2, p2 = tripartite_random((12, 4, 4), 1.0, 0)
    with pytest.raises(ValueError):
        m_tile_regular_triple(H2, p2, F(1, 10), F(1, 2))
    with pytest.raises(ValueError):
        m_tile_regular_triple(H, parts, F(1, 3), F(1, 2))
    _, rep = m_tile_regular_triple(H, parts, F(1, 10), F(1, 2))
    assert "small-m" in rep.flags


# -- augmentation ------------------------------------------------------------------

def test_crossing_mask_matches_edges():
    L = make_L29(seed=7)
    K = L.host
    mask = crossing_mask(K, 16, range(8), range(8, 16))
    assert {divmod(p, 8) for p in range(64) if mask >> p & 1} == set(L.crossing)


def test_augmentation_on_planted_gadget():
    L = make_L29(seed=2)
    K = L.host
    tiling = MTiling([tuple(range(8)), tuple(range(8, 16))])
    G = find_augmenting_structure(K, tiling)
    assert G is not None and G.crossing == L.crossing
    T = augmented_fractional_tiling(K, tiling)
    rep = validate_fractional_tiling(T)
    assert rep.valid and rep.weight >= TARGET_WEIGHT and T.meta["gadgets"] == 1


def test_no_gadget_below_29():
    crossing = sorted((a, b) for a in range(8) for b in range(8))[:28]
    K = l29_host(crossing)
    tiling = MTiling([tuple(range(8)), tuple(range(8, 16))])
    assert find_augmenting_structure(K, tiling) is None
    T = augmented_fractional_tiling(K, tiling)
    assert T.weight == 16 and T.meta["gadgets"] == 0


# -- rounding ------------------------------------------------------------------------

def test_rounding_single_cluster_edge():
    H, parts = tripartite_random((30, 30, 30), 0.9, 4)
    Q = Partition(parts)
    K = Hypergraph3(3, [(0, 1, 2)])
    h = FractionalTiling.from_edges(K, {(0, 1, 2): Pattern.a1.assign((0, 1, 2))})
    T, rep = round_fractional_to_integral(H, Q, h, F(1, 10), F(9, 10))
    assert validate_m_tiling(H, T) == []
    assert rep.weighted_mass == 90 and rep.covered >= F(8, 10) * 90 - 8


def test_rounding_rejects_invalid():
    K = Hypergraph3(3, [(0, 1, 2)])
    h = FractionalTiling(K, {(0, (0, 1, 2)): F(1)})
    with pytest.raises(ValueError):
        round_fractional_to_integral(make_complete(9), Partition([[0, 1, 2], [3, 4, 5], [6, 7, 8]]), h, 0.1, 0.5)


# -- loose paths -----------------------------------------------------------------------

def test_loose_class_pattern_ratio():
    assert [LOOSE_CLASS_PATTERN.count(c) for c in range(3)] == [3, 3, 2]
    # every consecutive edge (positions 2i, 2i+1, 2i+2) of the repeated pattern is crossing
    pat = LOOSE_CLASS_PATTERN * 3
    assert all(len({pat[i], pat[i + 1], pat[i + 2]}) == 3 for i in range(0, len(pat) - 2, 2))


def test_loose_path_tile_complete_triple():
    H, parts = tripartite_random((12, 12, 8), 1.0, 0)
    paths, rep = loose_path_tile_triple(H, parts, seed=0)
    used = [v for p in paths for v in p.order]
    assert len(used) == len(set(used)) and all(validate_loose_path(H, p) for p in paths)
    assert rep.uncovered <= 4 and "ratio-off" not in rep.flags
    E = edge_set(H)
    assert all(e in E for p in paths for e in map(frozenset, p.edges))


def test_greedy_loose_paths_valid():
    H = random_binomial(20, 0.3, 2)
    paths = greedy_loose_paths(H, range(20), seed=1)
    used = [v for p in paths for v in p.order]
    assert len(used) == len(set(used)) and all(validate_loose_path(H, p) for p in paths)


def test_path_tile_routes():
    PT = path_tile(make_complete(48), seed=0)
    assert PT.route == "cluster" and PT.report["within_alpha"]
    PT = path_tile(make_complete(20), seed=0)
    assert PT.route == "greedy" and len(PT.uncovered) <= 2
    assert path_tile(Hypergraph3(10), seed=0).uncovered == list(range(10))
