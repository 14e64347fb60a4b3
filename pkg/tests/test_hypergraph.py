import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loosehc.constructions import make_complete, make_H3, make_M
from loosehc.hypergraph import (
    Hypergraph3, LooseCycle, LoosePath, TightPath, canon, load, save, validate_loose_cycle,
    validate_loose_path, validate_tight_path,
)

# M with its vertices 1..8 shifted to 0..7
M4 = 3  # the fourth vertex


@st.composite
def hypergraphs(draw, max_n=9):
    n = draw(st.integers(3, max_n))
    triples = list(itertools.combinations(range(n), 3))
    keep = draw(st.lists(st.booleans(), min_size=len(triples), max_size=len(triples)))
    return Hypergraph3(n, [t for t, k in zip(triples, keep) if k])


def test_canon_sorts():
    assert canon(5, 1, 3) == (1, 3, 5)


def test_rejects_bad_edges():
    with pytest.raises(ValueError):
        Hypergraph3(4, [(0, 1, 1)])
    with pytest.raises(ValueError):
        Hypergraph3(4, [(0, 1, 4)])


def test_duplicates_collapse():
    H = Hypergraph3(4, [(0, 1, 2), (2, 1, 0)])
    assert len(H.edges) == 1


def test_degree_examples():
    M = make_M()
    assert M.degree({M4}) == 2
    assert make_complete(6).degree({0, 1}) == 4
    H = make_H3(8)
    assert all(H.degree({b}) == 6 for b in range(1, 8))


def test_degree_bad_set_size():
    with pytest.raises(ValueError):
        make_M().degree({0, 1, 2})
    with pytest.raises(ValueError):
        make_M().degree(set())


def test_min_degree_examples():
    assert make_complete(6).min_degree(1) == 10
    assert make_H3(8).min_degree(1) == 6
    assert Hypergraph3(5).min_degree(2) == 0


def test_neighborhood_examples():
    M = make_M()
    assert M.neighborhood({2, 3}) == {frozenset({4})}
    N = make_complete(5).neighborhood({0})
    assert len(N) == 6 and all(len(T) == 2 and 0 not in T for T in N)
    H = make_H3(8)
    assert len(H.neighborhood({0})) == 21


def test_link_graph_examples():
    g = make_M().link_graph(M4)
    assert {frozenset(e) for e in g.edges} == {frozenset({2, 4}), frozenset({4, 5})}
    g = make_complete(5).link_graph(0)
    assert g.number_of_edges() == 6 and 0 not in g
    H = make_H3(12)  # A = {0, 1}
    g = H.link_graph(7)
    assert all(u < 2 or w < 2 for u, w in g.edges)
    assert g.number_of_edges() == H.degree({7})


def test_induced_examples():
    M = make_M()
    sub, _ = M.induced([0, 1, 2])
    assert len(sub.edges) == 1
    K = make_complete(6)
    assert K.induced(range(6))[0] == K
    assert len(K.induced([0, 2, 3, 5])[0].edges) == 4


@given(hypergraphs())
@settings(max_examples=60, deadline=None)
def test_handshake(H):
    assert sum(H.degree({v}) for v in range(H.n)) == 3 * len(H.edges)


@given(hypergraphs())
@settings(max_examples=60, deadline=None)
def test_codegree_is_common_link_neighbours(H):
    for u, v in itertools.combinations(range(H.n), 2):
        assert H.degree({u, v}) == len(set(H.link_graph(u).neighbors(v)))
    for v in range(H.n):
        assert H.link_graph(v).number_of_edges() == H.degree({v})


@given(hypergraphs(), st.data())
@settings(max_examples=60, deadline=None)
def test_induced_monotone(H, data):
    W = data.draw(st.sets(st.integers(0, H.n - 1)))
    sub, relabel = H.induced(W)
    back = {i: v for v, i in relabel.items()}
    assert all(canon(*(back[x] for x in e)) in H.edges for e in sub.edges)
    assert len(sub.edges) == sum(1 for e in H.edges if set(e) <= W)


def test_validate_loose_cycle_examples():
    K = make_complete(6)
    assert validate_loose_cycle(K, LooseCycle((0, 1, 2, 3, 4, 5)), hamilton=True)
    v = validate_loose_cycle(K, LooseCycle((0, 1, 2, 3, 4)))
    assert not v and v.reason == "bad-length"
    v = validate_loose_cycle(make_complete(8), LooseCycle((0, 1, 2, 3, 4, 5)), hamilton=True)
    assert not v and v.reason == "not-spanning"
    v = validate_loose_cycle(K, LooseCycle((0, 1, 2, 3, 4, 4)))
    assert v.reason == "repeated-vertex"


def test_no_cycle_on_tiny_hosts():
    H = Hypergraph3(2)
    assert not validate_loose_cycle(H, LooseCycle(()), hamilton=True)


def test_H3_rejects_every_claimed_cycle():
    H = make_H3(8)
    for perm in itertools.permutations(range(1, 8)):
        assert not validate_loose_cycle(H, (0,) + perm, hamilton=True)


def test_validate_paths():
    M = make_M()
    assert validate_loose_path(M, LoosePath((0, 1, 2, 3, 4)))
    assert validate_tight_path(M, TightPath((2, 3, 4, 5)))
    assert validate_loose_path(M, LoosePath((0, 1, 0))).reason == "repeated-vertex"
    assert validate_loose_path(M, LoosePath((0, 1, 2, 3))).reason == "bad-length"
    assert validate_tight_path(M, TightPath((1, 2, 3))).reason == "missing-edge"


def test_edge_counts_of_structures():
    C = LooseCycle(tuple(range(10)))
    P = LoosePath(tuple(range(9)))
    assert len(C.edges) == 5 and len(P.edges) == 4


def test_roundtrip_text_and_json(tmp_path):
    H = make_H3(12)
    save(H, tmp_path / "h.txt")
    assert (tmp_path / "h.txt").read_text().splitlines()[0] == "n 12"
    assert load(tmp_path / "h.txt") == H
    save(H, tmp_path / "h.json")
    again = load(tmp_path / "h.json")
    assert again == H and again.meta["generator"] == "H3"
    json.loads((tmp_path / "h.json").read_text())


def test_from_text_needs_header():
    with pytest.raises(ValueError):
        Hypergraph3.from_text("0 1 2\n")
