from math import comb

import numpy as np
import pytest

from oracles import brute_absorbing_count
from loosehc.constructions import make_complete, make_H3, random_binomial, random_min_degree
from loosehc.hypergraph import validate_loose_cycle, validate_loose_path
from loosehc.pipeline import (
    STAGES, AbsorbFailure, PairSystem, StageFailure, absorb, assemble_hamilton_cycle,
    build_absorbing_path, build_reservoir, count_absorbing_tuples, default_absorber_count,
    find_connecting_triples, is_absorbing_tuple, reservoir_violation, validate_connection,
)


# -- connecting -------------------------------------------------------------------

def test_connecting_complete():
    K = make_complete(20)
    system = PairSystem([(0, 1), (2, 3), (4, 5)])
    conn = find_connecting_triples(K, system, range(6, 20))
    assert conn is not None and validate_connection(K, system, conn)


def test_connecting_random_dense():
    H = random_binomial(30, 0.6, 1)
    system = PairSystem([(2 * i, 2 * i + 1) for i in range(4)])
    conn = find_connecting_triples(H, system, range(8, 30), rng=0)
    assert conn is not None and validate_connection(H, system, conn)


def test_connecting_impossible():
    K = make_complete(8)
    system = PairSystem([(0, 1), (2, 3)])
    assert find_connecting_triples(K, system, [4, 5, 6, 7]) is None  # 6 vertices needed
    with pytest.raises(ValueError):
        find_connecting_triples(K, system, [0, 4, 5])


def test_pair_system_disjoint():
    with pytest.raises(ValueError):
        PairSystem([(0, 1), (1, 2)])


def test_validate_connection_rejects_reuse():
    K = make_complete(10)
    system = PairSystem([(0, 1), (2, 3)])
    from loosehc.pipeline import ConnectionSet
    assert not validate_connection(K, system, ConnectionSet([(4, 5, 6), (6, 7, 8)]))
    assert validate_connection(K, system, ConnectionSet([(4, 5, 6), (7, 8, 9)]))


# -- reservoir ----------------------------------------------------------------------

def test_reservoir_invariants():
    K = make_complete(40)
    R = build_reservoir(K, 0.3, rng=2)
    assert reservoir_violation(K, R.members, 0.3) is None
    assert len(R.members) <= 0.3 * 40


def test_reservoir_gamma_range():
    for g in (0, 1, -0.1, 1.5):
        with pytest.raises(ValueError):
            build_reservoir(make_complete(10), g)


def test_reservoir_failure_is_staged():
    with pytest.raises(StageFailure) as info:
        build_reservoir(make_H3(24), 0.3, rng=0, max_retries=5, min_size=3)
    assert info.value.stage == "reservoir"


# -- absorbing tuples ----------------------------------------------------------------

def test_is_absorbing_tuple():
    K = make_complete(9)
    assert is_absorbing_tuple(K, range(7), 7, 8)
    with pytest.raises(ValueError):
        is_absorbing_tuple(K, (0, 1, 2, 3, 4, 5, 7), 7, 8)


def test_count_complete():
    # every ordered 7-tuple from the other n - 2 vertices absorbs
    assert count_absorbing_tuples(make_complete(12), 0, 1).value == 10 * 9 * 8 * 7 * 6 * 5 * 4


def test_count_agrees_with_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(6):
        H = random_binomial(10, float(rng.uniform(0.4, 0.9)), int(rng.integers(1 << 30)))
        x, y = (int(v) for v in rng.choice(10, 2, replace=False))
        assert count_absorbing_tuples(H, x, y).value == brute_absorbing_count(H, x, y)


def test_count_H3_zero_pair():
    assert count_absorbing_tuples(make_H3(12), 5, 6).value == 0


def test_count_sampled_brackets_exact():
    H = random_binomial(12, 0.8, 3)
    ex = count_absorbing_tuples(H, 0, 1).value
    s = count_absorbing_tuples(H, 0, 1, mode="sampled", samples=4000, rng=0)
    assert not s.exact and abs(s.value - ex) <= 2 * s.radius


def test_count_guards():
    with pytest.raises(ValueError):
        count_absorbing_tuples(make_complete(26), 0, 1)
    with pytest.raises(ValueError):
        count_absorbing_tuples(make_complete(8), 0, 0)


# -- absorbing path and absorption -----------------------------------------------------

def test_absorbing_path_and_absorb_keep_ends():
    K = make_complete(34)
    P = build_absorbing_path(K, 0.3, rng=0, n_absorbers=3)
    assert P.capacity == 6 and len(P.path) == 27 and validate_loose_path(K, P.path)
    rest = [v for v in range(34) if v not in P.path.order]
    U = rest[:4]
    Q = absorb(K, P, U)
    assert validate_loose_path(K, Q)
    assert (Q.order[0], Q.order[-1]) == (P.path.order[0], P.path.order[-1])
    assert set(Q.order) == set(P.path.order) | set(U)


def test_absorb_failures():
    K = make_complete(30)
    P = build_absorbing_path(K, 0.3, rng=1, n_absorbers=2)
    rest = [v for v in range(30) if v not in P.path.order]
    with pytest.raises(AbsorbFailure):
        absorb(K, P, rest[:3])
    with pytest.raises(AbsorbFailure):
        absorb(K, P, rest[:6])
    with pytest.raises(AbsorbFailure):
        absorb(K, P, [P.path.order[0], rest[0]])
    assert absorb(K, P, []) == P.path


def test_default_absorber_count():
    assert default_absorber_count(40, 0.3) == 2
    assert default_absorber_count(6, 0.1) == 1


# -- assembly ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_assembly_complete(seed):
    K = make_complete(40)
    r = assemble_hamilton_cycle(K, 0.3, rng=seed)
    assert r.ok and r.stage is None
    assert validate_loose_cycle(K, r.cycle, hamilton=True)


def test_assembly_dense_random():
    H = random_min_degree(36, int(0.8 * comb(35, 2)), seed=5)
    r = assemble_hamilton_cycle(H, 0.3, rng=1)
    assert r.ok and validate_loose_cycle(H, r.cycle, hamilton=True)


def test_assembly_reports_stage_on_extremal():
    r = assemble_hamilton_cycle(make_H3(12), 0.3, rng=0)
    assert not r.ok and r.stage in STAGES and r.cycle is None


def test_assembly_odd_n():
    with pytest.raises(ValueError):
        assemble_hamilton_cycle(make_complete(11))
