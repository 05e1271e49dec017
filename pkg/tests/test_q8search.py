import itertools

import numpy as np
import pytest

from hexovoid import q8search
from hexovoid.gf import FiniteField


@pytest.fixture(scope="module")
def table2():
    return q8search.build_table(FiniteField(2))


def brute_force(table):
    """Try every subset of orbits directly (2^K subsets; fine for small K)."""
    K = len(table.sizes)
    out = []
    for r in range(1, K + 1):
        for S in itertools.combinations(range(K), r):
            S = list(S)
            if table.sizes[S].sum() == table.target_size and np.all(table.rows[:, S].sum(axis=1) == table.m):
                out.append(tuple(S))
    return sorted(out)


def test_table_q2(table2):
    t = table2
    assert t.m == 7 and t.target_size == 119
    assert t.sizes.sum() == 255 and t.generator_count == 2295
    assert np.all(t.rows.sum(axis=1) == 15)
    assert t.sizes.tolist() == [28, 21, 42, 84, 56, 24]


def test_search_q2(table2):
    sols = q8search.search(table2)
    assert sols == brute_force(table2) == [(1, 2, 4)]
    rep = q8search.classify_solutions(table2, sols)[0]
    assert rep.verified and rep.size == 119 and rep.in_hyperplane and rep.span_dim == 7
    assert rep.section == {"hyperplane": True, "kind": "elliptic", "points": 119, "equals_set": True}


def test_search_is_order_independent(table2):
    perm = np.array([3, 0, 5, 1, 4, 2])
    t = q8search.TacticalTable(table2.space, table2.orbits, table2.sizes[perm], table2.rows[:, perm], table2.row_counts, 7)
    sols = q8search.search(t)
    mapped = sorted(tuple(sorted(int(perm[j]) for j in S)) for S in sols)
    assert mapped == q8search.search(table2)


def test_complement_closure(table2):
    total = table2.space.points_per_generator
    for m in range(1, total):
        sols = q8search.search(table2.with_m(m))
        comp = q8search.search(table2.with_m(total - m))
        K = set(range(len(table2.sizes)))
        assert sorted(tuple(sorted(K - set(S))) for S in sols) == comp
        assert sols == brute_force(table2.with_m(m))


def test_unknown_orbit_union_fails_reverification(table2):
    reps = q8search.classify_solutions(table2.with_m(7), [(0, 1)])
    assert not reps[0].verified


def test_search_q3():
    t = q8search.build_table(FiniteField(3))
    assert t.m == 13 and t.target_size == 1066
    sols = q8search.search(t)
    assert sols == brute_force(t)
    reps = q8search.classify_solutions(t, sols)
    assert reps and all(r.verified for r in reps)
    assert any(not r.in_hyperplane and r.span_dim == 8 for r in reps)


def test_resource_caps():
    with pytest.raises(q8search.ResourceCapError):
        q8search.build_table(FiniteField(3), max_generators=1000)
    with pytest.raises(q8search.ResourceCapError):
        q8search.run_search(5)
