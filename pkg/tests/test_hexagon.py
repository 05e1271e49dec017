import numpy as np
import networkx as nx
import pytest

from hexovoid.hexagon import build_hexagon, rank_one_points, rho, rho_inv, unit
from hexovoid.gf import FiniteField


def test_counts_and_graph(hex4):
    H = hex4
    assert H.num_points == 105 and H.num_lines == 42
    assert (H.diameter, H.girth, H.is_bipartite()) == (6, 12, True)


def test_graph_against_networkx(hex4):
    H = hex4
    G = nx.Graph()
    for x, (a, b) in enumerate(H.point_lines):
        G.add_edge(("p", x), ("l", int(a)))
        G.add_edge(("p", x), ("l", int(b)))
    assert nx.diameter(G) == 6
    assert nx.girth(G) == 12
    d = dict(nx.single_source_shortest_path_length(G, ("p", 0)))
    assert all(d[("p", y)] == H.point_distance(0, y) for y in range(H.num_points))


def test_rho_roundtrip():
    v = np.arange(9)
    assert np.array_equal(rho(rho_inv(v)), v)
    assert unit(3).tolist() == [0, 0, 1, 0, 0, 0, 0, 0, 0]


def test_structure_exhaustive_q4(hex4):
    H = hex4
    assert all(H.verify_near_lines_span(x) for x in range(H.num_points))
    assert all(H.verify_plane_perp(x) for x in range(H.num_points))


def test_pi_meet_classes_q4(hex4):
    H = hex4
    seen = {}
    for x in range(0, H.num_points, 3):
        for y in range(H.num_points):
            if x != y:
                res = H.pi_intersection(x, y)
                assert H.verify_plane_meet(x, y)
                seen[res.distance] = res.kind
    assert seen == {2: "line", 4: "point", 6: "empty"}


def test_plane_perp_of_U3(hex4):
    H = hex4
    x = H.point_id(unit(3))
    # pi_x^perp is X4 = X7 = X8 = 0
    amb = H.space.to_ambient(H.pi_perp(x).matrix)
    assert np.all(amb[:, [3, 6, 7]] == 0)


def test_apartment_through_U3_U7(hex4):
    H = hex4
    x, y = H.point_id(unit(3)), H.point_id(unit(7))
    assert H.point_distance(x, y) == 6
    ap = H.find_apartment(x, y)
    names = [int(np.flatnonzero(H.ambient_vectors[c])[0]) + 1 for c in ap.corners]
    assert names == [3, 6, 4, 7, 8, 2]
    assert ap.span.dimension == 5 and len(ap.points) == 24


def test_rank_one_census(hex4):
    sp = hex4.space
    assert np.array_equal(np.sort(rank_one_points(sp)), np.sort(hex4.point_index))


def test_q7_structure():
    H = build_hexagon(FiniteField(7))
    assert H.num_points == 456 and H.point_id(unit(3)) == 64
    rng = np.random.default_rng(1)
    for x, y in rng.integers(0, 456, size=(300, 2)):
        if x != y:
            assert H.verify_plane_meet(int(x), int(y))
