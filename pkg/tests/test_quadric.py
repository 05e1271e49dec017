import itertools

import numpy as np
import pytest

from hexovoid.gf import FiniteField
from hexovoid.hexagon import rho_inv
from hexovoid.projgeom import matrix_rank
from hexovoid.quadric import (
    QuadraticSpace,
    classify_section,
    pi_embedding,
    pi_section,
    q7_plus,
    q8_space,
)


def e2(F, vecs9):
    """Second elementary symmetric function of a 3x3 matrix: sum of principal 2x2 minors."""
    M = rho_inv(vecs9)
    tot = 0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        tot = F.add(tot, F.sub(F.mul(M[..., i, i], M[..., j, j]), F.mul(M[..., i, j], M[..., j, i])))
    return tot


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_q8_form_is_minus_e2(q):
    F = FiniteField(q)
    sp = q8_space(F)
    v = np.random.default_rng(q).integers(0, q, size=(500, 9))
    assert np.array_equal(sp.Q(v), F.neg(e2(F, v)))


def test_q8_2_counts():
    sp = q8_space(FiniteField(2))
    assert sp.kind == "parabolic" and sp.rank == 4
    assert len(sp.points) == 255
    assert sp.generator_count == 2295 and sp.points_per_generator == 15
    bases = sp.generator_bases()
    assert len(bases) == 2295
    # totally singular: Q vanishes on every point of every generator
    idx = sp.subspace_point_indices(bases)
    assert np.isin(idx, sp.points).all()
    keys = {tuple(np.sort(r)) for r in idx}
    assert len(keys) == 2295


def test_polar_and_bilinear():
    F = FiniteField(5)
    sp = q8_space(F)
    rng = np.random.default_rng(0)
    u, v = rng.integers(0, 5, size=(2, 9))
    lhs = F.sub(F.sub(sp.Q(F.add(u, v)), sp.Q(u)), sp.Q(v))
    assert lhs == sp.bilinear(u, v) == F.dot(u, sp.polar(v))


@pytest.mark.parametrize("q,kind", [(2, "elliptic"), (3, "cone"), (4, "hyperbolic"), (5, "elliptic"), (7, "hyperbolic"), (13, "hyperbolic")])
def test_section_type(q, kind):
    info = classify_section(FiniteField(q))
    assert info["kind"] == kind and info["agrees"]


def test_pi_section_points_q2():
    sp = pi_section(FiniteField(2))
    assert len(sp.points) == 119 and sp.generator_count == 765


def test_q7_plus_counts():
    F = FiniteField(4)
    sp = q7_plus(F)
    assert (sp.kind, sp.rank, sp.n) == ("hyperbolic", 4, 8)
    assert len(sp.points) == 5525 and sp.generator_count == 11050
    assert sp.perp_parameter == 17
    # the embedding lands in the trace-zero hyperplane and preserves Q
    amb = sp.to_ambient(sp.point_vectors[:200])
    M = rho_inv(amb)
    assert np.all(F.add(F.add(M[:, 0, 0], M[:, 1, 1]), M[:, 2, 2]) == 0)
    assert np.all(q8_space(F).Q(amb) == 0)
    assert np.array_equal(sp.from_ambient(amb), sp.point_vectors[:200])
    with pytest.raises(ValueError):
        q7_plus(FiniteField(5))


def test_lines_q7_plus_q2():
    # Q+(7,2): 135 points; each point lies on |Q+(5,2)| = 35 lines of 3 points
    F = FiniteField(2)
    small = QuadraticSpace(F, np.array([[0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
                                        [0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0]]))
    assert small.kind == "hyperbolic" and len(small.points) == 35
    L = small.lines()
    assert L.shape == (105, 3)
    for row in L[:20]:
        vecs = small.vectors(row)
        assert matrix_rank(F, vecs) == 2 and np.all(small.Q(vecs) == 0)


def test_perp_requires_singular():
    sp = q8_space(FiniteField(3))
    v = np.zeros(9, dtype=np.int64)
    v[0] = 1
    v[4] = 1  # X1X5 term gives Q = -1
    with pytest.raises(ValueError):
        sp.perp(v)
