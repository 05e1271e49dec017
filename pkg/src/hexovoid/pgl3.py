"""PGL(3,q) acting on PG(8,q) by conjugation of 3x3 matrices.

A point X of PG(8,q) is read as the 3x3 matrix whose rows are
(X1,X2,X3), (X4,X5,X6), (X7,X8,X9); ``A`` sends it to ``A X A^-1``.
The action preserves the quadric Q(8,q) (the form is minus the second
elementary symmetric function of the eigenvalues) and the trace-zero
hyperplane.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .gf import FiniteField, _prime_factors
from .projgeom import all_tuples, nullspace
from .quadric import QuadraticSpace


def pgl3_order(q: int) -> int:
    return q**3 * (q**3 - 1) * (q**2 - 1)


def transvection(field: FiniteField) -> np.ndarray:
    t = np.eye(3, dtype=np.int64)
    t[0, 1] = 1
    return t


def companion(field: FiniteField, a0: int, a1: int, a2: int) -> np.ndarray:
    """Companion matrix of ``x^3 - a2 x^2 - a1 x - a0``."""
    return np.array([[0, 0, a0], [1, 0, a1], [0, 1, a2]], dtype=np.int64)


def singer_matrix(field: FiniteField) -> np.ndarray:
    """Companion matrix of the lexicographically first primitive cubic (order q^3 - 1)."""
    F = field
    order = F.q**3 - 1
    ident = np.eye(3, dtype=np.int64)
    checks = [order // r for r in _prime_factors(order)]
    for a0 in range(1, F.q):
        for a1 in range(F.q):
            for a2 in range(F.q):
                C = companion(F, a0, a1, a2)
                if not np.array_equal(F.mat_pow(C, order), ident):
                    continue
                if all(not np.array_equal(F.mat_pow(C, k), ident) for k in checks):
                    return C
    raise RuntimeError("no primitive cubic found")


def generating_set(field: FiniteField) -> list[np.ndarray]:
    return [transvection(field), singer_matrix(field)]


def conjugate(field: FiniteField, A, mats) -> np.ndarray:
    """``A M A^-1`` for a batch of 3x3 matrices ``mats`` (shape ``(..., 3, 3)``)."""
    A = np.asarray(A, dtype=np.int64)
    Ainv = field.mat_inv(A)
    return field.dot(field.dot(A, np.asarray(mats, dtype=np.int64)), Ainv)


def act(field: FiniteField, A, vecs9) -> np.ndarray:
    """Conjugation action on 9-coordinate vectors."""
    v = np.asarray(vecs9, dtype=np.int64)
    return conjugate(field, A, v.reshape(v.shape[:-1] + (3, 3))).reshape(v.shape)


def act_on_space(space: QuadraticSpace, A, vecs) -> np.ndarray:
    """Image of space-coordinate vectors under ``A``, back in space coordinates."""
    amb = space.to_ambient(vecs)
    return space.from_ambient(act(space.field, A, amb))


def point_permutation(space: QuadraticSpace, A, chunk: int = 1 << 16) -> np.ndarray:
    """``perm[i]`` = position in ``space.points`` of the image of point ``i``."""
    pts = space.points
    out = np.empty(len(pts), dtype=np.int64)
    for s in range(0, len(pts), chunk):
        vecs = space.vectors(pts[s:s + chunk])
        img = space.rank_points(act_on_space(space, A, vecs))
        pos = np.searchsorted(pts, img)
        if np.any(pos >= len(pts)) or np.any(pts[np.minimum(pos, len(pts) - 1)] != img):
            raise ValueError("group element does not preserve the point set")
        out[s:s + chunk] = pos
    return out


def orbit_labels(space: QuadraticSpace, gens) -> np.ndarray:
    """Orbit id per point of ``space.points``; ids ordered by smallest member."""
    n = len(space.points)
    rows, cols = [], []
    for A in gens:
        perm = point_permutation(space, A)
        rows.append(np.arange(n))
        cols.append(perm)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # relabel by first occurrence
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    return remap[labels]


def stabilizer_order(field: FiniteField, M) -> int:
    """Order of the stabiliser in PGL(3,q) of the point given by the matrix ``M``.

    Counts invertible ``A`` with ``A M = lam M A`` for each nonzero ``lam``
    (a linear condition on the entries of ``A``), then divides by the scalars.
    """
    F = field
    M = np.asarray(M, dtype=np.int64).reshape(3, 3)
    # A M: coefficient of a_{ik} in (A M)_{ij} is M[k, j]; M A: coefficient of a_{kj} in (M A)_{ij} is M[i, k]
    left = np.zeros((9, 9), dtype=np.int64)
    right = np.zeros((9, 9), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                left[3 * i + j, 3 * i + k] = M[k, j]
                right[3 * i + j, 3 * k + j] = M[i, k]
    total = 0
    for lam in range(1, F.q):
        system = F.sub(left, F.mul(lam, right))
        basis = nullspace(F, system, 9)
        if basis.shape[0] == 0:
            continue
        coefs = all_tuples(F, basis.shape[0])
        for s in range(0, len(coefs), 1 << 16):
            mats = F.dot(coefs[s:s + (1 << 16)], basis).reshape(-1, 3, 3)
            total += int(np.count_nonzero(F.det3(mats)))
    if total % (F.q - 1):
        raise ArithmeticError("stabiliser count is not a multiple of the scalar group")
    return total // (F.q - 1)


def random_element(field: FiniteField, rng: np.random.Generator) -> np.ndarray:
    while True:
        A = rng.integers(0, field.q, size=(3, 3))
        if field.det3(A) != 0:
            return A.astype(np.int64)
