"""The thin hexagon of flags of PG(2,q), embedded in Q+(7,q) via rank-one matrices.

A flag ``(a, b)`` (point ``a``, line ``b`` of PG(2,q), ``b . a = 0``) is sent
to the trace-zero rank-one matrix ``a b^T``, flattened row by row to a
point of PG(8,q) lying in the hyperplane Pi. Hexagon lines come in two
kinds: *pencil* lines (fixed plane point ``a``) with ids ``0..N-1`` and
*range* lines (fixed plane line ``b``) with ids ``N..2N-1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from .gf import FiniteField
from .projgeom import PointSet, Subspace, matrix_rank, nullspace, pg2_incidence
from .quadric import QuadraticSpace, q7_plus


def unit(i: int) -> np.ndarray:
    """The point U_i of PG(8,q) (1-indexed)."""
    v = np.zeros(9, dtype=np.int64)
    v[i - 1] = 1
    return v


def rho(mat) -> np.ndarray:
    """Flatten (batched) 3x3 matrices row by row."""
    m = np.asarray(mat, dtype=np.int64)
    return m.reshape(m.shape[:-2] + (9,))


def rho_inv(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.int64)
    return v.reshape(v.shape[:-1] + (3, 3))


def matrix_rank_batch(field: FiniteField, mats) -> np.ndarray:
    """Rank (0..3) of a batch of 3x3 matrices via minors."""
    F = field
    m = np.asarray(mats, dtype=np.int64)
    det = F.det3(m)
    minors_zero = np.ones(m.shape[:-2], dtype=bool)
    for r in ((0, 1), (0, 2), (1, 2)):
        for c in ((0, 1), (0, 2), (1, 2)):
            d = F.sub(
                F.mul(m[..., r[0], c[0]], m[..., r[1], c[1]]),
                F.mul(m[..., r[0], c[1]], m[..., r[1], c[0]]),
            )
            minors_zero &= d == 0
    nonzero = (m != 0).any(axis=(-1, -2))
    return np.where(det != 0, 3, np.where(~minors_zero, 2, np.where(nonzero, 1, 0)))


@dataclass(frozen=True)
class Apartment:
    corners: tuple  # six hex point ids in cyclic order
    lines: tuple  # six hex line ids; lines[i] joins corners[i] and corners[i+1]
    points: tuple  # the 6q hex points on the lines
    span: Subspace


@dataclass(frozen=True)
class PiIntersection:
    kind: str  # "line", "point" or "empty"
    subspace: Subspace | None
    hex_points: tuple
    distance: int

    @property
    def consistent(self) -> bool:
        expected = {2: "line", 4: "point", 6: "empty"}.get(self.distance)
        return self.kind == expected


class Hexagon:
    def __init__(self, field: FiniteField, space: QuadraticSpace | None = None):
        self.field = field
        self.space = space if space is not None else q7_plus(field)
        q = field.q
        pts, lines, flags = pg2_incidence(field)
        self.plane_points = pts
        self.plane_lines = lines
        self.flags = flags
        self.N = len(pts)
        self.num_points = len(flags)
        self.num_lines = 2 * self.N
        self.point_lines = np.stack([flags[:, 0], self.N + flags[:, 1]], axis=1)
        order = np.argsort(self.point_lines[:, 0], kind="stable")
        pencil = order.reshape(self.N, q + 1)
        order = np.argsort(self.point_lines[:, 1], kind="stable")
        rng = order.reshape(self.N, q + 1)
        self.line_points = np.concatenate([pencil, rng])
        outer = field.mul(pts[flags[:, 0]][:, :, None], lines[flags[:, 1]][:, None, :])
        self.ambient_vectors = rho(outer)
        self.vectors = self.space.from_ambient(self.ambient_vectors)
        self.point_index = self.space.rank_points(self.vectors)
        self._by_index = {int(i): k for k, i in enumerate(self.point_index)}

    def __repr__(self):
        return f"Hexagon(q={self.field.q}, points={self.num_points}, lines={self.num_lines})"

    # -- lookup -----------------------------------------------------------

    def point_id(self, vec9) -> int:
        """Hex point id of a 9-coordinate vector; ``KeyError`` if off the hexagon."""
        idx = self.space.rank_points(self.space.from_ambient(np.asarray(vec9)))
        return self._by_index[int(idx)]

    def line_vertex(self, line: int) -> int:
        return self.num_points + line

    def line_vectors(self, line: int) -> np.ndarray:
        return self.vectors[self.line_points[line]]

    def line_id(self, p1: int, p2: int) -> int:
        common = set(self.point_lines[p1].tolist()) & set(self.point_lines[p2].tolist())
        if len(common) != 1:
            raise ValueError(f"hex points {p1}, {p2} are not collinear")
        return common.pop()

    # -- incidence graph --------------------------------------------------

    @cached_property
    def adjacency(self) -> list[list[int]]:
        P = self.num_points
        adj = [[] for _ in range(P + self.num_lines)]
        for p, (l1, l2) in enumerate(self.point_lines):
            for line in (l1, l2):
                adj[p].append(P + int(line))
                adj[P + int(line)].append(p)
        return adj

    @cached_property
    def dist(self) -> np.ndarray:
        """All-pairs distances on the incidence graph (points first, then lines)."""
        P = self.num_points
        V = P + self.num_lines
        r = np.repeat(np.arange(P), 2)
        c = P + self.point_lines.ravel()
        g = coo_matrix((np.ones(len(r)), (r, c)), shape=(V, V))
        d = shortest_path(g, directed=False, unweighted=True)
        return d.astype(np.int16)

    def distance(self, u: int, v: int) -> int:
        """Distance between incidence-graph vertices (point ids, or ``line_vertex`` ids)."""
        return int(self.dist[u, v])

    def point_distance(self, x: int, y: int) -> int:
        return int(self.dist[x, y])

    def point_line_distance(self, x: int, line: int) -> int:
        return int(self.dist[x, self.num_points + line])

    def lines_at_distance(self, x: int, ds) -> np.ndarray:
        row = self.dist[x, self.num_points:]
        return np.flatnonzero(np.isin(row, list(ds)))

    @cached_property
    def diameter(self) -> int:
        return int(self.dist.max())

    @cached_property
    def girth(self) -> int:
        best = np.inf
        adj = self.adjacency
        for root in range(len(adj)):
            depth = {root: 0}
            parent = {root: -1}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                if 2 * depth[u] + 1 >= best:
                    break
                for w in adj[u]:
                    if w not in depth:
                        depth[w] = depth[u] + 1
                        parent[w] = u
                        queue.append(w)
                    elif parent[u] != w:
                        best = min(best, depth[u] + depth[w] + 1)
        return int(best)

    def is_bipartite(self) -> bool:
        P = self.num_points
        return all((u < P) != (w < P) for u, nb in enumerate(self.adjacency) for w in nb)

    # -- planes pi_x ------------------------------------------------------

    def plane_basis(self, x: int) -> np.ndarray:
        l1, l2 = self.point_lines[x]
        y1 = next(p for p in self.line_points[l1] if p != x)
        y2 = next(p for p in self.line_points[l2] if p != x)
        return self.vectors[[x, y1, y2]]

    def plane_pi(self, x: int) -> Subspace:
        basis = self.plane_basis(x)
        s = Subspace.from_rows(self.field, basis)
        if s.dimension != 2 or np.any(self.space.Q(s.point_vectors()) != 0):
            raise AssertionError(f"pi_{x} is not a totally singular plane")
        return s

    @cached_property
    def plane_point_indices(self) -> np.ndarray:
        """``(num_points, q^2+q+1)`` space indices of the points of every pi_x."""
        bases = np.stack([self.plane_basis(x) for x in range(self.num_points)])
        return self.space.subspace_point_indices(bases)

    def two_lines_points(self, x: int) -> set[int]:
        return set(self.line_points[self.point_lines[x]].ravel().tolist())

    # -- structural checks -----------------------------------------------

    def verify_near_lines_span(self, x: int) -> bool:
        """Lines at distance 1 or 3 from ``x``: 2(q+1) of them, spanning x^perp of Pi;
        lines at distance 5 are not inside x^perp."""
        q = self.field.q
        near = self.lines_at_distance(x, (1, 3))
        if len(near) != 2 * (q + 1):
            return False
        vecs = self.vectors[self.line_points[near].ravel()]
        xp = self.space.polar(self.vectors[x])
        if np.any(self.field.dot(vecs, xp) != 0):
            return False
        if matrix_rank(self.field, vecs) != self.space.n - 1:
            return False
        far = self.lines_at_distance(x, (5,))
        far_vals = self.field.dot(self.vectors[self.line_points[far]], xp)
        return bool(np.all((far_vals != 0).any(axis=1)))

    def pi_perp(self, x: int) -> Subspace:
        cons = self.space.polar(self.plane_basis(x))
        return Subspace.from_rows(self.field, nullspace(self.field, cons))

    def verify_plane_perp(self, x: int) -> bool:
        """pi_x^perp is a 4-space meeting the hexagon in exactly the two lines on x."""
        sub = self.pi_perp(x)
        if sub.dimension != 4:
            return False
        cons = self.space.polar(self.plane_basis(x))
        inside = np.flatnonzero((self.field.dot(self.vectors, cons.T) == 0).all(axis=1))
        return set(inside.tolist()) == self.two_lines_points(x) and len(inside) == 2 * self.field.q + 1

    def pi_intersection(self, x: int, y: int) -> PiIntersection:
        if x == y:
            raise ValueError("pi_intersection needs distinct points")
        sub = self.plane_pi(x).meet(self.plane_pi(y))
        d = self.point_distance(x, y)
        if sub is None:
            return PiIntersection("empty", None, (), d)
        idx = self.space.rank_points(sub.point_vectors())
        hexes = tuple(sorted(self._by_index[int(i)] for i in idx if int(i) in self._by_index))
        if sub.dimension == 1 and len(hexes) == self.field.q + 1:
            kind = "line"
        elif sub.dimension == 0 and len(hexes) == 1:
            kind = "point"
        else:
            kind = f"other(dim={sub.dimension}, hex={len(hexes)})"
        return PiIntersection(kind, sub, hexes, d)

    def verify_plane_meet(self, x: int, y: int) -> bool:
        res = self.pi_intersection(x, y)
        if not res.consistent:
            return False
        if res.kind == "line":
            return res.hex_points == tuple(sorted(self.line_points[self.line_id(x, y)].tolist()))
        if res.kind == "point":
            z = res.hex_points[0]
            return self.point_distance(x, z) == 2 == self.point_distance(z, y)
        return True

    # -- apartments -------------------------------------------------------

    def find_apartment(self, x: int, y: int) -> Apartment:
        """Apartment through opposite points, built from the chain z1..z4."""
        if self.point_distance(x, y) != 6:
            raise ValueError("find_apartment needs opposite points (distance 6)")
        d = self.dist
        l1, l2 = (int(v) for v in self.point_lines[y])

        def nearest_on(line):
            return int(min(self.line_points[line], key=lambda p: d[x, p]))

        z1 = nearest_on(l1)
        z2 = nearest_on(l2)

        def middle(a):
            cands = [p for p in range(self.num_points) if d[x, p] == 2 and d[a, p] == 2]
            if len(cands) != 1:
                raise AssertionError("apartment chain is not unique")
            return cands[0]

        z3 = middle(z1)
        z4 = middle(z2)
        corners = (x, z4, z2, y, z1, z3)
        lines = tuple(self.line_id(corners[i], corners[(i + 1) % 6]) for i in range(6))
        pts = tuple(sorted(set(self.line_points[list(lines)].ravel().tolist())))
        span = Subspace.from_rows(self.field, self.vectors[list(pts)])
        if len(pts) != 6 * self.field.q or span.dimension != 5:
            raise AssertionError("apartment does not span a 5-space")
        return Apartment(corners, lines, pts, span)

    # -- sets -------------------------------------------------------------

    def point_set(self) -> PointSet:
        return PointSet.from_indices(self.space.indexer, self.point_index)

    def lines_in_perp(self, vec) -> np.ndarray:
        """Hex lines entirely contained in the perp of a space vector."""
        vals = self.field.dot(self.vectors, self.space.polar(np.asarray(vec)))
        inside = vals == 0
        return np.flatnonzero(inside[self.line_points].all(axis=1))


def build_hexagon(field: FiniteField) -> Hexagon:
    hexagon = Hexagon(field)
    q = field.q
    if hexagon.num_points != (q + 1) * (q * q + q + 1) or hexagon.num_lines != 2 * (q * q + q + 1):
        raise AssertionError("hexagon counts are wrong")
    if np.any(hexagon.space.Q(hexagon.vectors) != 0):
        raise AssertionError("a hex point is off the quadric")
    if len(set(hexagon.point_index.tolist())) != hexagon.num_points:
        raise AssertionError("embedding is not injective")
    return hexagon


def distance(hexagon: Hexagon, u: int, v: int) -> int:
    return hexagon.distance(u, v)


def rank_one_points(space: QuadraticSpace) -> np.ndarray:
    """Indices of points of the space whose matrix has rank one (independent census)."""
    out = []
    for idx, vecs in space.indexer.iter_chunks(1 << 16):
        mats = rho_inv(space.to_ambient(vecs))
        out.append(idx[matrix_rank_batch(space.field, mats) == 1])
    return np.concatenate(out)
