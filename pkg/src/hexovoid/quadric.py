"""Quadratic forms over GF(q): singular points, perps, Witt type and generators.

The parabolic quadric Q(8,q) is used in literal coordinates X1..X9 of
PG(8,q). Its section by the hyperplane X1 + X5 + X9 = 0 is stored in the
reduced coordinates X1..X8 (X9 = -X1 - X5 is implied), which keeps the
point indexer free of wasted indices.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .gf import FiniteField
from .projgeom import PointIndexer, PointSet, Subspace, all_tuples, nullspace, projective_coefficients, rref

# (i, j, coefficient) of X_{i+1} X_{j+1} in X2X4 - X1X5 + X3X7 - X1X9 + X6X8 - X5X9
Q8_MONOMIALS = [(1, 3, 1), (0, 4, -1), (2, 6, 1), (0, 8, -1), (5, 7, 1), (4, 8, -1)]


class QuadraticSpace:
    """A quadratic form ``Q(v) = sum_{i<=j} C[i,j] v_i v_j`` on GF(q)^n.

    ``embedding`` (n x m) maps space coordinates to ambient coordinates when
    the space is a restriction of a larger one; ``None`` means identity.
    """

    def __init__(self, field: FiniteField, coeffs, embedding=None, name: str = ""):
        F = field
        C = np.asarray(coeffs, dtype=np.int64) % F.q
        if C.ndim != 2 or C.shape[0] != C.shape[1] or np.any(np.tril(C, -1)):
            raise ValueError("coefficients must form an upper triangular square matrix")
        self.field = F
        self.coeffs = C
        self.n = C.shape[0]
        self.gram = F.add(C, C.T)
        self.embedding = None if embedding is None else np.asarray(embedding, dtype=np.int64)
        self.name = name
        self.indexer = PointIndexer(F, self.n - 1)

    def __repr__(self):
        return f"QuadraticSpace({self.name or 'form'}, n={self.n}, q={self.field.q})"

    # -- evaluation -------------------------------------------------------

    def _rowdot(self, a, b):
        F = self.field
        if F.e == 1:
            return (np.asarray(a) * np.asarray(b)).sum(-1) % F.p
        prod = F.mul(a, b)
        acc = prod[..., 0]
        for k in range(1, prod.shape[-1]):
            acc = F.add(acc, prod[..., k])
        return acc

    def Q(self, vecs):
        v = np.asarray(vecs, dtype=np.int64)
        out = self._rowdot(v, self.field.dot(v, self.coeffs.T))
        return int(out) if np.ndim(out) == 0 else out

    def polar(self, vecs) -> np.ndarray:
        """Rows ``v G``: the linear functionals ``B(v, .)``."""
        return self.field.dot(np.asarray(vecs, dtype=np.int64), self.gram)

    def bilinear(self, u, v):
        out = self._rowdot(self.polar(u), np.asarray(v, dtype=np.int64))
        return int(out) if np.ndim(out) == 0 else out

    def to_ambient(self, vecs) -> np.ndarray:
        v = np.asarray(vecs, dtype=np.int64)
        return v if self.embedding is None else self.field.dot(v, self.embedding)

    def from_ambient(self, vecs) -> np.ndarray:
        """Inverse of :meth:`to_ambient` on vectors of the embedded subspace."""
        v = np.asarray(vecs, dtype=np.int64)
        if self.embedding is None:
            return v
        r, piv = rref(self.field, self.embedding)
        if not np.array_equal(r, self.embedding):
            raise ValueError("embedding basis must be in reduced echelon form")
        return v[..., piv]

    def restrict(self, basis, name: str = "") -> "QuadraticSpace":
        """The form on the row space of ``basis`` in the basis coordinates."""
        F = self.field
        L = np.asarray(basis, dtype=np.int64)
        full = F.dot(F.dot(L, self.coeffs), L.T)
        k = L.shape[0]
        C = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            C[i, i] = full[i, i]
            for j in range(i + 1, k):
                C[i, j] = F.add(int(full[i, j]), int(full[j, i]))
        emb = L if self.embedding is None else F.dot(L, self.embedding)
        return QuadraticSpace(F, C, emb, name)

    # -- points -----------------------------------------------------------

    @cached_property
    def points(self) -> np.ndarray:
        """Sorted indices of the singular points."""
        found = []
        for idx, vecs in self.indexer.iter_chunks(1 << 17):
            found.append(idx[self.Q(vecs) == 0])
        return np.concatenate(found)

    @cached_property
    def point_set(self) -> PointSet:
        return PointSet.from_indices(self.indexer, self.points)

    @cached_property
    def point_vectors(self) -> np.ndarray:
        return self.indexer.unrank(self.points)

    def vectors(self, indices) -> np.ndarray:
        return self.indexer.unrank(indices)

    def rank_points(self, vecs):
        return self.indexer.rank(vecs)

    def is_singular(self, vec) -> bool:
        return self.Q(vec) == 0

    def perp(self, P) -> PointSet:
        """Singular points orthogonal to the singular point ``P`` (index or vector)."""
        v = self.vectors(P) if np.ndim(P) == 0 else np.asarray(P)
        if self.Q(v) != 0:
            raise ValueError("perp is only defined here for singular points")
        hits = self._rowdot(self.point_vectors, self.polar(v)[None, :]) == 0
        return PointSet.from_indices(self.indexer, self.points[hits])

    def count_orthogonal(self, probes, targets, chunk_elems: int = 1 << 22) -> np.ndarray:
        """For each probe vector, the number of target vectors orthogonal to it."""
        F = self.field
        probes = np.asarray(probes, dtype=np.int64)
        Y = self.polar(np.asarray(targets, dtype=np.int64))
        out = np.empty(len(probes), dtype=np.int64)
        step = max(1, chunk_elems // max(1, len(Y)))
        if F.e == 1:
            Yf = Y.T.astype(np.float32)
            for s in range(0, len(probes), step):
                R = probes[s:s + step].astype(np.float32) @ Yf
                out[s:s + step] = np.count_nonzero(np.fmod(R, F.p) == 0, axis=1)
        else:
            for s in range(0, len(probes), step):
                R = F.dot(probes[s:s + step], Y.T)
                out[s:s + step] = np.count_nonzero(R == 0, axis=1)
        return out

    # -- Witt decomposition ----------------------------------------------

    def _radical(self) -> np.ndarray:
        return nullspace(self.field, self.gram)

    @cached_property
    def singular_radical(self) -> np.ndarray:
        """Basis of the singular vectors in the radical of the polar form."""
        F = self.field
        rad = self._radical()
        if rad.shape[0] == 0:
            return rad
        coef = projective_coefficients(F, rad.shape[0])
        vecs = F.dot(coef, rad)
        sing = vecs[self.Q(vecs) == 0]
        if len(sing) == 0:
            return np.zeros((0, self.n), dtype=np.int64)
        r, _ = rref(F, sing)
        return r

    @cached_property
    def witt(self):
        """Hyperbolic pairs ``[(e, f), ...]`` and an anisotropic remainder basis."""
        F = self.field
        W = np.eye(self.n, dtype=np.int64)
        pairs = []
        while W.shape[0] >= 2:
            e = self._find_nonradical_singular(W)
            if e is None:
                break
            be = self._rowdot(self.polar(W), e[None, :])
            j = int(np.flatnonzero(be)[0])
            f = F.mul(F.inv(int(be[j])), W[j])
            f = F.sub(f, F.mul(self.Q(f), e))
            pairs.append((e, f))
            cons = np.stack([self.polar(e), self.polar(f)])  # constraints on vectors
            coef_cons = F.dot(W, cons.T).T  # on coefficient vectors of W
            W = F.dot(nullspace(F, coef_cons, W.shape[0]), W)
        return pairs, W

    def _find_nonradical_singular(self, W):
        F = self.field
        k = W.shape[0]
        ix = PointIndexer(F, k - 1)
        PW = self.polar(W)
        for _, coef in ix.iter_chunks(4096):
            vecs = F.dot(coef, W)
            sing = self.Q(vecs) == 0
            nonrad = (F.dot(vecs, PW.T) != 0).any(axis=1)
            hit = np.flatnonzero(sing & nonrad)
            if hit.size:
                return vecs[hit[0]]
        return None

    @property
    def rank(self) -> int:
        """Witt index: vector dimension of the generators."""
        return len(self.witt[0]) + self.singular_radical.shape[0]

    @cached_property
    def kind(self) -> str:
        if self.singular_radical.shape[0]:
            return "cone"
        a = self.witt[1].shape[0]
        return {0: "hyperbolic", 1: "parabolic", 2: "elliptic"}[a]

    @property
    def polar_e(self) -> int:
        """0, 1, 2 for hyperbolic, parabolic, elliptic spaces."""
        return {"hyperbolic": 0, "parabolic": 1, "elliptic": 2}[self.kind]

    def theta(self, k: int) -> int:
        if not 1 <= k <= self.rank:
            raise ValueError(f"theta index must lie in 1..{self.rank}")
        return self.field.q ** (k - 1) + 1

    @property
    def perp_parameter(self) -> int:
        """``q^(r-2+e) + 1``; for hyperbolic spaces this is ``theta(r-1)``."""
        return self.field.q ** (self.rank - 2 + self.polar_e) + 1

    @property
    def generator_count(self) -> int:
        q, r, e = self.field.q, self.rank, self.polar_e
        out = 1
        for i in range(r):
            out *= q ** (i + e) + 1
        return out

    @property
    def points_per_generator(self) -> int:
        q = self.field.q
        return (q**self.rank - 1) // (q - 1)

    # -- generators -------------------------------------------------------

    @cached_property
    def _witt_frame(self):
        """Witt basis matrix (rows e1, f1, ..., anisotropic) and the form in it."""
        if self.singular_radical.shape[0]:
            raise ValueError("generator enumeration needs a nondegenerate space")
        pairs, aniso = self.witt
        rows = [v for pair in pairs for v in pair] + list(aniso)
        basis = np.array(rows, dtype=np.int64).reshape(-1, self.n)
        return basis, self.restrict(basis)

    def iter_generator_bases(self, batch: int = 4096):
        """Yield arrays ``(b, r, n)`` of generator bases covering each generator once.

        Recursion on hyperbolic pairs: with ``H = <e, f>^perp``, a generator
        either is ``<e> + U`` for a generator ``U`` of ``H``, or is spanned by
        ``{u - B(u,h) e : u in U}`` and ``f - Q(h) e + h`` for ``h`` running
        over a complement of ``U`` in ``H``.
        """
        F = self.field
        basis, wform = self._witt_frame
        w = len(self.witt[0])
        n = self.n
        gens = np.zeros((1, 0, n), dtype=np.int64)
        for k in reversed(range(w)):
            e = np.zeros(n, dtype=np.int64)
            f = np.zeros(n, dtype=np.int64)
            e[2 * k] = 1
            f[2 * k + 1] = 1
            hpos = np.arange(2 * k + 2, n)
            last = k == 0
            pending = []
            with_e = np.concatenate([gens, np.broadcast_to(e, (len(gens), 1, n))], axis=1)
            pending.append(with_e)
            for U in gens:
                if U.shape[0]:
                    _, piv = rref(F, U)
                else:
                    piv = []
                comp = np.array([c for c in hpos if c not in piv], dtype=np.int64)
                T = all_tuples(F, len(comp))
                h = np.zeros((len(T), n), dtype=np.int64)
                h[:, comp] = T
                if U.shape[0]:
                    # lam[t, i] = -B(U_i, h_t)
                    lam = F.neg(F.dot(h, wform.polar(U).T))
                    newU = F.add(U[None, :, :], F.mul(lam[:, :, None], e[None, None, :]))
                else:
                    newU = np.zeros((len(T), 0, n), dtype=np.int64)
                wv = F.add(F.add(f[None, :], F.mul(F.neg(wform.Q(h))[:, None], e[None, :])), h)
                pending.append(np.concatenate([newU, wv[:, None, :]], axis=1))
                if last and sum(len(x) for x in pending) >= batch:
                    yield self._from_witt(np.concatenate(pending), basis)
                    pending = []
            if last:
                if pending:
                    yield self._from_witt(np.concatenate(pending), basis)
                return
            gens = np.concatenate(pending)
        # rank 0: only the empty generator
        yield np.zeros((1, 0, n), dtype=np.int64)

    def _from_witt(self, gens, basis):
        return self.field.dot(gens, basis).astype(np.int16)

    def generator_bases(self) -> np.ndarray:
        return np.concatenate(list(self.iter_generator_bases()))

    def generators(self):
        """Yield every generator as a canonical :class:`Subspace`."""
        for block in self.iter_generator_bases():
            for g in block:
                yield Subspace.from_rows(self.field, g)

    def subspace_point_indices(self, bases) -> np.ndarray:
        """Point indices ``(b, (q^k-1)/(q-1))`` of a batch of k-dim bases."""
        bases = np.asarray(bases, dtype=np.int64)
        coef = projective_coefficients(self.field, bases.shape[1])
        vecs = self.field.dot(coef, bases)
        return self.indexer.rank(vecs)

    # -- lines ------------------------------------------------------------

    def lines(self, chunk: int = 1 << 20) -> np.ndarray:
        """All totally singular lines as rows of ``q+1`` sorted point indices.

        Each line is produced once, from the pair of its two smallest points.
        """
        F = self.field
        pts = self.points
        vecs = self.point_vectors
        polar = self.polar(vecs)
        t = np.arange(1, F.q, dtype=np.int64)
        out = []
        for i in range(len(pts)):
            later = vecs[i + 1:]
            ok = self._rowdot(later, polar[i][None, :]) == 0
            if not ok.any():
                continue
            js = np.flatnonzero(ok) + i + 1
            # other points: v_i * t + v_j for t != 0 (their indices must exceed pts[j])
            combos = F.add(F.mul(t[None, :, None], vecs[i][None, None, :]), vecs[js][:, None, :])
            others = self.indexer.rank(combos)
            keep = (others > pts[js][:, None]).all(axis=1)
            if keep.any():
                rows = np.concatenate(
                    [np.full((keep.sum(), 1), pts[i]), pts[js][keep][:, None], others[keep]], axis=1
                )
                out.append(np.sort(rows, axis=1))
        return np.concatenate(out) if out else np.zeros((0, F.q + 1), dtype=np.int64)


# ---------------------------------------------------------------------------
# the quadrics of the construction


def q8_coefficients(field: FiniteField) -> np.ndarray:
    C = np.zeros((9, 9), dtype=np.int64)
    for i, j, c in Q8_MONOMIALS:
        C[i, j] = field.element(c)
    return C


def q8_space(field: FiniteField) -> QuadraticSpace:
    """Q(8,q): X2X4 - X1X5 + X3X7 - X1X9 + X6X8 - X5X9 = 0 in PG(8,q)."""
    return QuadraticSpace(field, q8_coefficients(field), name=f"Q(8,{field.q})")


def pi_embedding(field: FiniteField) -> np.ndarray:
    """Rows map reduced coordinates (X1..X8) into Pi: X1 + X5 + X9 = 0."""
    L = np.zeros((8, 9), dtype=np.int64)
    L[np.arange(8), np.arange(8)] = 1
    L[0, 8] = field.neg(1)
    L[4, 8] = field.neg(1)
    return L


def pi_section(field: FiniteField) -> QuadraticSpace:
    """Q(8,q) restricted to Pi, in reduced coordinates X1..X8."""
    return q8_space(field).restrict(pi_embedding(field), name=f"Pi section of Q(8,{field.q})")


def q7_plus(field: FiniteField) -> QuadraticSpace:
    if field.q % 3 != 1:
        raise ValueError(f"Q+(7,q) as a section of Pi needs q = 1 mod 3, got q = {field.q}")
    sp = pi_section(field)
    sp.name = f"Q+(7,{field.q})"
    return sp


def classify_section(field: FiniteField) -> dict:
    """Intrinsic type of Pi meets Q(8,q), next to the congruence prediction."""
    sp = pi_section(field)
    predicted = {1: "hyperbolic", 2: "elliptic", 0: "cone"}[field.q % 3]
    return {
        "q": field.q,
        "kind": sp.kind,
        "predicted": predicted,
        "witt_index": sp.rank,
        "radical_dim": int(sp.singular_radical.shape[0]),
        "agrees": sp.kind == predicted,
    }


def theta(space: QuadraticSpace, k: int) -> int:
    return space.theta(k)
