"""Projective spaces PG(n,q): dense point indexing, subspaces and point sets."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .gf import FiniteField

# ---------------------------------------------------------------------------
# linear algebra over GF(q)


def rref(field: FiniteField, mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = np.array(mat, dtype=np.int64, copy=True)
    if m.ndim == 1:
        m = m[None, :]
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = field.mul(field.inv(lead), m[r])
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] = field.sub(m[others], field.mul(m[others, c][:, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[:r], pivots


def matrix_rank(field: FiniteField, mat) -> int:
    return len(rref(field, mat)[1])


def nullspace(field: FiniteField, mat, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0}``."""
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        n = ncols if ncols is not None else mat.shape[-1]
        return np.eye(n, dtype=np.int64)
    r, pivots = rref(field, mat)
    n = r.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = field.neg(int(r[row, f]))
    return basis


# ---------------------------------------------------------------------------
# point indexing


class PointIndexer:
    """Bijection between the points of PG(n,q) and ``0..N-1``.

    Canonical vectors have leftmost nonzero coordinate 1. Points are
    ordered lexicographically on canonical vectors, so the point with
    leading coordinate in position ``i`` and tail value ``t`` (base-q
    reading of the coordinates after ``i``) has index
    ``(q^(n-i) - 1)/(q - 1) + t``.
    """

    def __init__(self, field: FiniteField, n: int):
        self.field = field
        self.n = n
        q = field.q
        self.dim = n + 1
        self.N = (q ** (n + 1) - 1) // (q - 1)
        # offsets[i] = number of points with leading position > i
        self._offsets = np.array([(q ** (n - i) - 1) // (q - 1) for i in range(n + 1)], dtype=np.int64)
        self._weights = np.array([q ** (n - j) for j in range(n + 1)], dtype=np.int64)

    def __repr__(self):
        return f"PointIndexer(PG({self.n},{self.field.q}))"

    def __eq__(self, other):
        return isinstance(other, PointIndexer) and (self.field, self.n) == (other.field, other.n)

    def __hash__(self):
        return hash((self.field, self.n))

    def normalize(self, vecs) -> np.ndarray:
        """Scale each nonzero row so its leftmost nonzero entry is 1."""
        v = np.asarray(vecs, dtype=np.int64)
        nz = v != 0
        if not nz.any(axis=-1).all():
            raise ValueError("zero vector has no projective point")
        lead_pos = nz.argmax(axis=-1)
        lead = np.take_along_axis(v, lead_pos[..., None], axis=-1)
        return self.field.mul(self.field.inv(lead), v)

    def rank(self, vecs, normalized: bool = False):
        """Index of each (not necessarily normalised) vector's point."""
        v = np.asarray(vecs, dtype=np.int64)
        scalar = v.ndim == 1
        if not normalized:
            v = self.normalize(v)
        lead_pos = (v != 0).argmax(axis=-1)
        # tail value: weights of positions strictly after lead; lead digit 1 contributes q^(n-i)
        full = v @ self._weights
        idx = self._offsets[lead_pos] + full - self._weights[lead_pos]
        return int(idx) if scalar else idx

    def unrank(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        scalar = idx.ndim == 0
        idx = np.atleast_1d(idx)
        if np.any((idx < 0) | (idx >= self.N)):
            raise IndexError("point index out of range")
        # offsets decrease with i; leading position is the first i with offsets[i] <= idx
        lead_pos = np.searchsorted(-self._offsets, -idx, side="left")
        tail = idx - self._offsets[lead_pos]
        q = self.field.q
        out = np.zeros((idx.size, self.dim), dtype=np.int64)
        for j in range(self.dim - 1, -1, -1):
            out[:, j] = np.where(j > lead_pos, tail % q, 0)
            tail = np.where(j > lead_pos, tail // q, tail)
        out[np.arange(idx.size), lead_pos] = 1
        return out[0] if scalar else out

    def all_vectors(self) -> np.ndarray:
        """Canonical vectors of every point, in index order."""
        return self.unrank(np.arange(self.N))

    def enumerate_points(self, chunk: int = 1 << 18):
        """Yield ``(index, vector)`` for every point in index order."""
        for start in range(0, self.N, chunk):
            idx = np.arange(start, min(self.N, start + chunk))
            for i, v in zip(idx, self.unrank(idx)):
                yield int(i), v

    def iter_chunks(self, chunk: int = 1 << 18):
        """Yield ``(indices, vectors)`` blocks covering PG(n,q)."""
        for start in range(0, self.N, chunk):
            idx = np.arange(start, min(self.N, start + chunk))
            yield idx, self.unrank(idx)


def projective_coefficients(field: FiniteField, k: int) -> np.ndarray:
    """Canonical coefficient vectors of PG(k-1,q), i.e. one per point of a k-space."""
    return PointIndexer(field, k - 1).all_vectors()


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A projective subspace stored by its reduced row echelon basis."""

    field: FiniteField
    basis: tuple

    @classmethod
    def from_rows(cls, field: FiniteField, rows) -> "Subspace":
        r, _ = rref(field, rows)
        if r.shape[0] == 0:
            raise ValueError("span of zero vectors is empty")
        return cls(field, tuple(map(tuple, r.tolist())))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64)

    @property
    def vector_dim(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        """Projective dimension."""
        return len(self.basis) - 1

    @property
    def ambient_dim(self) -> int:
        """Length of the coordinate vectors."""
        return len(self.basis[0])

    def point_vectors(self) -> np.ndarray:
        coef = projective_coefficients(self.field, self.vector_dim)
        return self.field.dot(coef, self.matrix)

    def contains(self, vecs) -> np.ndarray:
        """Row-space membership for each vector."""
        v = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        r = self.vector_dim
        out = np.empty(len(v), dtype=bool)
        for i, row in enumerate(v):
            out[i] = matrix_rank(self.field, np.vstack([self.matrix, row])) == r
        return out

    def __le__(self, other: "Subspace") -> bool:
        return bool(other.contains(self.matrix).all())

    def join(self, other: "Subspace") -> "Subspace":
        return Subspace.from_rows(self.field, np.vstack([self.matrix, other.matrix]))

    def meet(self, other: "Subspace") -> "Subspace | None":
        """Intersection, or ``None`` when it is the zero space."""
        F = self.field
        n = self.ambient_dim
        ann = np.vstack([nullspace(F, self.matrix, n), nullspace(F, other.matrix, n)])
        rows = nullspace(F, ann, n) if ann.size else np.eye(n, dtype=np.int64)
        if rows.shape[0] == 0:
            return None
        return Subspace.from_rows(F, rows)

    def annihilator(self) -> np.ndarray:
        return nullspace(self.field, self.matrix)


def span(field: FiniteField, vectors) -> Subspace:
    v = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if not v.any():
        raise ValueError("cannot span the zero vector")
    return Subspace.from_rows(field, v)


def subspace_points(indexer: PointIndexer, s: Subspace) -> "PointSet":
    return PointSet.from_indices(indexer, indexer.rank(s.point_vectors()))


# ---------------------------------------------------------------------------
# point sets

_MAGIC = b"PVPS"
_VERSION = 1
_HEADER = struct.Struct("<4sHHHHQQ")


class CacheFormatError(ValueError):
    pass


class PointSet:
    """Dense bitset over the point indices of a :class:`PointIndexer`."""

    __slots__ = ("indexer", "mask", "_count")

    def __init__(self, indexer: PointIndexer, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (indexer.N,):
            raise ValueError("mask length must equal the number of points")
        self.indexer = indexer
        self.mask = mask
        self.mask.flags.writeable = False
        self._count = int(np.count_nonzero(mask))

    @classmethod
    def empty(cls, indexer: PointIndexer) -> "PointSet":
        return cls(indexer, np.zeros(indexer.N, dtype=bool))

    @classmethod
    def from_indices(cls, indexer: PointIndexer, indices) -> "PointSet":
        mask = np.zeros(indexer.N, dtype=bool)
        mask[np.asarray(indices, dtype=np.int64)] = True
        return cls(indexer, mask)

    def __len__(self):
        return self._count

    def __contains__(self, idx):
        return bool(self.mask[idx])

    def __iter__(self):
        return iter(self.indices().tolist())

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.indexer == other.indexer and np.array_equal(self.mask, other.mask)

    def __repr__(self):
        return f"PointSet({self._count} of {self.indexer.N})"

    def _check(self, other):
        if self.indexer != other.indexer:
            raise ValueError("point sets live in different spaces")

    def __and__(self, other):
        self._check(other)
        return PointSet(self.indexer, self.mask & other.mask)

    def __or__(self, other):
        self._check(other)
        return PointSet(self.indexer, self.mask | other.mask)

    def __sub__(self, other):
        self._check(other)
        return PointSet(self.indexer, self.mask & ~other.mask)

    def __xor__(self, other):
        self._check(other)
        return PointSet(self.indexer, self.mask ^ other.mask)

    def __invert__(self):
        return PointSet(self.indexer, ~self.mask)

    def issubset(self, other) -> bool:
        self._check(other)
        return not np.any(self.mask & ~other.mask)

    def isdisjoint(self, other) -> bool:
        self._check(other)
        return not np.any(self.mask & other.mask)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def vectors(self) -> np.ndarray:
        return self.indexer.unrank(self.indices())

    def count_in(self, indices) -> np.ndarray:
        """Membership of an index array (any shape) as a boolean array."""
        return self.mask[np.asarray(indices, dtype=np.int64)]

    # -- serialisation ----------------------------------------------------

    def words(self) -> np.ndarray:
        nwords = -(-self.indexer.N // 64)
        padded = np.zeros(nwords * 64, dtype=bool)
        padded[: self.indexer.N] = self.mask
        packed = np.packbits(padded, bitorder="little")
        return packed.view("<u8")

    def to_bytes(self) -> bytes:
        F = self.indexer.field
        head = _HEADER.pack(_MAGIC, _VERSION, F.p, F.e, self.indexer.n, self.indexer.N, self._count)
        return head + self.words().tobytes()

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes, field: FiniteField | None = None) -> "PointSet":
        head = read_header(data)
        if field is None:
            field = FiniteField(head["p"] ** head["e"])
        elif (field.p, field.e) != (head["p"], head["e"]):
            raise CacheFormatError("cache was written for a different field")
        indexer = PointIndexer(field, head["n"])
        if indexer.N != head["N"]:
            raise CacheFormatError("point count in header does not match PG(n,q)")
        nwords = -(-indexer.N // 64)
        body = data[_HEADER.size:]
        if len(body) != 8 * nwords:
            raise CacheFormatError("truncated or oversized bitset body")
        bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8), bitorder="little")
        ps = cls(indexer, bits[: indexer.N].astype(bool))
        if len(ps) != head["popcount"]:
            raise CacheFormatError("popcount mismatch")
        return ps

    @classmethod
    def load(cls, path, field: FiniteField | None = None) -> "PointSet":
        return cls.from_bytes(Path(path).read_bytes(), field)


def read_header(data: bytes) -> dict:
    if len(data) < _HEADER.size:
        raise CacheFormatError("file too short for a PointSet header")
    magic, version, p, e, n, N, pop = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise CacheFormatError(f"bad magic {magic!r}")
    if version != _VERSION:
        raise CacheFormatError(f"unsupported cache version {version}")
    return {"magic": magic.decode(), "version": version, "p": p, "e": e, "n": n, "N": N, "popcount": pop}


# ---------------------------------------------------------------------------
# PG(2,q)


def pg2_incidence(field: FiniteField):
    """Points, lines (dual vectors) and flags ``(point_idx, line_idx)`` of PG(2,q)."""
    ix = PointIndexer(field, 2)
    pts = ix.all_vectors()
    lines = pts.copy()
    prod = field.dot(lines, pts.T)  # prod[b, a] = b . a
    b_idx, a_idx = np.nonzero(prod == 0)
    order = np.lexsort((b_idx, a_idx))
    flags = np.stack([a_idx[order], b_idx[order]], axis=1)
    return pts, lines, flags


def all_tuples(field: FiniteField, k: int) -> np.ndarray:
    """Every vector of GF(q)^k in lexicographic order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((field.q,) * k).reshape(k, -1).T
    return np.ascontiguousarray(grid, dtype=np.int64)
