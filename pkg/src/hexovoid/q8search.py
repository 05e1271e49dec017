"""Search for PGL(3,q)-invariant m-ovoids of the parabolic quadric Q(8,q).

The point set of Q(8,q) splits into PGL(3,q)-orbits. A union of orbits is
an m-ovoid iff every generator meets it in m points, and the number of
points a generator shares with an orbit only depends on the vector of
such counts. So the search runs over the distinct "intersection vectors"
of generators (one row per vector) instead of over all generators.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .gf import FiniteField
from .ovoid import (
    OvoidCandidate,
    OrbitDecomposition,
    generator_intersection_counts,
    line_spectrum,
    pgl3_orbits,
    span_dimension,
)
from .projgeom import PointSet, rref
from .quadric import QuadraticSpace, q8_space

log = logging.getLogger(__name__)

DEFAULT_MAX_GENERATORS = 5_000_000


class ResourceCapError(RuntimeError):
    pass


@dataclass
class TacticalTable:
    space: QuadraticSpace
    orbits: OrbitDecomposition
    sizes: np.ndarray  # points per orbit
    rows: np.ndarray  # distinct generator intersection vectors, shape (R, K)
    row_counts: np.ndarray  # generators realising each row
    m: int

    @property
    def q(self) -> int:
        return self.space.field.q

    @property
    def target_size(self) -> int:
        return self.m * (self.q**4 + 1)

    @property
    def generator_count(self) -> int:
        return int(self.row_counts.sum())

    def point_set(self, S) -> PointSet:
        mask = np.isin(self.orbits.labels, list(S))
        return PointSet.from_indices(self.space.indexer, self.space.points[mask])

    def with_m(self, m: int) -> "TacticalTable":
        return TacticalTable(self.space, self.orbits, self.sizes, self.rows, self.row_counts, m)


def build_table(field: FiniteField, m: int | None = None, max_generators: int = DEFAULT_MAX_GENERATORS) -> TacticalTable:
    """Point orbits of Q(8,q) and the distinct generator-vs-orbit count vectors."""
    q = field.q
    space = q8_space(field)
    if space.generator_count > max_generators:
        raise ResourceCapError(f"{space.generator_count} generators exceed the cap {max_generators}")
    dec = pgl3_orbits(space, match_reps=False)
    K = len(dec.orbits)
    sizes = np.array(dec.sizes, dtype=np.int64)
    labels = np.full(space.indexer.N, -1, dtype=np.int64)
    labels[space.points] = dec.labels
    masks = [labels == k for k in range(K)]
    seen: dict[tuple, int] = {}
    for _, counts in generator_intersection_counts(space, masks):
        rows, mult = np.unique(counts, axis=0, return_counts=True)
        for r, c in zip(map(tuple, rows.tolist()), mult.tolist()):
            seen[r] = seen.get(r, 0) + c
    keys = sorted(seen)
    rows = np.array(keys, dtype=np.int64)
    row_counts = np.array([seen[k] for k in keys], dtype=np.int64)
    if not np.all(rows.sum(axis=1) == space.points_per_generator):
        raise AssertionError("a generator row does not sum to the points per generator")
    if row_counts.sum() != space.generator_count:
        raise AssertionError("generator census mismatch")
    if m is None:
        m = q * q + q + 1
    return TacticalTable(space, dec, sizes, rows, row_counts, m)


def search(table: TacticalTable, limit: int | None = None) -> list[tuple[int, ...]]:
    """All orbit subsets meeting every row in m points and of size m(q^4+1).

    Depth-first over orbits by decreasing size; a branch is cut once a row
    overshoots m, the size overshoots, or the remaining orbits cannot make
    up the deficit. Output is a sorted list of sorted tuples.
    """
    sizes, T, m = table.sizes, table.rows, table.m
    target = table.target_size
    order = sorted(range(len(sizes)), key=lambda j: (-sizes[j], j))
    cols = T[:, order]
    sz = sizes[order]
    # suffix sums for the capacity bound
    suffix_rows = np.zeros((len(T), len(order) + 1), dtype=np.int64)
    suffix_rows[:, :-1] = np.cumsum(cols[:, ::-1], axis=1)[:, ::-1]
    suffix_size = np.zeros(len(order) + 1, dtype=np.int64)
    suffix_size[:-1] = np.cumsum(sz[::-1])[::-1]

    found = []

    def dfs(i, acc, size, chosen):
        if limit is not None and len(found) >= limit:
            return
        if size == target and np.all(acc == m):
            found.append(tuple(sorted(order[j] for j in chosen)))
            return
        if i == len(order):
            return
        if size + suffix_size[i] < target or np.any(acc + suffix_rows[:, i] < m):
            return
        nxt = acc + cols[:, i]
        if size + sz[i] <= target and np.all(nxt <= m):
            dfs(i + 1, nxt, size + sz[i], chosen + [i])
        dfs(i + 1, acc, size, chosen)

    dfs(0, np.zeros(len(T), dtype=np.int64), 0, [])
    return sorted(found)


@dataclass
class SolutionReport:
    orbit_indices: tuple
    size: int
    span_dim: int
    in_hyperplane: bool
    verified: bool
    generator_histogram: dict
    spectrum: dict | None = None
    section: dict | None = None

    def as_dict(self, q: int, m: int) -> dict:
        d = {
            "q": q,
            "m": m,
            "orbit_indices": list(self.orbit_indices),
            "size": self.size,
            "span_dim": self.span_dim,
            "in_hyperplane": self.in_hyperplane,
            "verified": self.verified,
            "generator_histogram": {str(k): v for k, v in sorted(self.generator_histogram.items())},
        }
        if self.spectrum is not None:
            d["line_spectrum"] = {str(k): v for k, v in sorted(self.spectrum.items())}
        if self.section is not None:
            d["hyperplane_section"] = self.section
        return d


def hyperplane_section_check(space: QuadraticSpace, pts: PointSet) -> dict:
    """For a set inside a hyperplane H: the type of H cap Q(8,q) and whether the set is all of it."""
    F = space.field
    basis, _ = rref(F, pts.vectors())
    if basis.shape[0] != space.n - 1:
        return {"hyperplane": False}
    sec = space.restrict(basis, name="section")
    amb = sec.to_ambient(sec.point_vectors)
    sec_idx = np.sort(space.rank_points(space.from_ambient(amb)))
    return {
        "hyperplane": True,
        "kind": sec.kind,
        "points": int(len(sec.points)),
        "equals_set": bool(np.array_equal(sec_idx, pts.indices())),
    }


def classify_solutions(table: TacticalTable, solutions, spectrum: bool | None = None) -> list[SolutionReport]:
    """Materialise each solution and re-check it against every generator (one shared pass)."""
    sp = table.space
    if not solutions:
        return []
    if spectrum is None:
        spectrum = table.q <= 3
    sets = [table.point_set(S) for S in solutions]
    hists = [dict() for _ in sets]
    for _, counts in generator_intersection_counts(sp, sets):
        for k in range(len(sets)):
            vals, freq = np.unique(counts[:, k], return_counts=True)
            for v, f in zip(vals.tolist(), freq.tolist()):
                hists[k][v] = hists[k].get(v, 0) + f
    lines = sp.lines() if spectrum else None
    out = []
    for S, pts, hist in zip(solutions, sets, hists):
        dim = span_dimension(sp.field, pts.vectors())
        cand = OvoidCandidate(sp, pts, table.m)
        rep = SolutionReport(
            tuple(S),
            len(pts),
            dim,
            dim < sp.n - 1,
            set(hist) == {table.m} and len(pts) == table.target_size,
            hist,
        )
        if lines is not None:
            rep.spectrum = line_spectrum(cand, lines)
        if rep.in_hyperplane:
            rep.section = hyperplane_section_check(sp, pts)
        out.append(rep)
    return out


def run_search(q: int, m: int | None = None, limit: int | None = None, spectrum: bool | None = None,
               allow_q5: bool = False) -> dict:
    if q > 4 and not allow_q5:
        raise ResourceCapError("q > 4 needs allow_q5 (runtime budget)")
    t0 = time.perf_counter()
    table = build_table(FiniteField(q), m)
    t1 = time.perf_counter()
    sols = search(table, limit)
    t2 = time.perf_counter()
    reports = classify_solutions(table, sols, spectrum)
    t3 = time.perf_counter()
    log.info("q=%d: %d orbits, %d rows, %d solutions", q, len(table.sizes), len(table.rows), len(sols))
    return {
        "q": q,
        "m": table.m,
        "orbit_sizes": table.sizes.tolist(),
        "rows": len(table.rows),
        "generators": table.generator_count,
        "solutions": [r.as_dict(q, table.m) for r in reports],
        "pass": all(r.verified for r in reports),
        "timings": {"table": t1 - t0, "search": t2 - t1, "classify": t3 - t2},
    }
