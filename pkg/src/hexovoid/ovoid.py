"""The (q^2+q+1)-ovoid O of Q+(7,q) and m-ovoid verification machinery.

O is the union of the planes pi_x over the points x of the embedded
hexagon. Equivalently it is the set of singular points of Pi whose matrix
is singular (rank at most two, i.e. nilpotent trace-zero matrices).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import pgl3
from .gf import FiniteField, is_cube
from .hexagon import Hexagon, matrix_rank_batch, rho_inv, unit
from .projgeom import PointSet, Subspace, rref, subspace_points
from .quadric import QuadraticSpace

log = logging.getLogger(__name__)


@dataclass
class OvoidCandidate:
    space: QuadraticSpace
    points: PointSet
    m: int
    label: str = ""

    @property
    def unit_size(self) -> int:
        """Size of a 1-ovoid, ``q^(r-1+e) + 1``."""
        sp = self.space
        return sp.field.q ** (sp.rank + sp.polar_e - 1) + 1

    @property
    def expected_size(self) -> int:
        return self.m * self.unit_size

    def __len__(self):
        return len(self.points)

    def vectors(self) -> np.ndarray:
        return self.points.vectors()


@dataclass
class MOvoidReport:
    m: int
    mode: str
    passed: bool
    checked: int
    violations: list = dc_field(default_factory=list)
    histogram: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "mode": self.mode,
            "pass": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


# ---------------------------------------------------------------------------
# representatives and the construction


def orbit_representatives(field: FiniteField) -> dict[int, np.ndarray]:
    """P1..P5 as 9-coordinate vectors (omega is the field's primitive element)."""
    q = field.q
    w = field.omega
    P3 = unit(1) * 1
    P3 = field.add(P3, field.mul(field.omega_pow((q - 1) // 3), unit(5)))
    P3 = field.add(P3, field.mul(field.omega_pow(2 * (q - 1) // 3), unit(9)))
    return {
        1: unit(3),
        2: field.add(unit(2), unit(6)),
        3: P3,
        4: field.add(field.add(unit(2), unit(6)), field.mul(w, unit(7))),
        5: field.add(field.add(unit(3), field.mul(w, unit(4))), field.mul(w, unit(8))),
    }


def witness_points(field: FiniteField) -> np.ndarray:
    """Eight points of O spanning Pi."""
    F = field
    w1 = F.add(F.sub(unit(1), unit(2)), F.sub(unit(4), unit(5)))
    w2 = F.add(F.sub(unit(6), unit(5)), F.sub(unit(9), unit(8)))
    return np.stack([w1, w2] + [unit(i) for i in (2, 3, 4, 6, 7, 8)])


def orbit_size_formula(q: int) -> list[int]:
    n = q * q + q + 1
    return [
        (q + 1) * n,
        (q**3 - q) * n,
        q**3 * (q + 1) * n // 3,
        q**3 * (q * q - 1) * (q - 1) // 3,
        q**3 * (q * q - 1) * (q - 1) // 3,
    ]


def ovoid_size(q: int) -> int:
    return (q * q + q + 1) * (q**3 + 1)


def build_O(hexagon: Hexagon) -> OvoidCandidate:
    sp = hexagon.space
    q = sp.field.q
    if q % 3 != 1:
        raise ValueError("the construction needs q = 1 mod 3")
    idx = np.unique(hexagon.plane_point_indices)
    pts = PointSet.from_indices(sp.indexer, idx)
    if len(pts) != ovoid_size(q):
        raise AssertionError(f"|O| = {len(pts)}, expected {ovoid_size(q)}")
    return OvoidCandidate(sp, pts, q * q + q + 1, label="O")


def membership_O(space: QuadraticSpace, P) -> bool:
    """Rank test: a singular point of Pi is in O iff its matrix is singular."""
    return bool(membership_mask(space, np.atleast_2d(space.vectors(P) if np.ndim(P) == 0 else P))[0])


def membership_mask(space: QuadraticSpace, vecs) -> np.ndarray:
    mats = rho_inv(space.to_ambient(vecs))
    return space.field.det3(mats) == 0


def overlap_accounting(hexagon: Hexagon) -> dict:
    """Count of O as (points of Gamma) + (points of pi_x off Gamma, summed over x)."""
    q = hexagon.field.q
    hex_mask = np.isin(hexagon.plane_point_indices, hexagon.point_index)
    off = int((~hex_mask).sum())
    return {
        "gamma": hexagon.num_points,
        "off_gamma_sum": off,
        "total": off + hexagon.num_points,
        "predicted": (q * q - q) * (q + 1) * (q * q + q + 1) + (q + 1) * (q * q + q + 1),
        "off_gamma_distinct": len(np.unique(hexagon.plane_point_indices[~hex_mask])) == off,
    }


# ---------------------------------------------------------------------------
# verifiers


def perp_targets(cand: OvoidCandidate) -> tuple[int, int]:
    """Expected ``|P^perp cap M|`` for P in / not in an m-ovoid M."""
    t = cand.space.perp_parameter
    return cand.m * t - t + 1, cand.m * t


def polar_point_count(q: int, r: int, e: int) -> int:
    return (q**r - 1) * (q ** (r - 1 + e) + 1) // (q - 1)


def perp_size(space: QuadraticSpace) -> int:
    """``|P^perp|`` for a singular point P: P itself plus q times the points of the quotient."""
    q, r, e = space.field.q, space.rank, space.polar_e
    return 1 + q * polar_point_count(q, r - 1, e)


def perp_counts(cand: OvoidCandidate, probe_idx) -> np.ndarray:
    """``|P^perp cap set|`` for singular probes; large sets are counted through their complement."""
    sp = cand.space
    probes = sp.vectors(probe_idx)
    total = polar_point_count(sp.field.q, sp.rank, sp.polar_e)
    if 2 * len(cand.points) <= total:
        return sp.count_orthogonal(probes, cand.vectors())
    rest = sp.point_set - cand.points
    return perp_size(sp) - sp.count_orthogonal(probes, rest.vectors())


def verify_m_ovoid_perp(cand: OvoidCandidate, probes=None, max_violations: int = 20) -> MOvoidReport:
    """Two-intersection-number check against every point (or the given probe indices)."""
    sp = cand.space
    if cand.m <= 0 or len(cand.points) == 0:
        return MOvoidReport(cand.m, "perp", False, 0, [{"reason": "m must be positive"}])
    probe_idx = sp.points if probes is None else np.asarray(probes, dtype=np.int64)
    counts = perp_counts(cand, probe_idx)
    inside = cand.points.mask[probe_idx]
    t_in, t_out = perp_targets(cand)
    expected = np.where(inside, t_in, t_out)
    bad = np.flatnonzero(counts != expected)
    viol = [
        {"point": int(probe_idx[i]), "expected": int(expected[i]), "actual": int(counts[i])}
        for i in bad[:max_violations]
    ]
    vals, freq = np.unique(counts, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(vals, freq)}
    mode = "perp" if probes is None else "perp-reps"
    return MOvoidReport(cand.m, mode, bad.size == 0, len(probe_idx), viol, hist)


def generator_intersection_counts(space: QuadraticSpace, masks, batch_points: int = 1 << 20):
    """Yield ``(block_bases, counts)`` with ``counts[g, k] = |generator g cap set k|``."""
    masks = [m.mask if isinstance(m, PointSet) else np.asarray(m) for m in masks]
    batch = max(1, batch_points // space.points_per_generator)
    for bases in space.iter_generator_bases(batch=batch):
        for s in range(0, len(bases), batch):
            block = bases[s:s + batch]
            idx = space.subspace_point_indices(block)
            counts = np.stack([m[idx].sum(axis=1) for m in masks], axis=1)
            yield block, counts


def verify_m_ovoid_generators(cand: OvoidCandidate, max_violations: int = 20) -> MOvoidReport:
    """Every generator must meet the set in exactly m points."""
    sp = cand.space
    if cand.m <= 0 or len(cand.points) == 0:
        return MOvoidReport(cand.m, "generators", False, 0, [{"reason": "m must be positive"}])
    checked = 0
    viol = []
    hist: dict[int, int] = {}
    for block, counts in generator_intersection_counts(sp, [cand.points]):
        c = counts[:, 0]
        vals, freq = np.unique(c, return_counts=True)
        for v, f in zip(vals, freq):
            hist[int(v)] = hist.get(int(v), 0) + int(f)
        for i in np.flatnonzero(c != cand.m)[: max(0, max_violations - len(viol))]:
            viol.append({"generator": (checked + int(i)), "expected": cand.m, "actual": int(c[i])})
        checked += len(c)
    passed = set(hist) == {cand.m}
    return MOvoidReport(cand.m, "generators", passed, checked, viol, hist)


# ---------------------------------------------------------------------------
# orbits


@dataclass
class Orbit:
    representative: int  # point index
    size: int
    stabilizer: int
    rep_label: int | None = None


@dataclass
class OrbitDecomposition:
    space: QuadraticSpace
    labels: np.ndarray  # orbit id per entry of space.points
    orbits: list
    group_order: int

    def orbit_points(self, k: int) -> PointSet:
        return PointSet.from_indices(self.space.indexer, self.space.points[self.labels == k])

    def orbit_of(self, point_index: int) -> int:
        pos = int(np.searchsorted(self.space.points, point_index))
        return int(self.labels[pos])

    @property
    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]


def pgl3_orbits(space: QuadraticSpace, match_reps: bool | None = None) -> OrbitDecomposition:
    """Orbits of PGL(3,q) (conjugation) on the singular points of ``space``.

    With ``match_reps`` (default: when ``space`` is Q+(7,q)) the five orbits are
    matched to P1..P5 and checked against the expected sizes.
    """
    F = space.field
    if match_reps is None:
        match_reps = space.n == 8 and space.kind == "hyperbolic"
    labels = pgl3.orbit_labels(space, pgl3.generating_set(F))
    order = pgl3.pgl3_order(F.q)
    orbits = []
    for k in range(int(labels.max()) + 1):
        members = np.flatnonzero(labels == k)
        rep = int(space.points[members[0]])
        stab = pgl3.stabilizer_order(F, space.to_ambient(space.vectors(rep)))
        orbits.append(Orbit(rep, len(members), stab))
    dec = OrbitDecomposition(space, labels, orbits, order)
    if match_reps:
        if len(orbits) != 5:
            raise AssertionError(f"expected 5 orbits on Q+(7,q), found {len(orbits)}")
        expected = orbit_size_formula(F.q)
        for i, vec in orbit_representatives(F).items():
            idx = space.rank_points(space.from_ambient(vec))
            o = dec.orbits[dec.orbit_of(idx)]
            if o.rep_label is not None:
                raise AssertionError(f"P{i} shares an orbit with P{o.rep_label}")
            o.rep_label = i
            if o.size != expected[i - 1]:
                raise AssertionError(f"orbit of P{i} has size {o.size}, expected {expected[i - 1]}")
    for o in orbits:
        if o.size * o.stabilizer != order:
            raise AssertionError("orbit-stabiliser identity fails")
    return dec


def gamma_lines_in_perp(hexagon: Hexagon, P) -> int:
    """Number of hexagon lines inside P^perp (P a 9-coordinate vector or a space index)."""
    sp = hexagon.space
    vec = sp.vectors(P) if np.ndim(P) == 0 else sp.from_ambient(np.asarray(P))
    return len(hexagon.lines_in_perp(vec))


# ---------------------------------------------------------------------------
# distinguishing properties


def line_spectrum(cand: OvoidCandidate, lines=None) -> dict[int, int]:
    """Histogram of ``|line cap set|`` over all totally singular lines."""
    if lines is None:
        lines = cand.space.lines()
    counts = cand.points.mask[lines].sum(axis=1)
    vals, freq = np.unique(counts, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, freq)}


def subspace_meet_count(cand: OvoidCandidate, vecs9) -> int:
    sp = cand.space
    s = Subspace.from_rows(sp.field, sp.from_ambient(np.asarray(vecs9)))
    return len(subspace_points(sp.indexer, s) & cand.points)


def span_dimension(field: FiniteField, vecs, chunk: int = 4096) -> int:
    """Projective dimension of the span of many vectors, reduced blockwise."""
    basis = np.zeros((0, vecs.shape[1]), dtype=np.int64)
    for s in range(0, len(vecs), chunk):
        basis, _ = rref(field, np.vstack([basis, vecs[s:s + chunk]]))
        if basis.shape[0] == vecs.shape[1]:
            break
    return basis.shape[0] - 1


def spans_ambient(cand: OvoidCandidate, witnesses=None) -> bool:
    """Whether the set spans the whole space; the witness list is tried first."""
    sp = cand.space
    full = sp.n - 1
    if witnesses is not None:
        w = sp.from_ambient(np.asarray(witnesses))
        if all(cand.points.mask[sp.rank_points(w)]) and span_dimension(sp.field, w) == full:
            return True
    return span_dimension(sp.field, cand.vectors()) == full


def nonsingular_vector(space: QuadraticSpace) -> np.ndarray:
    for _, vecs in space.indexer.iter_chunks(4096):
        hit = np.flatnonzero(space.Q(vecs) != 0)
        if hit.size:
            return vecs[hit[0]]
    raise ValueError("form is identically zero")


def hyperplane_section(space: QuadraticSpace, v=None) -> OvoidCandidate:
    """Singular points in ``v^perp`` for a non-singular ``v``: an embedded Q(2r-2,q).

    This is a ((q^(r-1)-1)/(q-1))-ovoid of a hyperbolic space.
    """
    v = nonsingular_vector(space) if v is None else np.asarray(v)
    if space.Q(v) == 0:
        raise ValueError("hyperplane section needs a non-singular vector")
    mask = space.field.dot(space.point_vectors, space.polar(v)) == 0
    pts = PointSet.from_indices(space.indexer, space.points[mask])
    q, r = space.field.q, space.rank
    return OvoidCandidate(space, pts, (q ** (r - 1) - 1) // (q - 1), label="hyperplane section")


def whole_space(space: QuadraticSpace) -> OvoidCandidate:
    return OvoidCandidate(space, space.point_set, space.points_per_generator, label="all points")


def random_control(cand: OvoidCandidate, rng: np.random.Generator) -> OvoidCandidate:
    """Random subset of the same size, kept with the same claimed m."""
    pick = rng.choice(cand.space.points, size=len(cand.points), replace=False)
    pts = PointSet.from_indices(cand.space.indexer, pick)
    return OvoidCandidate(cand.space, pts, cand.m, label="random control")


def ovoid_algebra(a: OvoidCandidate, b: OvoidCandidate | None, op: str) -> OvoidCandidate:
    """Complement, disjoint union or nested difference, with the m-label recomputed."""
    sp = a.space
    total_m = sp.points_per_generator
    if op == "complement":
        pts = sp.point_set - a.points
        m = total_m - a.m
    elif op == "union":
        if b is None or not a.points.isdisjoint(b.points):
            raise ValueError("union needs disjoint sets")
        pts = a.points | b.points
        m = a.m + b.m
    elif op == "difference":
        if b is None:
            raise ValueError("difference needs two sets")
        if b.points.issubset(a.points):
            pts, m = a.points - b.points, a.m - b.m
        elif a.points.issubset(b.points):
            pts, m = b.points - a.points, b.m - a.m
        else:
            raise ValueError("difference needs one set inside the other")
    else:
        raise ValueError(f"unknown operation {op!r}")
    res = OvoidCandidate(sp, pts, m, label=op)
    if m <= 0 or len(pts) == 0:
        raise ValueError("result is empty: m = 0 is not an m-ovoid")
    if len(pts) != res.expected_size:
        raise ValueError(f"size {len(pts)} does not match the label m = {m}")
    return res


# ---------------------------------------------------------------------------
# representatives-only certification


def det_class(field: FiniteField, vec9) -> str:
    """Orbit invariant: rank, and for invertible matrices the cube class of det."""
    mats = rho_inv(np.asarray(vec9))
    det = int(field.det3(mats))
    if det == 0:
        rank = int(matrix_rank_batch(field, mats))
        return f"rank{rank}"
    if is_cube(field, det):
        return "cube"
    return f"noncube{field.log_table[det] % 3}"


def random_singular_points(space: QuadraticSpace, rng: np.random.Generator, count: int) -> np.ndarray:
    out = []
    while sum(len(x) for x in out) < count:
        v = rng.integers(0, space.field.q, size=(4096, space.n))
        v = v[v.any(axis=1)]
        out.append(v[space.Q(v) == 0])
    return space.indexer.normalize(np.concatenate(out)[:count])


def invariance_spot_checks(cand: OvoidCandidate, rng: np.random.Generator, elements: int = 20) -> dict:
    """g(O) = O and g(P^perp cap O) = g(P)^perp cap O for random g and random singular P."""
    sp = cand.space
    F = sp.field
    ovecs = cand.vectors()
    polar_o = None
    preserved = perp_equivariant = True
    for _ in range(elements):
        A = pgl3.random_element(F, rng)
        img = sp.rank_points(pgl3.act_on_space(sp, A, ovecs))
        if not cand.points.mask[img].all():
            preserved = False
        P = random_singular_points(sp, rng, 1)[0]
        gP = pgl3.act_on_space(sp, A, P[None, :])[0]
        if polar_o is None:
            polar_o = ovecs
        before = F.dot(ovecs, sp.polar(P)) == 0
        moved = np.sort(sp.rank_points(pgl3.act_on_space(sp, A, ovecs[before])))
        after = np.sort(sp.rank_points(ovecs[F.dot(ovecs, sp.polar(gP)) == 0]))
        if not np.array_equal(moved, after):
            perp_equivariant = False
    return {"elements": elements, "O_preserved": preserved, "perp_equivariant": perp_equivariant}


def certify_by_representatives(cand: OvoidCandidate, rng: np.random.Generator, elements: int = 20) -> dict:
    """Perp counts at P1..P5 plus the facts that make them sufficient.

    The representatives have pairwise distinct orbit invariants, their
    orbit sizes ``|PGL(3,q)| / |stabiliser|`` add up to the number of
    points, and the group preserves O and perps (spot-checked).
    """
    sp = cand.space
    F = sp.field
    q = F.q
    reps = orbit_representatives(F)
    rep_idx = np.array([sp.rank_points(sp.from_ambient(v)) for v in reps.values()])
    report = verify_m_ovoid_perp(cand, probes=rep_idx)
    classes = [det_class(F, v) for v in reps.values()]
    order = pgl3.pgl3_order(q)
    stabs = [pgl3.stabilizer_order(F, v) for v in reps.values()]
    sizes = [order // s for s in stabs]
    total = (q**3 + 1) * (q**4 - 1) // (q - 1)
    spot = invariance_spot_checks(cand, rng, elements)
    result = {
        "perp_counts": {f"P{i}": int(c) for i, c in zip(reps, cand.space.count_orthogonal(sp.vectors(rep_idx), cand.vectors()))},
        "perp_pass": report.passed,
        "invariants_distinct": len(set(classes)) == 5,
        "orbit_sizes": sizes,
        "orbit_sizes_cover": sum(sizes) == total and sizes == orbit_size_formula(q),
        **spot,
    }
    result["pass"] = all(
        [result["perp_pass"], result["invariants_distinct"], result["orbit_sizes_cover"], spot["O_preserved"], spot["perp_equivariant"]]
    )
    return result
