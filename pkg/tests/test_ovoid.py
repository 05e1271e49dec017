import numpy as np
import pytest

from hexovoid import ovoid as ov
from hexovoid.gf import FiniteField
from hexovoid.hexagon import unit

SPEC_O4 = {0: 80640, 1: 189840, 2: 80640, 3: 40320, 5: 3045}
SPEC_SECTION4 = {1: 371280, 5: 23205}


def brute_perp_counts(cand, probes):
    """Loop-per-probe oracle for |P^perp cap M|."""
    sp = cand.space
    F = sp.field
    M = cand.vectors()
    return np.array([int(np.count_nonzero(F.dot(M, sp.polar(sp.vectors(int(p)))) == 0)) for p in probes])


def test_build(O4, hex4):
    assert len(O4) == 1365 and O4.m == 21 and O4.expected_size == 1365
    acc = ov.overlap_accounting(hex4)
    assert acc["total"] == acc["predicted"] == 1365 and acc["off_gamma_distinct"]


def test_membership_oracle_matches_union(O4):
    sp = O4.space
    mask = ov.membership_mask(sp, sp.point_vectors)
    assert np.array_equal(np.sort(sp.points[mask]), O4.points.indices())
    assert ov.membership_O(sp, sp.from_ambient(unit(3)))
    assert not ov.membership_O(sp, sp.from_ambient(ov.orbit_representatives(sp.field)[4]))


def test_perp_counts_against_brute_force(O4, rng):
    probes = rng.choice(O4.space.points, size=60, replace=False)
    got = ov.perp_counts(O4, probes)
    assert np.array_equal(got, brute_perp_counts(O4, probes))
    comp = ov.ovoid_algebra(O4, None, "complement")
    assert np.array_equal(ov.perp_counts(comp, probes), brute_perp_counts(comp, probes))


def test_verifiers_q4(O4):
    rp = ov.verify_m_ovoid_perp(O4)
    assert rp.passed and rp.histogram == {341: 1365, 357: 4160} and rp.checked == 5525
    rg = ov.verify_m_ovoid_generators(O4)
    assert rg.passed and rg.histogram == {21: 11050}


def test_negative_control_rejected(O4, rng):
    bad = ov.random_control(O4, rng)
    rp, rg = ov.verify_m_ovoid_perp(bad), ov.verify_m_ovoid_generators(bad)
    assert not rp.passed and not rg.passed
    assert rp.violations and {"point", "expected", "actual"} <= set(rp.violations[0])
    assert len(rp.violations) <= 20


def test_single_point_removed_is_caught(O4):
    pts = O4.points - ov.PointSet.from_indices(O4.space.indexer, [O4.points.indices()[0]])
    c = ov.OvoidCandidate(O4.space, pts, 21)
    assert not ov.verify_m_ovoid_perp(c).passed
    assert not ov.verify_m_ovoid_generators(c).passed


def test_orbits_and_gamma_lines(hex4):
    dec = ov.pgl3_orbits(hex4.space)
    by = {o.rep_label: o for o in dec.orbits}
    assert [by[i].size for i in range(1, 6)] == [105, 1260, 2240, 960, 960]
    assert [by[i].stabilizer for i in range(1, 6)] == [576, 48, 27, 63, 63]
    reps = ov.orbit_representatives(hex4.field)
    assert [ov.gamma_lines_in_perp(hex4, reps[i]) for i in range(1, 6)] == [10, 2, 6, 0, 0]
    # P1, P2 lie in O; P3..P5 do not
    sp = hex4.space
    assert [ov.membership_O(sp, sp.from_ambient(reps[i])) for i in range(1, 6)] == [True, True, False, False, False]


def test_spectra(O4, lines4):
    assert ov.line_spectrum(O4, lines4) == SPEC_O4
    hs = ov.hyperplane_section(O4.space)
    assert hs.m == 21 and len(hs) == 1365
    assert ov.line_spectrum(hs, lines4) == SPEC_SECTION4
    assert ov.verify_m_ovoid_generators(hs).passed


def test_sigma_plane_and_span(O4):
    F = O4.space.field
    assert ov.subspace_meet_count(O4, [unit(2), unit(6), unit(7)]) == 12
    assert ov.spans_ambient(O4, ov.witness_points(F))
    assert ov.spans_ambient(O4)
    assert not ov.spans_ambient(ov.hyperplane_section(O4.space))


def test_algebra(O4):
    sp = O4.space
    comp = ov.ovoid_algebra(O4, None, "complement")
    assert comp.m == 64 and len(comp) == 4160
    assert ov.verify_m_ovoid_perp(comp).passed
    whole = ov.ovoid_algebra(O4, comp, "union")
    assert whole.m == 85 and len(whole) == 5525
    back = ov.ovoid_algebra(O4, whole, "difference")
    assert back.m == 64 and back.points == comp.points
    with pytest.raises(ValueError):
        ov.ovoid_algebra(O4, O4, "union")
    with pytest.raises(ValueError):
        ov.ovoid_algebra(O4, O4, "difference")  # m = 0
    hs = ov.hyperplane_section(sp)
    with pytest.raises(ValueError):
        ov.ovoid_algebra(O4, hs, "difference")
    with pytest.raises(ValueError):
        ov.ovoid_algebra(O4, None, "symmetric")


def test_zero_m_rejected(O4):
    empty = ov.OvoidCandidate(O4.space, ov.PointSet.empty(O4.space.indexer), 0)
    assert not ov.verify_m_ovoid_perp(empty).passed
    assert not ov.verify_m_ovoid_generators(empty).passed


def test_certificate_q4(O4, rng):
    cert = ov.certify_by_representatives(O4, rng, elements=5)
    assert cert["pass"]
    assert cert["perp_counts"] == {"P1": 341, "P2": 341, "P3": 357, "P4": 357, "P5": 357}


def test_det_classes():
    F = FiniteField(7)
    reps = ov.orbit_representatives(F)
    assert [ov.det_class(F, reps[i]) for i in range(1, 6)] == ["rank1", "rank2", "cube", "noncube1", "noncube2"]


def test_build_rejects_bad_q():
    from hexovoid.hexagon import Hexagon
    from hexovoid.quadric import q8_space

    H = Hexagon.__new__(Hexagon)
    H.space = q8_space(FiniteField(5))
    with pytest.raises(ValueError):
        ov.build_O(H)
