"""Build the (q^2+q+1)-ovoid O of Q+(7,q) and check it both ways.

The perp test looks at every point P and counts |P^perp cap O|; the
generator test intersects O with every maximal totally singular subspace.
"""

import sys
import time

import numpy as np

from hexovoid import ovoid as ov
from hexovoid.gf import FiniteField
from hexovoid.hexagon import build_hexagon, unit

q = int(sys.argv[1]) if len(sys.argv) > 1 else 4
F = FiniteField(q)
H = build_hexagon(F)
O = ov.build_O(H)
print(f"|O| = {len(O)}  (m = {O.m}, expected {O.expected_size})")

t = time.perf_counter()
r = ov.verify_m_ovoid_perp(O)
print("perp counts:", r.histogram, "pass" if r.passed else "FAIL", f"{time.perf_counter() - t:.1f}s")
t = time.perf_counter()
r = ov.verify_m_ovoid_generators(O)
print("generators: ", r.histogram, "pass" if r.passed else "FAIL", f"{time.perf_counter() - t:.1f}s")

bad = ov.random_control(O, np.random.default_rng(0))
print("random subset of the same size passes?", ov.verify_m_ovoid_perp(bad).passed)

dec = ov.pgl3_orbits(H.space)
for o in sorted(dec.orbits, key=lambda o: o.rep_label):
    print(f"  P{o.rep_label}: orbit {o.size:6d}  stabiliser {o.stabilizer}")

if q <= 4:
    lines = O.space.lines()
    print("line spectrum of O:       ", ov.line_spectrum(O, lines))
    print("line spectrum of a section:", ov.line_spectrum(ov.hyperplane_section(O.space), lines))
print("<U2,U6,U7> meets O in", ov.subspace_meet_count(O, [unit(2), unit(6), unit(7)]), "points")
print("O spans the whole space:", ov.spans_ambient(O, ov.witness_points(F)))
