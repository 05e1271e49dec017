"""The split Cayley hexagon's thin relative: flags of PG(2,q) as rank-one matrices.

A flag (point a, line b) goes to the matrix a b^T, which is traceless and
lies on the quadric Q+(7,q) cut out of the trace-zero matrices.
"""

import sys

from hexovoid.gf import FiniteField
from hexovoid.hexagon import build_hexagon, unit

q = int(sys.argv[1]) if len(sys.argv) > 1 else 4
H = build_hexagon(FiniteField(q))
print(H)
print("diameter", H.diameter, "girth", H.girth)

x, y = H.point_id(unit(3)), H.point_id(unit(7))
print("d(U3, U7) =", H.point_distance(x, y))
ap = H.find_apartment(x, y)
names = ["U%d" % (int(H.ambient_vectors[c].nonzero()[0][0]) + 1) for c in ap.corners]
print("apartment corners:", " -> ".join(names), "| span dim", ap.span.dimension)

# the plane of x meets the plane of y in a line, a point or nothing
kinds = {}
for z in range(H.num_points):
    if z != x:
        r = H.pi_intersection(x, z)
        kinds.setdefault((r.distance, r.kind), 0)
        kinds[r.distance, r.kind] += 1
for (d, kind), n in sorted(kinds.items()):
    print(f"  distance {d}: {kind:5s} x{n}")
