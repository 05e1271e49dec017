"""Look for PGL(3,q)-invariant (q^2+q+1)-ovoids of Q(8,q) by orbit-collapsed search."""

import sys

from hexovoid.gf import FiniteField
from hexovoid.q8search import build_table, classify_solutions, search

q = int(sys.argv[1]) if len(sys.argv) > 1 else 2
table = build_table(FiniteField(q))
print(f"q={q}: {len(table.sizes)} point orbits {table.sizes.tolist()}, "
      f"{len(table.rows)} distinct generator rows, target size {table.target_size}")
sols = search(table)
for rep in classify_solutions(table, sols):
    where = "inside a hyperplane" if rep.in_hyperplane else "spans PG(8,q)"
    print(f"  orbits {rep.orbit_indices}: {rep.size} points, {where}, verified={rep.verified}")
    if rep.section:
        print("   hyperplane section:", rep.section)
