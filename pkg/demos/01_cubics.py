"""When does x^3 + cx + d have no root over GF(q), q = 1 mod 3?

Runs the closed-form criterion on every depressed cubic and compares it
with a brute-force root count. The criterion is only sufficient, so we
print how many rootless cubics it misses too.
"""

from hexovoid.gf import Cubic, FiniteField, cubic_has_no_root_criterion, cubic_root_count, discriminant, is_cube

for q in (4, 7, 13, 16):
    F = FiniteField(q)
    certified = rootless = 0
    for c in range(q):
        for d in range(q):
            f = Cubic(F, c, d)
            if discriminant(f) == 0:
                continue
            r = cubic_root_count(f)
            ok = cubic_has_no_root_criterion(f)
            assert not (ok and r), (q, c, d)
            certified += ok
            rootless += r == 0
    noncubes = [a for a in range(1, q) if not is_cube(F, a)]
    print(f"GF({q:2d}): omega={F.omega:2d}  non-cubes={len(noncubes):2d}  "
          f"rootless cubics={rootless:3d}  certified={certified:3d}")
