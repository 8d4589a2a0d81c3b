"""
Scanning for bulk-balanced fibers with leading-term equations
=============================================================

The leading-term equations decide, fiber by fiber, whether some bulk
deformation makes the Floer cohomology nonvanishing.  Solving them needs no
series lifting, only exact lattice work plus small polynomial systems, so a
dense grid scan is cheap.

Two classics: F_2(1/2) is balanced at exactly one point of a 50 x 50 grid
scan, and the double blow-up with cuts (1/2, 1/4) is balanced along a whole
segment, matching the tropical one-cell.
"""

from fractions import Fraction

from toriclg import (
    balanced_positions,
    build_potential,
    catalog,
    find_critical_points,
    is_strongly_balanced,
    solve_lte,
)

F = Fraction

entry = catalog("hirzebruch", 2, F(1, 2))
pot = build_potential(entry.polytope, corrections=entry.corrections)
star = (F(3, 4), F(1, 4))
scan = balanced_positions(pot, 50, extra=[star])
balanced = [u for u, status in scan if status == "balanced"]
print(f"F_2(1/2): scanned {len(scan)} interior grid points")
print("balanced fibers:", [tuple(map(str, u)) for u in balanced])
res = solve_lte(pot, star)
print("witness holonomies:",
      sorted((round(w[0].real, 3), round(w[1].real, 3))
             for w in res.witnesses_y()))

print()
entry2 = catalog("blowup2", F(1, 2), F(1, 4))
pot2 = build_potential(entry2.polytope)
rep = find_critical_points(pot2)
cells = [c for c in rep.cells if c.dimension == 1]
print(f"blowup2(1/2, 1/4): {len(rep.points)} point fibers "
      f"and {len(cells)} one-dimensional balanced cell")
cell = cells[0]
print("cell sample:", tuple(map(str, cell.sample_u)),
      "t range:", tuple(map(str, cell.t_range)))

print("walking the segment u = (t, 1/4):")
for k in range(2, 11, 2):
    t = F(1, 4) + k * F(1, 64)
    u = (t, F(1, 4))
    verdict = is_strongly_balanced(pot2, u)
    if t < F(3, 8):
        mark = "on segment"
    elif t == F(3, 8):
        mark = "endpoint, the point fiber"
    else:
        mark = "past the end"
    print(f"  t = {t}: balanced={verdict}  ({mark})")

off = (F(5, 16), F(3, 10))
print(f"off the segment at ({off[0]}, {off[1]}): "
      f"balanced={is_strongly_balanced(pot2, off)}")
