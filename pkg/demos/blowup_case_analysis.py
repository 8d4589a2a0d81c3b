"""
One-point blow-up of the plane: a case analysis in the cut size
===============================================================

Blowing up CP^2 with cut parameter a trims the corner of the triangle.
Where the balanced fibers sit depends on a in a genuinely discontinuous
way, which makes this the standard stress test for candidate location:

  a = 2/5   one interior point carries all four fibers
  a = 1/5   the point splits: one fiber near the cut, three at the center
  a = 1/3   the monotone case, all four on the center with an irrational
            eigenvalue structure (the quartic z^4 + z^3 - 1)
"""

from fractions import Fraction

from toriclg import (
    build_potential,
    catalog,
    find_critical_points,
    render_scalar,
    residue_report,
    tropical_candidates,
)

F = Fraction


def describe(alpha: Fraction) -> None:
    entry = catalog("blowup1", alpha)
    pot = build_potential(entry.polytope)
    print(f"--- cut a = {alpha} ---")

    candidates, cells = tropical_candidates(pot)
    print("candidate fibers:", [tuple(map(str, u)) for u in candidates])
    if cells:
        print("positive-dimensional cells:", [c.dimension for c in cells])

    rep = find_critical_points(pot)
    by_u: dict = {}
    for p in rep.points:
        by_u.setdefault(p.u, []).append(p)
    for u, pts in sorted(by_u.items()):
        print(f"  at u = ({u[0]}, {u[1]}): {len(pts)} fibers")
        for p in pts:
            y1, y2 = p.y_initial
            print(f"    y = ({y1:.6f}, {y2:.6f})  mult {p.multiplicity}")
    total = rep.multiplicity_total()
    betti = entry.polytope.total_betti()
    print(f"  multiplicity total {total} vs sum of betti numbers {betti}")
    print()


for alpha in (F(2, 5), F(1, 5), F(1, 3)):
    describe(alpha)

# the monotone case again, now through the residue lens
pot = build_potential(catalog("blowup1", F(1, 3)).polytope)
rep = find_critical_points(pot)
(elim,) = rep.eliminants
print("eliminant coefficients (constant term first):",
      [round(c.real, 9) for c in elim.coeffs])

rr = residue_report(pot, rep)
print("Z at each fiber (should be T^{2/3} (4 - z^3)/z):")
for p, zv in zip(rep.points, rr.z_values):
    z = p.y_initial[0]
    print(f"  z = {z:.6f}: Z = {render_scalar(zv.truncate(F(2)))}")
acc = sum(p.y_initial[0] / (4 - p.y_initial[0] ** 3) for p in rep.points)
print(f"sum of z/(4 - z^3) over the quartic roots: {abs(acc):.2e}  (a trace identity)")
