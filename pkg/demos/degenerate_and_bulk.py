"""
Bulk deformations and a degenerate critical fiber
=================================================

Rescaling the facet classes (a valuation-zero bulk deformation) moves the
critical fibers around and can collide two of them.  On the monotone
blow-up of the plane, weighting the facets by (1, 1, -1/4, 3/4) merges two
fibers into one double point: the eliminant picks up the square factor
(z + 1)^2 and the pipeline reports an honest multiplicity-2 degenerate
point instead of two spurious simple ones.
"""

from fractions import Fraction

from toriclg import (
    BulkCoefficients,
    NovikovScalar,
    build_potential,
    catalog,
    find_critical_points,
    morse_count_check,
    residue_report,
)

F = Fraction

entry = catalog("blowup1", F(1, 3))

plain = build_potential(entry.polytope)
rep0 = find_critical_points(plain)
print(f"undeformed: {len(rep0.points)} fibers, all nondegenerate:",
      all(p.nondegenerate for p in rep0.points))

bulk = BulkCoefficients(tuple(
    NovikovScalar.from_number(c) for c in (1, 1, -0.25, 0.75)
))
pot = build_potential(entry.polytope, bulk=bulk)
rep = find_critical_points(pot)
print(f"\nwith bulk (1, 1, -1/4, 3/4): {len(rep.points)} fibers")
for p in rep.points:
    y = tuple(f"{z:.6f}" for z in p.y_initial)
    tag = "degenerate" if not p.nondegenerate else "nondegenerate"
    print(f"  y = {y}  mult {p.multiplicity}  ({tag})")

(elim,) = rep.eliminants
print("eliminant coefficients:", [round(c.real, 6) for c in elim.coeffs])

ok, total, betti, mode = morse_count_check(pot, rep)
print(f"multiplicity count: {total} vs betti {betti}  ({mode}, ok={ok})")

rr = residue_report(pot, rep)
print("trace check skipped (degenerate fiber present):", rr.trace_ok is None)
for note in rr.notes:
    print("  note:", note)
