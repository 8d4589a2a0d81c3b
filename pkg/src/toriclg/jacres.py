"""Residue pairing and quantum-cohomology sanity identities.

For a Morse potential the Jacobian ring splits over the critical points;
the residue pairing is diagonal with entry 1/Z at each point, where Z is
the determinant of the logarithmic Hessian.  Two checks fall out at desk
scale: the traces of the idempotents sum to zero, and on projective
space the basis built from powers of the hyperplane class is exactly
Poincare dual to itself.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .config import get_config
from .errors import SingularHessian
from .laurent import Potential, build_potential
from .novikov import INF, NovikovScalar, format_fraction
from .polytope import catalog
from .tropical import CriticalPoint, CriticalReport


def hessian_matrix(
    potential: Potential, u, ys_local
) -> list[list[NovikovScalar]]:
    """Logarithmic Hessian  theta_i theta_j PO  at a point given in the
    frame centered at u."""
    n = potential.polytope.dim
    base = potential.poly
    rows = []
    for i in range(n):
        row = []
        gi = base.log_derivative(i)
        for j in range(n):
            hij = gi.log_derivative(j).change_frame(
                tuple(Fraction(x) for x in u)
            )
            row.append(hij.evaluate(ys_local))
        rows.append(row)
    return rows


def novikov_det(m: list[list[NovikovScalar]]) -> NovikovScalar:
    """Determinant by cofactor expansion; fine for the small sizes here."""
    n = len(m)
    if n == 0:
        return NovikovScalar.one()
    if n == 1:
        return m[0][0]
    total = NovikovScalar.zero()
    for j in range(n):
        entry = m[0][j]
        if entry.is_zero():
            continue
        minor = [
            [m[r][c] for c in range(n) if c != j] for r in range(1, n)
        ]
        term = entry * novikov_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def z_value(potential: Potential, point: CriticalPoint) -> NovikovScalar:
    """Hessian determinant at a lifted critical point."""
    if point.y_local is None:
        raise SingularHessian(
            "no series solution stored; the point was degenerate at leading order"
        )
    z = novikov_det(hessian_matrix(potential, point.u, point.y_local))
    if z.is_zero():
        raise SingularHessian(f"Hessian determinant vanishes at u={point.u}")
    return z


def z_exactness(potential: Potential) -> str:
    """How far the Hessian determinant can be trusted as the quantum Euler
    class: exact for surfaces and for nef spaces with facet-degree bulk,
    leading-order only otherwise."""
    if potential.polytope.dim == 2:
        return "surface"
    if potential.polytope.fano_type() in ("fano", "nef-only"):
        return "nef-deg2"
    return "leading-order-only"


@dataclass
class ResidueReport:
    z_values: list[NovikovScalar]
    critical_values: list[NovikovScalar]
    pairing_diag: list[NovikovScalar]
    trace_sum: NovikovScalar | None
    trace_ok: bool | None
    trace_residual: float | None
    morse_total: int | None
    betti: int
    morse_mode: str  # "equality" | "lower-bound"
    morse_ok: bool
    exactness: str
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "z_values": [z.to_json_dict() for z in self.z_values],
            "critical_values": [v.to_json_dict() for v in self.critical_values],
            "pairing_diag": [p.to_json_dict() for p in self.pairing_diag],
            "trace_sum": None if self.trace_sum is None else self.trace_sum.to_json_dict(),
            "trace_ok": self.trace_ok,
            "trace_residual": self.trace_residual,
            "morse_total": self.morse_total,
            "betti": self.betti,
            "morse_mode": self.morse_mode,
            "morse_ok": self.morse_ok,
            "exactness": self.exactness,
            "notes": self.notes,
        }


def morse_count_check(
    potential: Potential, report: CriticalReport
) -> tuple[bool, int | None, int, str]:
    """Sum of multiplicities against the Betti number of the ambient space.
    Equality is expected only when every candidate resolved into isolated
    points with known multiplicity."""
    betti = potential.polytope.total_betti()
    total = report.multiplicity_total()
    exhaustive = not report.cells and total is not None
    if exhaustive:
        return total == betti, total, betti, "equality"
    known = sum(p.multiplicity or 0 for p in report.points)
    return known <= betti, known, betti, "lower-bound"


def residue_report(
    potential: Potential, report: CriticalReport
) -> ResidueReport:
    cfg = get_config()
    notes: list[str] = []
    zs: list[NovikovScalar] = []
    values: list[NovikovScalar] = []
    inv: list[NovikovScalar] = []
    all_lifted = bool(report.points)
    for pt in report.points:
        if pt.y_local is None:
            all_lifted = False
            notes.append(
                f"point at u={tuple(map(format_fraction, pt.u))} is degenerate; "
                "no residue data"
            )
            continue
        z = z_value(potential, pt)
        zs.append(z)
        inv.append(z.invert())
        ys_abs = pt.y_absolute()
        values.append(potential.evaluate(ys_abs))
    trace_sum = None
    trace_ok: bool | None = None
    trace_residual: float | None = None
    if all_lifted and not report.cells and inv:
        s = NovikovScalar.zero()
        for t in inv:
            s = s + t
        trace_sum = s
        scale = max(t.max_abs_coeff() for t in inv)
        trace_residual = s.max_abs_coeff() / max(scale, 1e-30)
        trace_ok = s.is_zero() or trace_residual <= cfg.tol_zero
    elif report.cells:
        notes.append("positive-dimensional candidate cells: trace check skipped")
    elif report.points and not all_lifted:
        notes.append("degenerate points present: trace check skipped")
    else:
        notes.append("no critical points found: trace check skipped")
    morse_ok, total, betti, mode = morse_count_check(potential, report)
    return ResidueReport(
        z_values=zs,
        critical_values=values,
        pairing_diag=inv,
        trace_sum=trace_sum,
        trace_ok=trace_ok,
        trace_residual=trace_residual,
        morse_total=total,
        betti=betti,
        morse_mode=mode,
        morse_ok=morse_ok,
        exactness=z_exactness(potential),
        notes=notes,
    )


def z_valuation_consistency(potential: Potential, point: CriticalPoint) -> bool:
    """Cross-check the valuation of the Hessian determinant against the
    assignment bound from the entry valuations.

    The determinant valuation can never drop below the minimum over
    permutations of the summed entry valuations; when the leading
    coefficients along the minimizing permutations do not cancel, the two
    agree exactly."""
    h = hessian_matrix(potential, point.u, point.y_local)
    n = len(h)
    vals = [[e.valuation() for e in row] for row in h]
    best = INF
    lead_det = 0j
    for perm in itertools.permutations(range(n)):
        s = sum(vals[i][perm[i]] for i in range(n))
        if s < best:
            best = s
            lead_det = 0j
        if s == best and s != INF:
            sign = _perm_sign(perm)
            prod = complex(sign)
            for i in range(n):
                prod *= h[i][perm[i]].coeff_at(vals[i][perm[i]])
            lead_det += prod
    z = novikov_det(h)
    if z.is_zero() or best == INF:
        return False
    if abs(lead_det) > 1e-9:
        return z.valuation() == best
    return z.valuation() >= best


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- projective space duality -------------------------------------------------


@dataclass
class DualityReport:
    n: int
    z_ok: bool
    pairing_ok: bool
    max_error: float
    z_values: list[NovikovScalar]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "z_ok": self.z_ok,
            "pairing_ok": self.pairing_ok,
            "max_error": self.max_error,
            "z_values": [z.to_json_dict() for z in self.z_values],
        }


def cpn_duality(n: int, tol: float = 1e-9) -> DualityReport:
    """Self-duality of the hyperplane-power basis on projective n-space.

    The critical points are known in closed form, so everything here is
    exact Novikov arithmetic: y_i = T^{1/(n+1)} zeta^k with zeta a
    primitive (n+1)-st root of unity.  The basis element built from the
    degree-2l class pairs to 1 against the one from degree 2(n-l) and to
    0 against every other.
    """
    if n < 1 or n > 6:
        raise ValueError("duality check supports 1 <= n <= 6")
    entry = catalog("simplex", n)
    pot = build_potential(entry.polytope)
    um = tuple(Fraction(1, n + 1) for _ in range(n))
    zeta = cmath.exp(2j * cmath.pi / (n + 1))
    points_local = [
        tuple(NovikovScalar.from_number(zeta ** k) for _ in range(n))
        for k in range(n + 1)
    ]
    zs = [
        novikov_det(hessian_matrix(pot, um, ys)) for ys in points_local
    ]
    max_err = 0.0
    z_ok = True
    for k, z in enumerate(zs):
        expect = NovikovScalar.monomial(
            Fraction(n, n + 1), (n + 1) * zeta ** (k * n)
        )
        diff = (z - expect).max_abs_coeff()
        max_err = max(max_err, diff)
        if diff > tol:
            z_ok = False
    inv = [z.invert() for z in zs]
    pairing_ok = True
    for a in range(n + 1):
        for b in range(n + 1):
            s = NovikovScalar.zero()
            for k in range(n + 1):
                w = (zeta ** (k * a)) * (zeta ** (k * b))
                s = s + inv[k] * NovikovScalar.from_number(w)
            s = s.shift(Fraction(a + b, n + 1))
            expect = 1.0 if a + b == n else 0.0
            err = (s - NovikovScalar.from_number(expect)).max_abs_coeff()
            max_err = max(max_err, err)
            if err > tol:
                pairing_ok = False
    return DualityReport(
        n=n, z_ok=z_ok, pairing_ok=pairing_ok, max_error=max_err, z_values=zs
    )
