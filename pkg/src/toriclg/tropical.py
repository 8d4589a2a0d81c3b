"""Locating critical fibers of a potential over the Novikov field.

The search runs in two stages.  The tropical stage works with exact
rational arithmetic on term valuations: a point u inside the polytope can
carry a critical point only if, in the frame centered at u, every partial
of the potential has its minimal T-power attained by at least two terms.
Candidate points come from equating valuation pairs, one pair per
equation; rank-deficient pair choices yield affine candidate subspaces
that are subdivided along their breakpoints.  The algebraic stage solves
the leading-coefficient system at each candidate over the torus and lifts
every nondegenerate initial root to a Novikov series solution by Newton
iteration with exact exponent bookkeeping.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._intlinalg import frac_solve
from .config import get_config
from .errors import (
    NoConvergence,
    NotInterior,
    PositiveDimensionalInitialLocus,
    SingularInitialJacobian,
)
from .laurent import LaurentPoly, Potential
from .novikov import INF, NovikovScalar, format_fraction
from .polysolve import (
    CPoly,
    eliminant_multiplicity,
    log_jacobian,
    solve_torus_system,
)

ExpVec = tuple[int, ...]
FracVec = tuple[Fraction, ...]


# -- term bookkeeping ---------------------------------------------------------


def _equation_terms(g: LaurentPoly) -> list[tuple[ExpVec, Fraction, complex]]:
    """(exponent, coefficient valuation, leading complex coefficient) per term."""
    out = []
    for a, c in g.terms.items():
        v = c.valuation()
        out.append((a, v, c.coeff_at(v)))
    return out


def _val_at(term: tuple[ExpVec, Fraction, complex], u: FracVec) -> Fraction:
    a, v, _ = term
    return v + sum(Fraction(x) * y for x, y in zip(a, u))


def _argmin_count(terms, u: FracVec) -> int:
    vals = [_val_at(t, u) for t in terms]
    m = min(vals)
    return sum(1 for v in vals if v == m)


def balanced_at(potential: Potential, u) -> bool:
    """True when every equation of the critical system has its minimal
    valuation at u attained by at least two terms."""
    uf = tuple(Fraction(x) for x in u)
    if not potential.polytope.interior_contains(uf):
        return False
    for g in potential.critical_system():
        if not g.terms:
            return False
        if _argmin_count(_equation_terms(g), uf) < 2:
            return False
    return True


def initial_system(
    potential: Potential, u
) -> tuple[list[CPoly], list[Fraction]]:
    """Leading-coefficient system of the critical equations in the frame
    centered at u, together with the leading valuation of each equation."""
    uf = tuple(Fraction(x) for x in u)
    if not potential.polytope.interior_contains(uf):
        raise NotInterior(f"{u} is not an interior point")
    polys: list[CPoly] = []
    svals: list[Fraction] = []
    for g in potential.critical_system():
        terms = _equation_terms(g)
        vals = [_val_at(t, uf) for t in terms]
        s = min(vals)
        p: CPoly = {}
        for (a, _, lead), v in zip(terms, vals):
            if v == s:
                p[a] = p.get(a, 0j) + lead
        polys.append(p)
        svals.append(s)
    return polys, svals


# -- tropical candidates ------------------------------------------------------


@dataclass(frozen=True)
class TropicalCell:
    """A candidate locus that was not resolved into isolated points."""

    dimension: int
    sample_u: FracVec
    directions: tuple[FracVec, ...] = ()
    t_range: tuple[Fraction, Fraction] | None = None
    note: str = ""

    def to_json_dict(self) -> dict:
        d = {
            "dimension": self.dimension,
            "sample_u": [format_fraction(x) for x in self.sample_u],
            "directions": [
                [format_fraction(x) for x in v] for v in self.directions
            ],
            "note": self.note,
        }
        if self.t_range is not None:
            d["t_range"] = [format_fraction(t) for t in self.t_range]
        return d


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [r[:] for r in rows]
    cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(cols):
        sel = None
        for i in range(pivot_row, len(rows)):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        pv = rows[pivot_row][col]
        rows[pivot_row] = [x / pv for x in rows[pivot_row]]
        for i in range(len(rows)):
            if i != pivot_row and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return [r for r in rows if any(x != 0 for x in r)]


def _canonical_affine(
    particular: FracVec, nullspace: list[FracVec]
) -> tuple[tuple[FracVec, ...], FracVec]:
    basis = _rref([list(v) for v in nullspace])
    p = list(particular)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x != 0)
        f = p[col]
        p = [a - f * b for a, b in zip(p, row)]
    return tuple(tuple(r) for r in basis), tuple(p)


def _line_interval(
    potential: Potential, p: FracVec, d: FracVec
) -> tuple[Fraction, Fraction] | None:
    """Open parameter interval where p + t d stays interior."""
    lo: Fraction | None = None
    hi: Fraction | None = None
    for f in potential.polytope.facets:
        slope = sum(Fraction(n) * x for n, x in zip(f.normal, d))
        base = f.ell(p)
        if slope == 0:
            if base <= 0:
                return None
            continue
        bound = -base / slope
        if slope > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is None or hi is None or lo >= hi:
        return None  # unbounded lines cannot occur inside a compact polytope
    return lo, hi


def _point_on(p: FracVec, d: FracVec, t: Fraction) -> FracVec:
    return tuple(a + t * b for a, b in zip(p, d))


def tropical_candidates(
    potential: Potential,
) -> tuple[list[FracVec], list[TropicalCell]]:
    """Isolated candidate points and positive-dimensional candidate cells."""
    eqs = [_equation_terms(g) for g in potential.critical_system()]
    n = potential.polytope.dim
    if any(len(terms) < 2 for terms in eqs):
        return [], []
    pair_eqs: list[list[tuple[FracVec, Fraction]]] = []
    for terms in eqs:
        seen: dict[tuple, tuple[FracVec, Fraction]] = {}
        for (a, va, _), (b, vb, _) in itertools.combinations(terms, 2):
            row = tuple(Fraction(x - y) for x, y in zip(a, b))
            rhs = vb - va
            if all(x == 0 for x in row):
                continue  # same exponent cannot happen after merging
            scale = next(x for x in row if x != 0)
            key = (tuple(x / scale for x in row), rhs / scale)
            seen[key] = (row, rhs)
        pair_eqs.append(list(seen.values()))
    if any(not pe for pe in pair_eqs):
        return [], []

    points: dict[FracVec, None] = {}
    subspaces: dict[tuple, tuple[FracVec, list[FracVec]]] = {}
    for combo in itertools.product(*pair_eqs):
        a = [list(row) for row, _ in combo]
        b = [rhs for _, rhs in combo]
        sol = frac_solve(a, b)
        if sol is None:
            continue
        particular, nullspace = sol
        if not nullspace:
            points[tuple(particular)] = None
        else:
            key = _canonical_affine(tuple(particular), [tuple(v) for v in nullspace])
            subspaces.setdefault(key, (key[1], [tuple(v) for v in key[0]]))

    def ok(u: FracVec) -> bool:
        return potential.polytope.interior_contains(u) and all(
            _argmin_count(terms, u) >= 2 for terms in eqs
        )

    candidates = {u: None for u in points if ok(u)}
    cells: list[TropicalCell] = []

    for particular, basis in subspaces.values():
        if len(basis) == 1:
            d = basis[0]
            interval = _line_interval(potential, particular, d)
            if interval is None:
                continue
            lo, hi = interval
            breaks: set[Fraction] = set()
            for terms in eqs:
                for (a, va, _), (bb, vb, _) in itertools.combinations(terms, 2):
                    slope = sum(
                        Fraction(x - y) * z for x, y, z in zip(a, bb, d)
                    )
                    base = (
                        va
                        + sum(Fraction(x) * y for x, y in zip(a, particular))
                        - vb
                        - sum(Fraction(x) * y for x, y in zip(bb, particular))
                    )
                    if slope != 0:
                        t = -base / slope
                        if lo < t < hi:
                            breaks.add(t)
            ts = sorted(breaks)
            for t in ts:
                u = _point_on(particular, d, t)
                if ok(u):
                    candidates.setdefault(u, None)
            edges = [lo] + ts + [hi]
            for a_t, b_t in zip(edges, edges[1:]):
                mid = (a_t + b_t) / 2
                u = _point_on(particular, d, mid)
                if ok(u):
                    cells.append(
                        TropicalCell(
                            dimension=1,
                            sample_u=u,
                            directions=(d,),
                            t_range=(a_t, b_t),
                        )
                    )
        else:
            steps = [Fraction(k, 4) for k in range(-4, 5)]
            hits = []
            for tv in itertools.product(steps, repeat=len(basis)):
                u = tuple(
                    p + sum(t * v[i] for t, v in zip(tv, basis))
                    for i, p in enumerate(particular)
                )
                if ok(u):
                    hits.append(u)
            if hits:
                cells.append(
                    TropicalCell(
                        dimension=len(basis),
                        sample_u=hits[0],
                        directions=tuple(basis),
                        note="validated on a coarse sample only",
                    )
                )

    ordered = sorted(candidates)
    cells.sort(key=lambda c: (c.dimension, c.sample_u))
    return ordered, cells


# -- Novikov-linear algebra ---------------------------------------------------


def lambda_solve(
    mat: list[list[NovikovScalar]], rhs: list[NovikovScalar]
) -> list[NovikovScalar]:
    """Gaussian elimination over the Novikov field with minimal-valuation
    pivoting.  Raises SingularInitialJacobian when no usable pivot exists."""
    n = len(rhs)
    m = [row[:] for row in mat]
    b = rhs[:]
    perm = list(range(n))
    for col in range(n):
        best = None
        best_val = INF
        for r in range(col, n):
            e = m[r][col]
            if not e.is_zero() and e.valuation() < best_val:
                best, best_val = r, e.valuation()
        if best is None:
            raise SingularInitialJacobian(
                f"no pivot in column {col}: Jacobian is singular to working order"
            )
        m[col], m[best] = m[best], m[col]
        b[col], b[best] = b[best], b[col]
        inv = m[col][col].invert()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
            b[r] = b[r] - f * b[col]
    xs: list[NovikovScalar] = [NovikovScalar.zero()] * n
    for row in range(n - 1, -1, -1):
        acc = b[row]
        for col in range(row + 1, n):
            acc = acc - m[row][col] * xs[col]
        xs[row] = acc * m[row][row].invert()
    return xs


# -- lifting ------------------------------------------------------------------


def _scaled_system(
    potential: Potential, u: FracVec, order: Fraction
) -> list[LaurentPoly]:
    """Critical system in the frame at u, each equation divided by its
    leading T-power and truncated to the working order."""
    out = []
    for g in potential.critical_system():
        gh = g.change_frame(u)
        s = min(c.valuation() for c in gh.terms.values())
        out.append(
            LaurentPoly(
                gh.nvars,
                [(a, c.shift(-s).truncate(order)) for a, c in gh.terms.items()],
            )
        )
    return out


def newton_lift(
    potential: Potential,
    u,
    y0: tuple[complex, ...],
    order: Fraction | None = None,
) -> tuple[tuple[NovikovScalar, ...], Fraction | float]:
    """Lift an initial torus root at candidate u to a series solution of the
    critical system, accurate modulo T^order.  Returns the solution in the
    frame centered at u along with the final residual valuation."""
    cfg = get_config()
    e_order = Fraction(order) if order is not None else cfg.truncation_order
    if e_order is None or e_order <= 0:
        raise ValueError("newton_lift needs a positive finite order")
    uf = tuple(Fraction(x) for x in u)
    hs = _scaled_system(potential, uf, e_order)
    n = potential.polytope.dim
    theta = [[h.log_derivative(j) for j in range(n)] for h in hs]
    ys = tuple(NovikovScalar.monomial(0, c, trunc=e_order) for c in y0)
    # Solution series may have geometrically growing coefficients (small
    # T-adic radius), and float error in the residual scales with the size
    # of the products being cancelled.  A residual term only counts as
    # unresolved content when it clears a noise floor graded by the running
    # coefficient envelope of the approximants.
    rel = max(10 * cfg.eps_coeff, 1e-11)

    def noise_floor(point):
        merged = sorted((e, abs(c)) for y in point for e, c in y.terms)
        keys: list[Fraction] = []
        envs: list[float] = []
        best = 1.0
        for e, m in merged:
            if m > best:
                best = m
            if keys and keys[-1] == e:
                envs[-1] = best
            else:
                keys.append(e)
                envs.append(best)

        def floor(e) -> float:
            i = bisect.bisect_right(keys, e) - 1
            b = envs[i] if i >= 0 else 1.0
            return rel * b * b

        return floor

    def res_valuation(r: NovikovScalar, floor) -> Fraction | float:
        for e, c in r.terms:
            if abs(c) > floor(e):
                return e
        return INF

    def residuals(point):
        cache: dict[tuple[int, int], NovikovScalar] = {}
        return [h.evaluate(point, cache) for h in hs]

    res = residuals(ys)
    floor = noise_floor(ys)
    v0 = min((res_valuation(r, floor) for r in res), default=INF)
    if v0 == INF:
        return ys, INF
    if v0 <= 0:
        raise NoConvergence(
            f"initial root has residual of valuation {v0}; not a root"
        )
    budget = 8
    if e_order > v0:
        budget += 2 * math.ceil(math.log2(float(e_order / v0)))
    steps = 0
    vcur = v0
    stagnant = 0
    while vcur < e_order:
        if steps >= budget:
            raise NoConvergence(
                f"residual valuation stalled below {e_order} after {budget} steps"
            )
        # a step corrects nothing beyond twice the residual valuation, and
        # solving past that window only injects junk into the tail of ys
        w = min(2 * vcur, e_order)
        yw = tuple(y.truncate(w) for y in ys)
        cache: dict[tuple[int, int], NovikovScalar] = {}
        jac = [
            [theta[i][j].evaluate(yw, cache) for j in range(n)] for i in range(n)
        ]
        try:
            eps = lambda_solve(jac, [-r.truncate(w) for r in res])
        except SingularInitialJacobian as exc:
            raise NoConvergence(f"Jacobian became singular while lifting: {exc}")
        ys = tuple(
            y * (NovikovScalar(e.terms, e_order) + 1.0) for y, e in zip(ys, eps)
        )
        res = residuals(ys)
        floor = noise_floor(ys)
        steps += 1
        vnew = min((res_valuation(r, floor) for r in res), default=INF)
        stagnant = stagnant + 1 if vnew <= vcur else 0
        if stagnant >= 2:
            raise NoConvergence(
                f"residual valuation stuck at {vnew} after {steps} steps"
            )
        vcur = vnew
    final = min((res_valuation(r, floor) for r in res), default=INF)
    return ys, final


# -- assembled search ---------------------------------------------------------


@dataclass
class CriticalPoint:
    """One critical fiber of the potential.

    y_local holds the series solution in the frame centered at u, so the
    absolute coordinates are T^{u_i} times the stored scalars.
    """

    u: FracVec
    y_initial: tuple[complex, ...]
    y_local: tuple[NovikovScalar, ...] | None
    multiplicity: int | None
    nondegenerate: bool
    residual_valuation: Fraction | float | None = None

    def y_absolute(self) -> tuple[NovikovScalar, ...] | None:
        if self.y_local is None:
            return None
        return tuple(y.shift(x) for y, x in zip(self.y_local, self.u))

    def to_json_dict(self) -> dict:
        d = {
            "u": [format_fraction(x) for x in self.u],
            "y_initial": [[z.real, z.imag] for z in self.y_initial],
            "multiplicity": self.multiplicity,
            "nondegenerate": self.nondegenerate,
        }
        if self.y_local is not None:
            d["y_local"] = [y.to_json_dict() for y in self.y_local]
        if self.residual_valuation is not None:
            d["residual_valuation"] = (
                "inf"
                if self.residual_valuation == INF
                else format_fraction(self.residual_valuation)
            )
        return d


@dataclass
class EliminantRecord:
    u: FracVec
    coeffs: list[complex]  # monic, degree 0 upward, in the first frame variable

    def to_json_dict(self) -> dict:
        return {
            "u": [format_fraction(x) for x in self.u],
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }


@dataclass
class CriticalReport:
    points: list[CriticalPoint]
    cells: list[TropicalCell]
    eliminants: list[EliminantRecord] = field(default_factory=list)

    @property
    def candidate_points(self) -> list[FracVec]:
        seen: dict[FracVec, None] = {}
        for p in self.points:
            seen.setdefault(p.u)
        return list(seen)

    def multiplicity_total(self) -> int | None:
        total = 0
        for p in self.points:
            if p.multiplicity is None:
                return None
            total += p.multiplicity
        return total

    def to_json_dict(self) -> dict:
        return {
            "points": [p.to_json_dict() for p in self.points],
            "cells": [c.to_json_dict() for c in self.cells],
            "eliminants": [e.to_json_dict() for e in self.eliminants],
        }


def _monic(coeffs: list[complex]) -> list[complex]:
    lead = coeffs[-1]
    return [c / lead for c in coeffs]


# a double factor perturbed by coefficient noise eps splits its root into a
# pair about sqrt(eps) apart, far wider than any simple-root error
_SPLIT_TOL = 2e-6
_MERGE_DET_REL = 1e-5


def _merge_split_roots(
    roots: list[tuple[complex, ...]], polys
) -> list[tuple[tuple[complex, ...], int]]:
    """Collapse root pairs that are numerical shadows of one multiple root.

    Groups roots within ``_SPLIT_TOL`` coordinatewise and keeps the group
    centroid only when the logarithmic Jacobian is actually near-singular
    there; a tight but honestly nonsingular pair stays separate.
    """
    merged: list[tuple[tuple[complex, ...], int]] = []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        used[i] = True
        group = [r]
        for k in range(i + 1, len(roots)):
            if used[k]:
                continue
            s = roots[k]
            if all(
                abs(a - b) <= _SPLIT_TOL * max(1.0, abs(a))
                for a, b in zip(r, s)
            ):
                group.append(s)
                used[k] = True
        if len(group) == 1:
            merged.append((r, 1))
            continue
        centroid = tuple(sum(zs) / len(zs) for zs in zip(*group))
        jac = log_jacobian(polys, centroid)
        scale = 1.0
        for row in jac:
            scale *= max((abs(x) for x in row), default=0.0)
        if abs(_det(jac)) <= _MERGE_DET_REL * max(scale, 1e-30):
            merged.append((centroid, len(group)))
        else:
            merged.extend((g, 1) for g in group)
    return merged


def find_critical_points(
    potential: Potential, order: Fraction | None = None
) -> CriticalReport:
    """Full search: tropical candidates, initial roots, Newton lifts."""
    cfg = get_config()
    e_order = Fraction(order) if order is not None else cfg.truncation_order
    candidates, cells = tropical_candidates(potential)
    points: list[CriticalPoint] = []
    eliminants: list[EliminantRecord] = []
    extra_cells = list(cells)
    n = potential.polytope.dim
    for u in candidates:
        polys, _ = initial_system(potential, u)
        try:
            sol = solve_torus_system(polys, n)
        except PositiveDimensionalInitialLocus as exc:
            extra_cells.append(
                TropicalCell(
                    dimension=0,
                    sample_u=u,
                    note=f"positive-dimensional initial locus: {exc}",
                )
            )
            continue
        if sol.eliminant is not None and len(sol.eliminant) > 1:
            eliminants.append(EliminantRecord(u, _monic(sol.eliminant)))
        merged = _merge_split_roots(sol.roots, polys)
        for root, copies in merged:
            jac = log_jacobian(polys, root)
            det = _det(jac)
            scale = 1.0
            for row in jac:
                scale *= max((abs(x) for x in row), default=0.0)
            degenerate = (
                copies > 1 or abs(det) <= cfg.eps_degenerate * max(scale, 1e-30)
            )
            if degenerate:
                mult = None
                if n <= 2 and sol.eliminant is not None:
                    sharing = sum(
                        1
                        for s, _ in merged
                        if abs(s[0] - root[0]) <= 1e-3 * max(1.0, abs(root[0]))
                    )
                    mult = eliminant_multiplicity(sol.eliminant, root[0], sharing)
                points.append(
                    CriticalPoint(
                        u=u,
                        y_initial=root,
                        y_local=None,
                        multiplicity=mult,
                        nondegenerate=False,
                    )
                )
                continue
            ys, resval = newton_lift(potential, u, root, e_order)
            points.append(
                CriticalPoint(
                    u=u,
                    y_initial=root,
                    y_local=ys,
                    multiplicity=1,
                    nondegenerate=True,
                    residual_valuation=resval,
                )
            )
    points.sort(
        key=lambda p: (
            p.u,
            tuple((round(z.real, 9), round(z.imag, 9)) for z in p.y_initial),
        )
    )
    extra_cells.sort(key=lambda c: (c.dimension, c.sample_u))
    eliminants.sort(key=lambda e: e.u)
    return CriticalReport(points=points, cells=extra_cells, eliminants=eliminants)


def _det(m) -> complex:
    a = np.asarray(m, dtype=complex)
    if a.size == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(a))
