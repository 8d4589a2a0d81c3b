"""Leading term equations and the balancing test for torus fibers.

At an interior point u the support values ell_j(u) sort into levels
S_1 < S_2 < ... .  The normals of the first levels span larger and larger
sublattices; K is the first level at which they span everything.  An
integral basis adapted to this filtration (each initial segment is a
basis of the saturation of the corresponding normal span) turns the
level-wise leading parts of the potential into honest Laurent polynomials
in new variables w_1..w_n, introduced d(l) at a time.  The leading term
system asks each level's part to be critical in its own new variables;
the fiber at u is strongly balanced (bulk-balanced for nontrivial bulk
coefficients) exactly when that cascade has a solution with every
coordinate nonzero.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ._intlinalg import det_int, extend_basis_in_lattice, frac_solve, saturation_basis
from .config import get_config
from .errors import (
    IntegralityFailure,
    LevelUnderdetermined,
    NotInterior,
    PositiveDimensionalInitialLocus,
)
from .laurent import Potential
from .novikov import format_fraction
from .polysolve import CPoly, normalize, solve_torus_system, univariate_roots

FracVec = tuple[Fraction, ...]


@dataclass(frozen=True)
class Level:
    """Facets sharing one support value at the base point."""

    value: Fraction
    facet_indices: tuple[int, ...]
    new_rank: int  # rank gained over the previous levels

    def to_json_dict(self) -> dict:
        return {
            "value": format_fraction(self.value),
            "facets": list(self.facet_indices),
            "new_rank": self.new_rank,
        }


@dataclass(frozen=True)
class AdaptedFrame:
    """Filtration data and the adapted lattice basis at a point."""

    u: FracVec
    levels: tuple[Level, ...]
    depth: int  # number of levels K needed to span the whole lattice
    basis: tuple[tuple[int, ...], ...]  # rows e_1..e_n, det +-1
    inverse: tuple[tuple[int, ...], ...]  # matrix inverse of the basis rows

    @property
    def block_sizes(self) -> list[int]:
        return [lv.new_rank for lv in self.levels[: self.depth]]

    def blocks(self) -> list[range]:
        out = []
        start = 0
        for lv in self.levels[: self.depth]:
            out.append(range(start, start + lv.new_rank))
            start += lv.new_rank
        return out

    def coords(self, v: tuple[int, ...]) -> tuple[int, ...]:
        """Coordinates of an integer vector in the adapted basis."""
        n = len(self.basis)
        return tuple(
            sum(v[k] * self.inverse[k][i] for k in range(n)) for i in range(n)
        )

    def w_to_y(self, w: tuple[complex, ...]) -> tuple[complex, ...]:
        """Map adapted torus coordinates back to the standard frame."""
        n = len(self.basis)
        out = []
        for k in range(n):
            val = 1 + 0j
            for i in range(n):
                e = self.inverse[k][i]
                if e:
                    val *= w[i] ** e
            out.append(val)
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {
            "u": [format_fraction(x) for x in self.u],
            "levels": [lv.to_json_dict() for lv in self.levels],
            "depth": self.depth,
            "basis": [list(row) for row in self.basis],
        }


def order_levels(potential: Potential, u) -> list[tuple[Fraction, list[int]]]:
    """Distinct support values at u in increasing order with facet indices."""
    p = potential.polytope
    uf = tuple(Fraction(x) for x in u)
    if not p.interior_contains(uf):
        raise NotInterior(f"{u} is not an interior point")
    groups: dict[Fraction, list[int]] = {}
    for j, f in enumerate(p.facets):
        groups.setdefault(f.ell(uf), []).append(j)
    return sorted(groups.items())


def adapted_frame(potential: Potential, u) -> AdaptedFrame:
    p = potential.polytope
    uf = tuple(Fraction(x) for x in u)
    n = p.dim
    grouped = order_levels(potential, uf)
    levels: list[Level] = []
    basis: list[tuple[int, ...]] = []
    cumulative: list[tuple[int, ...]] = []
    depth = 0
    for value, idxs in grouped:
        cumulative.extend(p.facets[j].normal for j in idxs)
        sat = saturation_basis(cumulative, n)
        gained = len(sat) - len(basis)
        levels.append(Level(value, tuple(idxs), gained))
        if gained > 0:
            basis = basis + extend_basis_in_lattice(basis, sat)
        if len(basis) == n and depth == 0:
            depth = len(levels)
    if depth == 0:
        raise IntegralityFailure("facet normals do not span the lattice")
    d = det_int(basis)
    if d not in (1, -1):
        raise IntegralityFailure(f"adapted basis has determinant {d}")
    inverse = _int_inverse(basis)
    return AdaptedFrame(
        u=uf,
        levels=tuple(levels),
        depth=depth,
        basis=tuple(basis),
        inverse=inverse,
    )


def _int_inverse(rows: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    n = len(rows)
    cols = []
    for i in range(n):
        rhs = [Fraction(1 if k == i else 0) for k in range(n)]
        sol = frac_solve([list(map(Fraction, r)) for r in rows], rhs)
        if sol is None:
            raise IntegralityFailure("adapted basis is singular")
        part, _ = sol
        cols.append(part)
    out = []
    for k in range(n):
        row = []
        for i in range(n):
            x = cols[i][k]
            if x.denominator != 1:
                raise IntegralityFailure("adapted basis inverse is not integral")
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def leading_term_system(
    potential: Potential, u
) -> tuple[AdaptedFrame, list[CPoly]]:
    """Level-wise leading parts of the potential in adapted coordinates.

    Returns one Laurent polynomial per level up to the spanning depth,
    written in the w variables (full-length exponent vectors, nonzero only
    in the coordinates already introduced).  Correction terms whose
    valuation at u reaches into these levels are not supported and are
    ignored with a warning.
    """
    frame = adapted_frame(potential, u)
    p = potential.polytope
    leading = potential.bulk.leading()
    polys: list[CPoly] = []
    introduced = 0
    for lv in frame.levels[: frame.depth]:
        introduced += lv.new_rank
        poly: CPoly = {}
        for j in lv.facet_indices:
            c = frame.coords(p.facets[j].normal)
            if any(c[i] != 0 for i in range(introduced, p.dim)):
                raise IntegralityFailure(
                    f"facet {j} leaves the span of its level"
                )
            poly[c] = poly.get(c, 0j) + leading[j]
        polys.append(poly)
    s_top = frame.levels[frame.depth - 1].value
    for corr in potential.corrections:
        val = corr.extra_t + sum(
            k * p.facets[j].ell(frame.u)
            for j, k in enumerate(corr.z_exponents)
        )
        if val <= s_top:
            warnings.warn(
                "correction term reaches the leading levels at this point "
                "and is ignored by the leading term system",
                stacklevel=2,
            )
    return frame, polys


@dataclass
class LTEBranch:
    """One branch of the cascade: assigned values with None marking a
    variable that stayed free."""

    values: list
    note: str = ""


@dataclass
class LTEResult:
    frame: AdaptedFrame
    level_polys: list[CPoly]
    witnesses_w: list[tuple] = field(default_factory=list)
    free_masks: list[tuple[bool, ...]] = field(default_factory=list)
    status: str = "unsolvable"  # solvable | unsolvable | underdetermined

    def witnesses_y(self) -> list[tuple[complex, ...]]:
        """Witness points in the standard torus coordinates, free
        variables pinned to 1."""
        out = []
        for w in self.witnesses_w:
            filled = tuple(1 + 0j if x is None else x for x in w)
            out.append(self.frame.w_to_y(filled))
        return out

    def to_json_dict(self) -> dict:
        return {
            "frame": self.frame.to_json_dict(),
            "status": self.status,
            "witnesses_w": [
                [None if x is None else [x.real, x.imag] for x in w]
                for w in self.witnesses_w
            ],
            "witnesses_y": [
                [[z.real, z.imag] for z in w] for w in self.witnesses_y()
            ],
        }


def _theta(poly: CPoly, r: int) -> CPoly:
    out: CPoly = {}
    for a, c in poly.items():
        if a[r]:
            out[a] = out.get(a, 0j) + c * a[r]
    return out


def _substitute(
    poly: CPoly, values: list, block: range
) -> tuple[CPoly | None, bool]:
    """Replace assigned variables by their values, keeping block variables.

    Returns (reduced poly in block coordinates, hit_free) where hit_free
    notes a nonzero exponent on a variable that stayed free earlier.
    """
    out: CPoly = {}
    mag: dict[tuple[int, ...], float] = {}
    for a, c in poly.items():
        term = c
        for i, e in enumerate(a):
            if i in block or e == 0:
                continue
            v = values[i]
            if v is None:
                return None, True
            term *= v ** e
        key = tuple(a[i] for i in block)
        out[key] = out.get(key, 0j) + term
        mag[key] = mag.get(key, 0.0) + abs(term)
    # coefficients that cancel up to the roundoff of their summands are zero
    return {k: c for k, c in out.items() if abs(c) > 1e-9 * mag[k]}, False


def solve_lte(potential: Potential, u) -> LTEResult:
    """Run the level cascade and collect torus witnesses."""
    frame, polys = leading_term_system(potential, u)
    n = potential.polytope.dim
    blocks = frame.blocks()
    branches: list[LTEBranch] = [LTEBranch(values=[None] * n)]
    underdetermined = False
    for poly, block in zip(polys, blocks):
        eqs = [_theta(poly, r) for r in block]
        next_branches: list[LTEBranch] = []
        for br in branches:
            reduced: list[CPoly] = []
            hit_free = False
            for q in eqs:
                rq, free = _substitute(q, br.values, block)
                if free:
                    hit_free = True
                    break
                rq = normalize(rq)
                if rq:
                    reduced.append(rq)
            if hit_free:
                underdetermined = True
                continue
            if not reduced:
                next_branches.append(br)  # vacuous level: block vars stay free
                continue
            if any(len(q) == 1 for q in reduced):
                continue  # a surviving monomial equation kills the branch
            if len(block) == 1:
                roots = univariate_roots({a[0]: c for a, c in reduced[0].items()})
                roots = [
                    r
                    for r in roots
                    if all(
                        abs(sum(c * r ** a[0] for a, c in q.items())) <= 1e-8
                        for q in reduced[1:]
                    )
                ]
                for r in roots:
                    vals = br.values[:]
                    vals[block[0]] = r
                    next_branches.append(LTEBranch(values=vals))
                continue
            if len(reduced) < len(block):
                underdetermined = True
                continue
            try:
                sol = solve_torus_system(reduced, len(block))
            except PositiveDimensionalInitialLocus:
                underdetermined = True
                continue
            for root in sol.roots:
                vals = br.values[:]
                for i, r in zip(block, root):
                    vals[i] = r
                next_branches.append(LTEBranch(values=vals))
        branches = next_branches
    result = LTEResult(frame=frame, level_polys=polys)
    for br in branches:
        result.witnesses_w.append(tuple(br.values))
        result.free_masks.append(tuple(v is None for v in br.values))
    if result.witnesses_w:
        result.status = "solvable"
    elif underdetermined:
        result.status = "underdetermined"
    else:
        result.status = "unsolvable"
    return result


def is_strongly_balanced(potential: Potential, u) -> bool:
    """True when the leading term system has a torus solution at u.  With
    nontrivial bulk coefficients this is the bulk-balancing test."""
    res = solve_lte(potential, u)
    if res.status == "underdetermined":
        raise LevelUnderdetermined(
            f"cascade at {tuple(u)} leaves equations with free variables"
        )
    return res.status == "solvable"


def balanced_positions(
    potential: Potential,
    grid: int,
    extra: list | None = None,
    jobs: int = 1,
) -> list[tuple[FracVec, str]]:
    """Scan an interior grid (plus optional extra points) and classify each
    point as balanced, unbalanced, or unknown."""
    p = potential.polytope
    box = p.bounding_box()
    points: list[FracVec] = []
    axes = [
        [lo + Fraction(k, grid) * (hi - lo) for k in range(1, grid)]
        for lo, hi in box
    ]
    for u in itertools.product(*axes):
        if p.interior_contains(u):
            points.append(tuple(u))
    for u in extra or []:
        uf = tuple(Fraction(x) for x in u)
        if p.interior_contains(uf) and uf not in points:
            points.append(uf)
    points.sort()

    def classify(u: FracVec) -> tuple[FracVec, str]:
        try:
            ok = is_strongly_balanced(potential, u)
            return u, "balanced" if ok else "unbalanced"
        except LevelUnderdetermined:
            return u, "unknown"

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(classify, points))
    return [classify(u) for u in points]
