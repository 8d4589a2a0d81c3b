"""Isolated-root solving for small complex Laurent polynomial systems.

Systems arrive as dictionaries mapping integer exponent vectors (possibly
negative) to complex coefficients.  Solutions are sought in the algebraic
torus, i.e. every coordinate nonzero, so each polynomial may be multiplied
by a monomial: clearing denominators and stripping monomial content are
exact symmetries of the problem.

Strategy: eliminate the last variable with resultants of the pivot
equation against the others (Sylvester determinants interpolated from
tensor grids of roots of unity), recurse, back-substitute through
companion-matrix root finding, then polish every candidate with a
multivariate Newton step on the original square system and discard
candidates whose residual stays large.  Identically vanishing resultants
signal a positive-dimensional solution set and abort the search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_config
from .errors import (
    DimensionUnsupported,
    EliminationFailed,
    PositiveDimensionalInitialLocus,
)

CPoly = dict[tuple[int, ...], complex]

_ZERO_REL = 1e-8  # relative floor under which a polynomial counts as zero
_EVAL_REL = 1e-6  # relative residual for accepting a root during filtering


def normalize(p: CPoly) -> CPoly:
    """Strip monomial content (valid over the torus) and scale the largest
    coefficient to 1."""
    if not p:
        return {}
    scale = max(abs(c) for c in p.values())
    if scale == 0.0:
        return {}
    nvars = len(next(iter(p)))
    mins = [min(a[i] for a in p) for i in range(nvars)]
    return {
        tuple(x - m for x, m in zip(a, mins)): c / scale for a, c in p.items()
    }


def degree_in(p: CPoly, i: int) -> int:
    return max((a[i] for a in p), default=0)


def eval_cpoly(p: CPoly, point: tuple[complex, ...]) -> complex:
    total = 0j
    for a, c in p.items():
        term = c
        for x, e in zip(point, a):
            if e:
                term *= x ** e
        total += term
    return total


def eval_magnitude(p: CPoly, point: tuple[complex, ...]) -> float:
    """Sum of term magnitudes: the natural scale for residual tests."""
    total = 0.0
    for a, c in p.items():
        term = abs(c)
        for x, e in zip(point, a):
            if e:
                term *= abs(x) ** e
        total += term
    return total


def partial(p: CPoly, i: int) -> CPoly:
    out: CPoly = {}
    for a, c in p.items():
        if a[i] == 0:
            continue
        b = list(a)
        b[i] -= 1
        out[tuple(b)] = out.get(tuple(b), 0j) + c * a[i]
    return out


def substitute_last(p: CPoly, values: tuple[complex, ...]) -> dict[int, complex]:
    """Fix all variables except the last; return a univariate dict."""
    out: dict[int, complex] = {}
    for a, c in p.items():
        term = c
        for x, e in zip(values, a[:-1]):
            if e:
                term *= x ** e
        out[a[-1]] = out.get(a[-1], 0j) + term
    return out


def drop_last_var(p: CPoly) -> CPoly:
    return {a[:-1]: c for a, c in p.items()}


# -- univariate layer --------------------------------------------------------


def univariate_roots(p: dict[int, complex]) -> list[complex]:
    """Nonzero roots via the companion matrix, monomial content removed."""
    if not p:
        raise PositiveDimensionalInitialLocus("zero univariate polynomial")
    lo = min(p)
    hi = max(p)
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    for e, c in p.items():
        coeffs[hi - e] = c  # highest degree first for np.roots
    scale = np.abs(coeffs).max()
    coeffs = coeffs / scale
    nz = np.nonzero(np.abs(coeffs) > _ZERO_REL)[0]
    if len(nz) == 0:
        raise PositiveDimensionalInitialLocus("univariate polynomial is ~0")
    coeffs = coeffs[nz[0]: nz[-1] + 1]
    if len(coeffs) == 1:
        return []
    roots = np.roots(coeffs)
    return [complex(r) for r in roots if abs(r) > 1e-10]


def cluster_roots(roots: list[complex], tol: float = 1e-3) -> list[tuple[complex, int]]:
    """Greedy clustering of numerically coincident roots; returns
    (centroid, multiplicity) pairs."""
    remaining = list(roots)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop()
        group = [seed]
        changed = True
        while changed:
            changed = False
            for r in remaining[:]:
                if any(abs(r - g) <= tol * max(1.0, abs(g)) for g in group):
                    group.append(r)
                    remaining.remove(r)
                    changed = True
        centroid = sum(group) / len(group)
        clusters.append((centroid, len(group)))
    clusters.sort(key=lambda rc: (round(rc[0].real, 9), round(rc[0].imag, 9)))
    return clusters


# -- resultants ----------------------------------------------------------------


def _sylvester_det(pc: list[complex], qc: list[complex]) -> complex:
    """Determinant of the Sylvester matrix for coefficient lists given from
    degree 0 upward with nominal degrees len-1."""
    dp = len(pc) - 1
    dq = len(qc) - 1
    size = dp + dq
    if size == 0:
        return 1.0 + 0j
    m = np.zeros((size, size), dtype=complex)
    for r in range(dq):
        for k, c in enumerate(pc):
            m[r, r + dp - k] = c
    for r in range(dp):
        for k, c in enumerate(qc):
            m[dq + r, r + dq - k] = c
    return complex(np.linalg.det(m))


def resultant_last(p: CPoly, q: CPoly, nvars: int) -> CPoly:
    """Resultant eliminating the last variable, as a polynomial in the
    remaining nvars-1 variables, found by evaluation on roots-of-unity
    grids and inverse FFT."""
    dp = degree_in(p, nvars - 1)
    dq = degree_in(q, nvars - 1)
    if dp == 0 or dq == 0:
        raise EliminationFailed("pivot does not involve the variable")
    rest = nvars - 1
    bounds = [
        dq * degree_in(p, i) + dp * degree_in(q, i) for i in range(rest)
    ]
    sizes = [b + 1 for b in bounds]
    # ifft inverts samples taken on exp(-2 pi i k / s); the conjugate grid
    # would silently reverse every exponent
    grids = [np.exp(-2j * np.pi * np.arange(s) / s) for s in sizes]
    values = np.zeros(sizes, dtype=complex)
    for idx in np.ndindex(*sizes):
        point = tuple(grids[i][idx[i]] for i in range(rest))
        pc = [0j] * (dp + 1)
        for a, c in p.items():
            term = c
            for i in range(rest):
                if a[i]:
                    term *= point[i] ** a[i]
            pc[a[-1]] += term
        qc = [0j] * (dq + 1)
        for a, c in q.items():
            term = c
            for i in range(rest):
                if a[i]:
                    term *= point[i] ** a[i]
            qc[a[-1]] += term
        values[idx] = _sylvester_det(pc, qc)
    if np.abs(values).max() < 1e-10:
        return {}  # resultant vanishes identically
    coeffs = values
    for axis in range(rest):
        coeffs = np.fft.ifft(coeffs, axis=axis)
    peak = np.abs(coeffs).max()
    out: CPoly = {}
    for idx in np.ndindex(*sizes):
        c = complex(coeffs[idx])
        if abs(c) > _ZERO_REL * peak:
            out[tuple(idx)] = c
    return out


# -- system layer ---------------------------------------------------------------


@dataclass
class SystemSolution:
    roots: list[tuple[complex, ...]]
    eliminant: list[complex] | None  # univariate in variable 0, degree 0 upward


def _roots_satisfying_all(
    unis: list[dict[int, complex]],
) -> list[complex]:
    """Common nonzero roots of a family of univariate polynomials."""
    nonzero = []
    for u in unis:
        scale = max((abs(c) for c in u.values()), default=0.0)
        if scale > _ZERO_REL:
            nonzero.append({e: c / scale for e, c in u.items()})
    if not nonzero:
        raise PositiveDimensionalInitialLocus(
            "all equations vanish identically on this branch"
        )
    nonzero.sort(key=lambda u: max(u) - min(u))
    if max(nonzero[0]) - min(nonzero[0]) == 0:
        return []  # a nonzero constant equation: no solutions
    cands = univariate_roots(nonzero[0])
    out = []
    for r in cands:
        ok = True
        for u in nonzero[1:]:
            val = sum(c * r ** e for e, c in u.items())
            mag = sum(abs(c) * abs(r) ** e for e, c in u.items())
            if abs(val) > _EVAL_REL * max(mag, 1e-30):
                ok = False
                break
        if ok:
            out.append(r)
    return out


def _solve_recursive(
    polys: list[CPoly], nvars: int
) -> tuple[list[tuple[complex, ...]], list[complex] | None]:
    polys = [normalize(p) for p in polys if p]
    if not polys:
        raise PositiveDimensionalInitialLocus("empty system")
    if any(not p for p in polys):
        raise PositiveDimensionalInitialLocus("identically zero equation")
    if nvars == 1:
        unis = [{a[0]: c for a, c in p.items()} for p in polys]
        roots = _roots_satisfying_all(unis)
        elim = None
        if len(unis) == 1:
            hi = max(unis[0])
            elim = [unis[0].get(e, 0j) for e in range(hi + 1)]
        return [(r,) for r in roots], elim
    involving = [p for p in polys if degree_in(p, nvars - 1) > 0]
    passing = [drop_last_var(p) for p in polys if degree_in(p, nvars - 1) == 0]
    if not involving:
        raise PositiveDimensionalInitialLocus(
            f"no equation involves variable {nvars}"
        )
    if len(involving) == 1 and not passing:
        raise PositiveDimensionalInitialLocus(
            "fewer independent equations than variables"
        )
    if len(involving) == 1:
        reduced = passing
    else:
        pivot = min(involving, key=lambda p: degree_in(p, nvars - 1))
        others = [p for p in involving if p is not pivot]
        reduced = list(passing)
        for q in others:
            res = resultant_last(pivot, q, nvars)
            if not res:
                raise PositiveDimensionalInitialLocus(
                    "vanishing resultant: common positive-dimensional component"
                )
            reduced.append(res)
    partials, elim = _solve_recursive(reduced, nvars - 1)
    solutions: list[tuple[complex, ...]] = []
    for part in partials:
        unis = [substitute_last(p, part) for p in involving]
        try:
            roots = _roots_satisfying_all(unis)
        except PositiveDimensionalInitialLocus:
            raise
        solutions.extend(part + (r,) for r in roots)
    return solutions, elim


def _newton_polish(
    polys: list[CPoly], point: tuple[complex, ...], iterations: int = 25
) -> tuple[complex, ...]:
    n = len(point)
    jac = [[partial(p, j) for j in range(n)] for p in polys]
    x = np.array(point, dtype=complex)
    for _ in range(iterations):
        f = np.array([eval_cpoly(p, tuple(x)) for p in polys])
        scale = max(eval_magnitude(p, tuple(x)) for p in polys)
        if np.abs(f).max() < 1e-15 * max(scale, 1e-30):
            break
        j = np.array(
            [[eval_cpoly(jac[r][c], tuple(x)) for c in range(n)] for r in range(len(polys))]
        )
        try:
            if len(polys) == n:
                step = np.linalg.solve(j, f)
            else:
                step, *_ = np.linalg.lstsq(j, f, rcond=None)
        except np.linalg.LinAlgError:
            break
        x = x - step
        if not np.all(np.isfinite(x)):
            return point
    return tuple(complex(v) for v in x)


def solve_torus_system(polys: list[CPoly], nvars: int) -> SystemSolution:
    """All isolated torus solutions of a system of Laurent polynomials.

    Raises PositiveDimensionalInitialLocus when a positive-dimensional
    component is detected, EliminationFailed when the resultant cascade
    cannot proceed, DimensionUnsupported above four variables.
    """
    if nvars > 4:
        raise DimensionUnsupported(
            f"torus system solving handles at most 4 variables, got {nvars}"
        )
    cleared = [normalize(p) for p in polys]
    if any(not p for p in cleared):
        raise PositiveDimensionalInitialLocus("identically zero equation")
    for p in cleared:
        if len(p) == 1:
            return SystemSolution([], None)  # single monomial: no torus zeros
    raw, elim = _solve_recursive(cleared, nvars)
    eps = get_config().eps_sol
    polished: list[tuple[complex, ...]] = []
    for cand in raw:
        if any(abs(x) < 1e-10 for x in cand):
            continue
        point = _newton_polish(cleared, cand)
        if any(abs(x) < 1e-10 for x in point) or not all(
            abs(eval_cpoly(p, point))
            <= _EVAL_REL * max(eval_magnitude(p, point), 1e-30)
            for p in cleared
        ):
            continue
        if not any(
            all(abs(a - b) <= eps * max(1.0, abs(b)) for a, b in zip(point, seen))
            for seen in polished
        ):
            polished.append(point)
    polished.sort(key=lambda pt: tuple((round(x.real, 9), round(x.imag, 9)) for x in pt))
    return SystemSolution(polished, elim)


def eliminant_multiplicity(
    elim: list[complex], x0: complex, sharing: int
) -> int | None:
    """Cluster multiplicity of x0 among the eliminant roots, split across the
    `sharing` solutions lying over the same first coordinate.  None when the
    count does not divide evenly."""
    roots = univariate_roots({e: c for e, c in enumerate(elim)})
    clusters = cluster_roots(roots)
    cluster = next(
        (c for c in clusters if abs(c[0] - x0) <= 1e-3 * max(1.0, abs(x0))),
        None,
    )
    if cluster is None:
        return None
    mult, rem = divmod(cluster[1], max(sharing, 1))
    return mult if rem == 0 else None


def log_jacobian(polys: list[CPoly], point: tuple[complex, ...]) -> np.ndarray:
    """Matrix of logarithmic derivatives  x_j d p_i / d x_j  at a torus point.
    Works directly on Laurent exponents."""
    n = len(point)
    m = np.zeros((len(polys), n), dtype=complex)
    for r, p in enumerate(polys):
        for a, c in p.items():
            term = c
            for x, e in zip(point, a):
                if e:
                    term *= x ** e
            for j in range(n):
                if a[j]:
                    m[r, j] += a[j] * term
    return m
