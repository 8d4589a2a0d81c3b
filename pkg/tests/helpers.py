"""Shared test utilities: random polytopes and series comparisons."""

import random
from fractions import Fraction

from toriclg import MomentPolytope, NovikovScalar

_SIDES = [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)]
_CUTS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]


def _chop_corner(p: MomentPolytope, rng: random.Random) -> MomentPolytope | None:
    """Cut one vertex with the sum of its two facet normals.

    The new facet is ell_a + ell_b - eps with eps below the value of
    ell_a + ell_b at every other vertex, so only the chosen corner goes
    away; the corner determinants it creates equal the old one.
    """
    verts = p.vertices()
    v = rng.choice(verts)
    a, b = v.tight
    fa, fb = p.facets[a], p.facets[b]
    room = min(
        fa.ell(w.point) + fb.ell(w.point) for w in verts if w.tight != v.tight
    )
    if room <= 0:
        return None
    eps = room * rng.choice(_CUTS)
    normal = tuple(x + y for x, y in zip(fa.normal, fb.normal))
    rows = [(f.normal, f.constant) for f in p.facets]
    rows.append((normal, fa.constant + fb.constant - eps))
    return MomentPolytope.from_inequalities(rows)


def random_delzant_polytope(rng: random.Random, max_chops: int = 3) -> MomentPolytope:
    """Random smooth 2-d moment polytope: a box or simplex, corners chopped."""
    if rng.random() < 0.5:
        a, b = rng.choice(_SIDES), rng.choice(_SIDES)
        rows = [
            ((1, 0), Fraction(0)),
            ((0, 1), Fraction(0)),
            ((-1, 0), a),
            ((0, -1), b),
        ]
    else:
        rows = [
            ((1, 0), Fraction(0)),
            ((0, 1), Fraction(0)),
            ((-1, -1), rng.choice(_SIDES)),
        ]
    p = MomentPolytope.from_inequalities(rows)
    for _ in range(rng.randrange(max_chops + 1)):
        q = _chop_corner(p, rng)
        if q is not None and q.validate().ok:
            p = q
    return p


def random_scalar(rng: random.Random, nterms: int = 4, den: int = 6) -> NovikovScalar:
    """Exact scalar with small rational exponents and unit-scale coefficients."""
    terms = []
    for _ in range(rng.randint(1, nterms)):
        e = Fraction(rng.randint(0, 4 * den), rng.randint(1, den))
        c = complex(rng.uniform(0.2, 2.0) * rng.choice([-1, 1]),
                    rng.uniform(0.2, 2.0) * rng.choice([-1, 1]))
        terms.append((e, c))
    return NovikovScalar(terms)


def scalars_close(x: NovikovScalar, y: NovikovScalar, tol: float = 1e-9) -> bool:
    d = x - y
    return all(abs(c) <= tol for _, c in d.terms)


def assert_scalar_close(x: NovikovScalar, y: NovikovScalar, tol: float = 1e-9):
    d = x - y
    bad = [(e, c) for e, c in d.terms if abs(c) > tol]
    assert not bad, f"series differ by {bad}"
