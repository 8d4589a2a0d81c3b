"""Laurent polynomials over Novikov scalars and potential assembly."""

import warnings
from fractions import Fraction

import pytest

from helpers import assert_scalar_close
from toriclg import (
    BulkCoefficients,
    Correction,
    LaurentPoly,
    NotInterior,
    NovikovScalar,
    OutsideDomain,
    build_potential,
    catalog,
    render_poly,
    z_monomial,
)
from toriclg.errors import CorrectionNotPositive

F = Fraction
S = NovikovScalar.monomial


def mono(exps, exp=0, coeff=1.0):
    return LaurentPoly.monomial(len(exps), exps, S(F(exp), coeff))


class TestRingOps:
    def test_add_collects_terms(self):
        f = mono((1, 0)) + mono((1, 0)) + mono((0, -1))
        terms = dict(f.sorted_terms())
        assert terms[(1, 0)] == S(0, 2.0)
        assert terms[(0, -1)] == S(0, 1.0)

    def test_zero_coefficients_vanish(self):
        f = mono((2, 1)) - mono((2, 1))
        assert f.is_zero()

    def test_mul_convolves_exponents(self):
        f = mono((1, 0)) * mono((-1, 1))
        assert dict(f.sorted_terms()) == {(0, 1): S(0, 1.0)}

    def test_mul_by_scalar_and_number(self):
        f = mono((1, 0)) * S(F(1, 2), 3.0)
        ((a, c),) = f.sorted_terms()
        assert a == (1, 0) and c == S(F(1, 2), 3.0)
        assert dict((2 * mono((1, 0))).sorted_terms()) == {(1, 0): S(0, 2.0)}

    def test_log_derivative_scales_by_exponent(self):
        f = mono((2, -3))
        assert dict(f.log_derivative(0).sorted_terms()) == {(2, -3): S(0, 2.0)}
        assert dict(f.log_derivative(1).sorted_terms()) == {(2, -3): S(0, -3.0)}
        assert mono((0, 5)).log_derivative(0).is_zero()

    def test_evaluate(self):
        f = mono((1, 1)) + mono((-1, 0))
        y1 = S(F(1, 2), 2.0)
        y2 = S(0, 3.0)
        v = f.evaluate((y1, y2))
        # 2 T^{1/2} * 3 + (1/2) T^{-1/2}
        assert v.coeff_at(F(1, 2)) == pytest.approx(6.0)
        assert v.coeff_at(F(-1, 2)) == pytest.approx(0.5)

    def test_evaluate_shares_power_cache(self):
        f = mono((3, 0)) + mono((2, 0))
        y = (S(F(1, 3), 2.0), S(0, 1.0))
        cache: dict = {}
        v1 = f.evaluate(y, cache)
        assert (0, 2) in cache and (0, 3) in cache
        assert v1 == f.evaluate(y)

    def test_change_frame_shifts_coefficients(self):
        f = mono((1, 0)) + mono((0, 1), exp=F(1, 2))
        g = f.change_frame((F(1, 4), F(1, 4)))
        terms = dict(g.sorted_terms())
        assert terms[(1, 0)] == S(F(1, 4), 1.0)
        assert terms[(0, 1)] == S(F(3, 4), 1.0)

    def test_valuation_at_u(self):
        f = mono((1, 0)) + mono((0, 1), exp=F(1, 2))
        assert f.valuation_at_u((F(1, 4), F(1, 4))) == F(1, 4)
        assert LaurentPoly.zero(2).valuation_at_u((0, 0)) == float("inf")


class TestZMonomial:
    def test_simplex_monomials(self):
        p = catalog("simplex", 2).polytope
        by_normal = {
            dict(z_monomial(p, j).sorted_terms()).popitem()[0]: j
            for j in range(3)
        }
        z0 = z_monomial(p, by_normal[(-1, -1)])
        ((a, c),) = z0.sorted_terms()
        assert a == (-1, -1) and c == S(1, 1.0)

    def test_valuation_matches_support_value(self):
        p = catalog("blowup1", F(2, 5)).polytope
        u = (F(7, 20), F(3, 10))
        for j in range(p.nfacets):
            assert z_monomial(p, j).valuation_at_u(u) == p.ell(j, u)


class TestBuildPotential:
    def test_simplex_base(self):
        pot = build_potential(catalog("simplex", 2).polytope)
        terms = dict(pot.poly.sorted_terms())
        assert terms[(1, 0)] == S(0, 1.0)
        assert terms[(0, 1)] == S(0, 1.0)
        assert terms[(-1, -1)] == S(1, 1.0)

    def test_bulk_rescales_coefficients(self):
        p = catalog("simplex", 2).polytope
        bulk = BulkCoefficients(
            (NovikovScalar.one(), S(0, 2.0), NovikovScalar.one())
        )
        pot = build_potential(p, bulk=bulk)
        facet_of = {f.normal: j for j, f in enumerate(p.facets)}
        terms = dict(pot.poly.sorted_terms())
        doubled = [a for a, c in terms.items() if c == S(0, 2.0)]
        assert len(doubled) == 1
        assert facet_of[doubled[0]] == 1

    def test_bulk_arity_checked(self):
        with pytest.raises(ValueError):
            build_potential(
                catalog("simplex", 2).polytope, bulk=BulkCoefficients.ones(2)
            )

    def test_correction_appends_higher_term(self):
        entry = catalog("hirzebruch", 2, F(1, 2))
        pot = build_potential(entry.polytope, corrections=entry.corrections)
        terms = dict(pot.poly.sorted_terms())
        # z4 = T^{1/2} y2^{-1}; the correction adds T * z4 on top of it
        assert_scalar_close(
            terms[(0, -1)],
            NovikovScalar([(F(1, 2), 1.0), (F(3, 2), 1.0)]),
        )

    def test_correction_must_increase_order(self):
        p = catalog("simplex", 2).polytope
        with pytest.raises(CorrectionNotPositive):
            build_potential(
                p,
                corrections=[Correction(F(0), (1, 0, 0))],
                assume_fano=True,
            )

    def test_nonfano_without_corrections_warns(self):
        p = catalog("hirzebruch", 2, F(1, 2)).polytope
        with pytest.warns(UserWarning, match="fano"):
            build_potential(p)

    def test_assume_fano_suppresses_warning(self):
        p = catalog("hirzebruch", 2, F(1, 2)).polytope
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_potential(p, assume_fano=True)

    def test_fano_entry_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_potential(catalog("blowup1", F(1, 3)).polytope)


class TestPotential:
    def test_critical_system_size(self):
        pot = build_potential(catalog("simplex", 3).polytope)
        sys = pot.critical_system()
        assert len(sys) == 3
        assert all(not f.is_zero() for f in sys)

    def test_evaluate_inside_domain(self):
        pot = build_potential(catalog("simplex", 1).polytope)
        y = S(F(1, 2), 1.0)
        # PO(T^{1/2}) = T^{1/2} + T * T^{-1/2} = 2 T^{1/2}
        assert pot.evaluate((y,)) == S(F(1, 2), 2.0)

    def test_evaluate_outside_domain_raises(self):
        pot = build_potential(catalog("simplex", 1).polytope)
        with pytest.raises(OutsideDomain):
            pot.evaluate((S(2, 1.0),))
        with pytest.raises(OutsideDomain):
            pot.evaluate((NovikovScalar.zero(),))

    def test_change_frame_needs_interior(self):
        pot = build_potential(catalog("simplex", 2).polytope)
        with pytest.raises(NotInterior):
            pot.change_frame((0, 0))

    def test_change_frame_valuations(self):
        pot = build_potential(catalog("simplex", 2).polytope)
        g = pot.change_frame((F(1, 3), F(1, 3)))
        # in the fiber frame at the barycenter all three terms sit at T^{1/3}
        assert all(c.valuation() == F(1, 3) for _, c in g.sorted_terms())


class TestRendering:
    def test_render_poly(self):
        entry = catalog("hirzebruch", 2, F(1, 2))
        pot = build_potential(entry.polytope, corrections=entry.corrections)
        assert (
            render_poly(pot.poly)
            == "y1 + y2 + T^0.5 (1+T^1) y2^-1 + T^2 y1^-1 y2^-2"
        )

    def test_render_uses_varname(self):
        f = mono((1, -2))
        assert render_poly(f, varname="w") == "w1 w2^-2"
