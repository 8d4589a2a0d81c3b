"""Hessians, Z-values, residue pairing, trace identity, duality regression."""

import cmath
from fractions import Fraction

import pytest

from toriclg import (
    BulkCoefficients,
    MomentPolytope,
    NovikovScalar,
    build_potential,
    catalog,
    cpn_duality,
    find_critical_points,
    hessian_matrix,
    morse_count_check,
    novikov_det,
    residue_report,
    z_exactness,
    z_valuation_consistency,
    z_value,
)

F = Fraction


def potential_of(name, *params):
    entry = catalog(name, *params)
    return build_potential(entry.polytope, corrections=entry.corrections)


def point_with_root(rep, z0, tol=1e-8):
    return next(
        p for p in rep.points if abs(p.y_initial[0] - z0) <= tol
    )


class TestHessian:
    def test_cp1_value(self):
        pot = potential_of("simplex", 1)
        rep = find_critical_points(pot)
        pt = point_with_root(rep, 1.0)
        ((h,),) = [hessian_matrix(pot, pt.u, pt.y_local)[0]]
        assert h.valuation() == F(1, 2)
        assert h.coeff_at(F(1, 2)) == pytest.approx(2.0)

    @pytest.mark.parametrize("n", [2, 3])
    def test_cpn_closed_form(self, n):
        pot = potential_of("simplex", n)
        rep = find_critical_points(pot)
        for pt in rep.points:
            zeta = pt.y_initial[0]
            h = hessian_matrix(pot, pt.u, pt.y_local)
            for i in range(n):
                for j in range(n):
                    expected = zeta * (2.0 if i == j else 1.0)
                    entry = h[i][j]
                    assert entry.valuation() == F(1, n + 1)
                    assert entry.coeff_at(F(1, n + 1)) == pytest.approx(
                        expected, abs=1e-9
                    )

    def test_symmetry_is_term_exact(self):
        for name, params in [
            ("blowup1", (F(2, 5),)),
            ("blowup2", (F(1, 2), F(1, 5))),
            ("hirzebruch", (2, F(1, 2))),
        ]:
            pot = potential_of(name, *params)
            rep = find_critical_points(pot)
            for pt in rep.points:
                if pt.y_local is None:
                    continue
                h = hessian_matrix(pot, pt.u, pt.y_local)
                n = len(h)
                for i in range(n):
                    for j in range(i + 1, n):
                        assert h[i][j] == h[j][i]


class TestDeterminant:
    def test_two_by_two(self):
        a = NovikovScalar.monomial(0, 2.0)
        b = NovikovScalar.monomial(1, 1.0)
        det = novikov_det([[a, b], [b, a]])
        assert det.coeff_at(0) == pytest.approx(4.0)
        assert det.coeff_at(2) == pytest.approx(-1.0)

    def test_three_by_three_permutation_signs(self):
        one = NovikovScalar.one()
        zero = NovikovScalar.zero()
        # permutation matrix of a 3-cycle has determinant +1
        m = [[zero, one, zero], [zero, zero, one], [one, zero, zero]]
        assert novikov_det(m).coeff_at(0) == pytest.approx(1.0)

    def test_empty_matrix(self):
        assert novikov_det([]).coeff_at(0) == pytest.approx(1.0)


class TestZValues:
    def test_cp2(self):
        pot = potential_of("simplex", 2)
        rep = find_critical_points(pot)
        for pt in rep.points:
            z = z_value(pot, pt)
            zeta = pt.y_initial[0]
            assert z.valuation() == F(2, 3)
            assert z.coeff_at(F(2, 3)) == pytest.approx(3 * zeta ** 2, abs=1e-9)

    def test_hirzebruch_determinants(self):
        pot = potential_of("hirzebruch", 2, F(1, 2))
        rep = find_critical_points(pot)
        assert len(rep.points) == 4
        coeffs = []
        for pt in rep.points:
            z = z_value(pot, pt)
            assert z.valuation() == F(1)
            c = z.coeff_at(F(1))
            assert abs(abs(c) - 4.0) < 1e-9
            assert abs(c.imag) < 1e-9
            coeffs.append(round(c.real, 6))
        assert sorted(coeffs) == [-4.0, -4.0, 4.0, 4.0]

    def test_monotone_blowup_closed_form(self):
        pot = potential_of("blowup1", F(1, 3))
        rep = find_critical_points(pot)
        assert len(rep.points) == 4
        for pt in rep.points:
            z0 = pt.y_initial[0]
            expected = (4 - z0 ** 3) / z0
            z = z_value(pot, pt)
            assert z.valuation() == F(2, 3)
            assert abs(z.coeff_at(F(2, 3)) - expected) < 1e-9 * max(
                1.0, abs(expected)
            )

    def test_valuation_consistency_across_catalog(self):
        for name, params in [
            ("simplex", (2,)),
            ("simplex", (3,)),
            ("blowup1", (F(2, 5),)),
            ("blowup1", (F(1, 5),)),
            ("blowup2", (F(1, 2), F(1, 5))),
            ("hirzebruch", (2, F(1, 2))),
        ]:
            pot = potential_of(name, *params)
            rep = find_critical_points(pot)
            for pt in rep.points:
                if pt.y_local is None:
                    continue
                assert z_valuation_consistency(pot, pt)


class TestResidueReport:
    def test_cpn_pairing_closed_form(self):
        n = 3
        pot = potential_of("simplex", n)
        rep = find_critical_points(pot)
        res = residue_report(pot, rep)
        for pt, pair in zip(
            [p for p in rep.points if p.y_local is not None], res.pairing_diag
        ):
            zeta = pt.y_initial[0]
            assert pair.valuation() == F(-n, n + 1)
            expected = zeta ** (-n) / (n + 1)
            assert abs(pair.coeff_at(F(-n, n + 1)) - expected) < 1e-9

    def test_pairing_inverts_z(self):
        pot = potential_of("blowup1", F(2, 5))
        rep = find_critical_points(pot)
        res = residue_report(pot, rep)
        for z, pair in zip(res.z_values, res.pairing_diag):
            prod = z * pair
            assert prod.coeff_at(0) == pytest.approx(1.0)
            assert all(abs(c) < 1e-9 for e, c in prod.terms if e != 0)

    def test_cp1_critical_values(self):
        pot = potential_of("simplex", 1)
        rep = find_critical_points(pot)
        res = residue_report(pot, rep)
        got = sorted(c.coeff_at(F(1, 2)).real for c in res.critical_values)
        assert got == pytest.approx([-2.0, 2.0])
        for c in res.critical_values:
            assert c.valuation() == F(1, 2)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_cpn_critical_values_are_eigenvalues(self, n):
        pot = potential_of("simplex", n)
        rep = find_critical_points(pot)
        res = residue_report(pot, rep)
        assert len(res.critical_values) == n + 1
        seen = []
        for c in res.critical_values:
            assert c.valuation() == F(1, n + 1)
            lead = c.coeff_at(F(1, n + 1))
            # a critical value (n+1) zeta for a fresh root of unity zeta
            assert abs(lead ** (n + 1) - (n + 1) ** (n + 1)) < 1e-6
            assert all(abs(lead - s) > 1e-6 for s in seen)
            seen.append(lead)

    def test_trace_vanishes_on_fano_catalog(self):
        cases = [
            ("simplex", (1,)),
            ("simplex", (2,)),
            ("simplex", (3,)),
            ("blowup1", (F(2, 5),)),
            ("blowup1", (F(1, 5),)),
            ("blowup1", (F(1, 3),)),
            ("blowup2", (F(1, 2), F(1, 5))),
            ("hirzebruch", (1, F(2, 5))),
        ]
        for name, params in cases:
            pot = potential_of(name, *params)
            rep = find_critical_points(pot)
            res = residue_report(pot, rep)
            assert res.trace_ok, (name, params, res.trace_residual)
            assert res.trace_residual <= 1e-9

    def test_degenerate_points_skip_trace_with_note(self):
        entry = catalog("blowup1", F(1, 3))
        bulk = BulkCoefficients(
            tuple(NovikovScalar.from_number(c) for c in (1, 1, -0.25, 0.75))
        )
        pot = build_potential(entry.polytope, bulk=bulk)
        rep = find_critical_points(pot)
        res = residue_report(pot, rep)
        assert res.trace_ok is None
        assert any("degenerate" in note for note in res.notes)
        assert res.morse_ok and res.morse_mode == "equality"
        assert len(res.z_values) == 2  # only the nondegenerate pair

    def test_cells_downgrade_morse_to_lower_bound(self):
        pot = potential_of("blowup2", F(1, 2), F(1, 4))
        rep = find_critical_points(pot)
        ok, total, betti, mode = morse_count_check(pot, rep)
        assert mode == "lower-bound"
        assert ok and total == 2 and betti == 5
        res = residue_report(pot, rep)
        assert res.trace_ok is None
        assert any("cells" in note for note in res.notes)


class TestExactnessLabels:
    def test_surface(self):
        assert z_exactness(potential_of("hirzebruch", 2, F(1, 2))) == "surface"

    def test_nef_threefold(self):
        assert z_exactness(potential_of("simplex", 3)) == "nef-deg2"

    def test_non_nef_threefold_is_leading_order_only(self):
        rows = [
            ((1, 0, 0), 0),
            ((0, 1, 0), 0),
            ((0, 0, 1), 0),
            ((0, 0, -1), 1),
            ((-1, -1, -4), 6),
        ]
        p = MomentPolytope.from_inequalities(rows)
        assert p.fano_type() == "neither"
        pot = build_potential(p, assume_fano=True)
        assert z_exactness(pot) == "leading-order-only"


class TestDuality:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_kodaira_spencer_pairing(self, n):
        rep = cpn_duality(n)
        assert rep.z_ok and rep.pairing_ok
        assert rep.max_error <= 1e-9

    def test_z_values_in_duality_report(self):
        rep = cpn_duality(2)
        assert len(rep.z_values) == 3
        for k, z in enumerate(rep.z_values):
            expected = 3 * cmath.exp(2j * cmath.pi * 2 * k / 3)
            assert abs(z.coeff_at(F(2, 3)) - expected) < 1e-9
