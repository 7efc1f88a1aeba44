import math

import numpy as np
import pytest

from gaussform import ambient as amb
from gaussform import calculus as calc
from gaussform import duality, forms, zoo
from gaussform.errors import (BranchPoint, CausalityViolation, EquatorialNormal,
                              NonPositiveHeight)

H3 = amb.hyperbolic_space()
DS3 = amb.de_sitter_space()

CONFORMAL_PAIR_SOURCES = ["translational-6.6", "ruled-6.7", "ruled-6.8",
                          "translational-6.4", "ruled-6.2-2", "ruled-6.2-3",
                          "ruled-7.4-3", "ruled-7.4-4", "ruled-7.4-5",
                          "ruled-7.4-6"]


class TestCurvatureTransfer:
    def test_flat_to_flat(self):
        assert duality.curvature_transfer(0.0, duality.H3_TO_DS3) == 0.0

    def test_de_sitter_to_hyperbolic(self):
        assert duality.curvature_transfer(3.0, duality.DS3_TO_H3) == -1.5

    def test_branch_points(self):
        with pytest.raises(BranchPoint):
            duality.curvature_transfer(-1.0, duality.H3_TO_DS3)
        with pytest.raises(BranchPoint):
            duality.curvature_transfer(1.0, duality.DS3_TO_H3)
        with pytest.raises(BranchPoint):
            duality.curvature_transfer(1.0, duality.DS3_TIMELIKE)

    def test_timelike_transfer_stays_above_one(self):
        # Conformal time-like surfaces have K = 1 + eta3^2 >= 1; the dual is
        # conformal too, so its curvature must also stay >= 1.
        for k in (1.2, 2.0, 5.0):
            assert duality.curvature_transfer(k, duality.DS3_TIMELIKE) > 1.0


class TestPolarVariety:
    def test_horosphere_closed_form(self):
        chart = zoo.make_surface("horosphere")
        pp = duality.polar_variety(chart, (0.4, -0.3))
        assert np.allclose(pp.position.coords, (-0.4, 0.3, 1.0))
        assert pp.source_curvature == pytest.approx(0.0)
        assert pp.dual_curvature == pytest.approx(0.0)
        assert pp.volume_ratio == pytest.approx(1.0)
        assert not pp.branch_flag

    def test_equatorial_normal_rejected(self):
        chart = zoo.make_surface("cylinder-7.4-2")
        with pytest.raises(EquatorialNormal):
            duality.polar_variety(chart, (1.0, 1.0))

    def test_eta3_relation(self, rng):
        # eta_3 = (N0 - N3)/(X3 - X0) between source lift and dual point.
        for key in ["translational-6.6", "translational-6.4", "ruled-7.4-5"]:
            chart = zoo.make_surface(key)
            for p in chart.interior_points(10, rng):
                pp = duality.polar_variety(chart, p)
                X = pp.source_minkowski.array()
                V = pp.minkowski.array()
                ratio = (V[0] - V[3]) / (X[3] - X[0])
                # dual lifts to the hyperboloid may have been sign-fixed
                assert min(abs(ratio - pp.source_eta3),
                           abs(ratio + pp.source_eta3)) <= 1e-10

    def test_lift_orthogonality_against_fd(self, rng):
        # The lifted normal must be unit and orthogonal to finite-difference
        # tangents of the lifted surface: an independent check of the frame
        # formulas.
        def lorentz(a, b):
            return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]

        for key in ["translational-6.6", "translational-6.4", "ruled-7.4-3"]:
            chart = zoo.make_surface(key)
            space = chart.ambient

            def lift(u, v, chart=chart, space=space):
                x = calc.jet2_eval(chart, (u, v)).x
                return amb.to_minkowski(space, amb.HalfSpacePoint(tuple(x))).array()

            for p in chart.interior_points(5, rng, margin_frac=0.1):
                jet = calc.jet2_eval(chart, p)
                bundle = forms.forms_at(chart, p)
                X, V = duality.minkowski_normal(space, jet.x, bundle.eta)
                h = 1e-6
                tu = (lift(p[0] + h, p[1]) - lift(p[0] - h, p[1])) / (2 * h)
                tv = (lift(p[0], p[1] + h) - lift(p[0], p[1] - h)) / (2 * h)
                # the lifted normal has the scalar square of the surface normal
                assert abs(lorentz(V, V) - space.normal_sign) <= 1e-9
                assert abs(lorentz(X, V)) <= 1e-9
                assert abs(lorentz(V, tu)) <= 1e-6
                assert abs(lorentz(V, tv)) <= 1e-6

    def test_branch_flag_on_circular_family(self):
        # The circular translational surface hits the branch curvature along
        # the avoided loci; approaching one flags the point.
        chart = zoo.make_surface("translational-6.6",
                                 domain=(0.0005, math.pi - 0.15, 0.15, math.pi - 0.15))
        pp = duality.polar_variety(chart, (0.001, 1.2))
        assert pp.branch_flag
        assert pp.dual_curvature is None
        with pytest.raises(BranchPoint):
            pp.require_dual_curvature()

    def test_volume_ratio_is_eta3_squared_when_conformal(self, rng):
        for key in ["translational-6.6", "translational-6.4", "ruled-7.4-5"]:
            chart = zoo.make_surface(key)
            for p in chart.interior_points(10, rng):
                pp = duality.polar_variety(chart, p)
                assert pp.volume_ratio == pytest.approx(pp.source_eta3**2, abs=1e-8)


class TestTransferLaw:
    @pytest.mark.parametrize("key", CONFORMAL_PAIR_SOURCES)
    def test_measured_dual_curvature(self, key, rng):
        k_branch = -1.0 if zoo.get_family(key).space_tag == zoo.H3 else 1.0
        chart = zoo.make_surface(key)
        dual = duality.polar_chart(chart)
        for p in chart.interior_points(10, rng, margin_frac=0.1):
            pp = duality.polar_variety(chart, p)
            if pp.branch_flag:
                continue
            measured = forms.forms_at(dual, p).gauss_curvature
            err = abs(measured - pp.dual_curvature)
            # relative agreement everywhere; absolute only away from the
            # branch locus, where the transfer law stops amplifying
            assert err <= 1e-8 * max(1.0, abs(pp.dual_curvature))
            if abs(pp.source_curvature - k_branch) >= 0.05:
                assert err <= 1e-8

    def test_double_polarity(self, rng):
        for key in ["translational-6.6", "ruled-6.7", "ruled-6.8",
                    "translational-6.4", "ruled-6.2-2", "ruled-7.4-3",
                    "ruled-7.4-5"]:
            chart = zoo.make_surface(key)
            for p in chart.interior_points(8, rng, margin_frac=0.1):
                jet = calc.jet2_eval(chart, p)
                X = amb.to_minkowski(chart.ambient,
                                     amb.HalfSpacePoint(tuple(jet.x))).array()
                V2 = duality.polar_of_polar_minkowski(chart, p)
                err = min(np.abs(V2 - X).max(), np.abs(V2 + X).max())
                assert err <= 1e-8, key


class TestConformalityEquivalence:
    @pytest.mark.parametrize("key", CONFORMAL_PAIR_SOURCES)
    def test_conformal_source_conformal_dual(self, key, rng):
        chart = zoo.make_surface(key)
        dual = duality.polar_chart(chart)
        for p in chart.interior_points(10, rng, margin_frac=0.1):
            src = forms.conformality_test(forms.forms_at(chart, p))
            dst = forms.conformality_test(forms.forms_at(dual, p), tol=1e-6)
            assert src.classification == forms.ConformalityReport.CONFORMAL
            assert dst.classification == forms.ConformalityReport.CONFORMAL

    def test_nonconformal_source_nonconformal_dual(self, rng):
        chart = zoo.make_surface("control-bowl")
        dual = duality.polar_chart(chart)
        seen = 0
        for p in chart.interior_points(20, rng, margin_frac=0.1):
            src = forms.conformality_test(forms.forms_at(chart, p))
            if src.classification != forms.ConformalityReport.NOT_CONFORMAL:
                continue
            dst = forms.conformality_test(forms.forms_at(dual, p), tol=1e-6)
            assert dst.classification == forms.ConformalityReport.NOT_CONFORMAL
            seen += 1
        assert seen >= 10


class TestFamilyPairings:
    @pytest.mark.parametrize("source,target", [
        ("translational-6.6", "translational-6.4"),
        ("ruled-6.7", "ruled-6.2-2"),
        ("ruled-6.8", "ruled-6.2-3"),
    ])
    def test_pairing_fit(self, source, target):
        got_target, fit = duality.fit_family_pairing(source, count=100, seed=5)
        assert got_target == target
        assert abs(abs(fit.theta) - math.pi / 2) <= 1e-12
        assert fit.max_gap <= 1e-6

    def test_pairing_with_other_parameters(self):
        _, fit = duality.fit_family_pairing("translational-6.6",
                                            {"a": 1.5, "b": 0.7}, count=60)
        assert fit.max_gap <= 1e-6

    def test_unknown_pairing(self):
        with pytest.raises(ValueError):
            duality.fit_family_pairing("horosphere")


class TestGraphDuality:
    def test_constant_graph(self):
        p = duality.graph_dualize(0.7, -0.2, 1.0, 0.0, 0.0, duality.H3_TO_DS3)
        assert np.allclose(p.coords, (-0.7, 0.2, 1.0))

    def test_causality_violation(self):
        with pytest.raises(CausalityViolation):
            duality.graph_dualize(0.0, 0.0, 1.0, 0.0, 0.0, duality.DS3_TIMELIKE)
        with pytest.raises(CausalityViolation):
            duality.graph_dualize(0.0, 0.0, 1.0, 0.9, 0.9, duality.DS3_TO_H3)

    def test_nonpositive_height(self):
        with pytest.raises(NonPositiveHeight):
            duality.graph_dualize(0.0, 0.0, -1.0, 0.0, 0.0, duality.H3_TO_DS3)

    def test_translational_origin(self):
        f = calc.parse_graph_expr("sqrt(1+u^2)+sqrt(1+v^2)")
        val, grad, _ = f.jet(0.0, 0.0)
        p = duality.graph_dualize(0.0, 0.0, val, grad[0], grad[1],
                                  duality.DS3_TO_H3)
        assert np.allclose(p.coords, (0, 0, 2))

    @pytest.mark.parametrize("key,direction", [
        ("horosphere", duality.H3_TO_DS3),
        ("equidistant-plane", duality.H3_TO_DS3),
        ("translational-6.3", duality.DS3_TO_H3),
        ("translational-6.3-minus", duality.DS3_TO_H3),
        ("corollary-6", duality.DS3_TO_H3),
        ("translational-7.3-1-plus", duality.DS3_TIMELIKE),
        ("translational-7.3-2-plus", duality.DS3_TIMELIKE),
        ("corollary-7-plus", duality.DS3_TIMELIKE),
        ("flaherty-plus", duality.DS3_TIMELIKE),
    ])
    def test_dualized_graph_solves_partner_pde(self, key, direction, rng):
        f = zoo.family_graph_expr(key)
        chart = zoo.make_surface(key)
        for p in chart.interior_points(100, rng, margin_frac=0.1):
            assert abs(duality.graph_duality_residual(f, p, direction)) <= 1e-6
