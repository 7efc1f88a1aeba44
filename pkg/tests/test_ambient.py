import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussform import ambient as amb
from gaussform.errors import DegenerateSet, NonPositiveHeight, QuadricViolation

H3 = amb.hyperbolic_space()
DS3 = amb.de_sitter_space()
DS3_TL = amb.de_sitter_space(causal_class=amb.CausalClass.TIME_LIKE)


class TestSpaceDescriptor:
    def test_hyperbolic_signature(self):
        assert H3.signature == (1, 1, 1)
        assert H3.normal_sign == 1

    def test_de_sitter_signs(self):
        assert DS3.signature == (1, 1, -1)
        assert DS3.normal_sign == -1
        assert DS3_TL.normal_sign == 1

    def test_hyperbolic_rejects_timelike(self):
        with pytest.raises(ValueError):
            amb.AmbientSpace(amb.Kind.HYPERBOLIC, 3, amb.CausalClass.TIME_LIKE)

    def test_higher_dimension(self):
        h4 = amb.hyperbolic_space(4)
        assert h4.n == 3
        assert h4.signature == (1, 1, 1, 1)


class TestMetric:
    def test_unit_height_is_identity(self):
        g = amb.metric_at(H3, amb.HalfSpacePoint((0, 0, 1)))
        assert np.array_equal(g, np.eye(3))

    def test_de_sitter_at_height_two(self):
        g = amb.metric_at(DS3, amb.HalfSpacePoint((0, 0, 2)))
        assert np.allclose(g, np.diag([0.25, 0.25, -0.25]))

    def test_boundary_rejected(self):
        with pytest.raises(NonPositiveHeight):
            amb.metric_at(H3, amb.HalfSpacePoint((0, 0, 0)))

    def test_scaling_and_signs(self, rng):
        for _ in range(20):
            h = rng.uniform(0.1, 10)
            for space in (H3, DS3):
                g = amb.metric_at(space, amb.HalfSpacePoint((1.0, -2.0, h)))
                assert np.allclose(np.diag(g), space.eps / h**2)
                assert np.allclose(g - np.diag(np.diag(g)), 0)


def _sympy_christoffel(space, height):
    """Independent oracle: Levi-Civita symbols from the metric via sympy."""
    import sympy as sp

    xs = sp.symbols("x1 x2 x3", positive=True)
    eps = space.signature
    g = sp.diag(*[sp.Rational(e) / xs[2] ** 2 for e in eps])
    ginv = g.inv()
    gamma = np.zeros((3, 3, 3))
    for a in range(3):
        for b in range(3):
            for c in range(3):
                expr = sum(
                    ginv[a, d] * (sp.diff(g[d, b], xs[c]) + sp.diff(g[d, c], xs[b])
                                  - sp.diff(g[b, c], xs[d])) / 2
                    for d in range(3))
                gamma[a, b, c] = float(expr.subs({xs[2]: height}))
    return gamma


class TestChristoffel:
    @pytest.mark.parametrize("space", [H3, DS3], ids=["h3", "ds3"])
    def test_against_symbolic_oracle(self, space):
        for height in (1.0, 0.5, 2.0):
            ours = amb.christoffel_at(space, amb.HalfSpacePoint((0.3, -0.7, height)))
            oracle = _sympy_christoffel(space, height)
            assert np.abs(ours - oracle).max() < 1e-14

    def test_specific_entries_h3(self):
        g = amb.christoffel_at(H3, amb.HalfSpacePoint((0, 0, 1)))
        assert g[0, 0, 2] == -1.0
        assert g[2, 0, 0] == 1.0
        assert g[2, 2, 2] == -1.0

    def test_specific_entries_ds3(self):
        g = amb.christoffel_at(DS3, amb.HalfSpacePoint((0, 0, 1)))
        assert g[2, 0, 0] == -1.0
        assert g[0, 0, 2] == -1.0

    def test_height_homogeneity(self):
        one = amb.christoffel_at(DS3, amb.HalfSpacePoint((5, 7, 1)))
        two = amb.christoffel_at(DS3, amb.HalfSpacePoint((5, 7, 2)))
        assert np.allclose(two, one / 2)

    def test_symmetry(self, rng):
        for _ in range(10):
            h = rng.uniform(0.1, 10)
            g = amb.christoffel_at(H3, amb.HalfSpacePoint((0, 0, h)))
            assert np.array_equal(g, g.transpose(0, 2, 1))

    @pytest.mark.parametrize("space", [H3, DS3], ids=["h3", "ds3"])
    def test_matches_finite_differences_of_metric(self, space, rng):
        # Levi-Civita formula with centrally differenced metric derivatives.
        for _ in range(100):
            x = np.array([rng.uniform(-3, 3), rng.uniform(-3, 3),
                          rng.uniform(0.1, 10)])
            step = 1e-6 * max(1.0, x[2])
            dg = np.zeros((3, 3, 3))
            for c in range(3):
                xp, xm = x.copy(), x.copy()
                xp[c] += step
                xm[c] -= step
                dg[:, :, c] = (amb.metric_at(space, amb.HalfSpacePoint(xp))
                               - amb.metric_at(space, amb.HalfSpacePoint(xm))) / (2 * step)
            ginv = np.linalg.inv(amb.metric_at(space, amb.HalfSpacePoint(x)))
            # dg[d,b,c] = d_c g_db; assemble d_c g_db + d_b g_dc - d_d g_bc
            term = dg + dg.transpose(0, 2, 1) - dg.transpose(2, 0, 1)
            oracle = 0.5 * np.einsum("ad,dbc->abc", ginv, term)
            ours = amb.christoffel_at(space, amb.HalfSpacePoint(x))
            assert np.abs(ours - oracle).max() < 1e-6


coords = st.floats(-5, 5, allow_nan=False)
heights = st.floats(0.05, 20, allow_nan=False)


class TestModelConversion:
    def test_hyperboloid_apex(self):
        p = amb.to_half_space(H3, amb.MinkowskiPoint((1, 0, 0, 0), amb.Quadric.H))
        assert p.coords == (0.0, 0.0, 1.0)

    def test_de_sitter_example_point(self):
        p = amb.to_half_space(DS3, amb.MinkowskiPoint((0, 0, 0, 1), amb.Quadric.DS))
        assert np.allclose(p.coords, (0.0, 0.0, 1.0))

    def test_degenerate_set(self):
        with pytest.raises(DegenerateSet):
            amb.to_half_space(DS3, amb.MinkowskiPoint((1, 1, 0, 1), amb.Quadric.DS))

    def test_quadric_violation(self):
        with pytest.raises(QuadricViolation):
            amb.to_half_space(H3, amb.MinkowskiPoint((1, 0.5, 0, 0), amb.Quadric.H))

    @settings(max_examples=250, deadline=None)
    @given(coords, coords, heights)
    def test_round_trip_h3(self, x1, x2, x3):
        p = amb.HalfSpacePoint((x1, x2, x3))
        mink = amb.to_minkowski(H3, p)
        assert mink.quadric_residual() <= 1e-12 * max(1.0, max(abs(c) for c in mink.coords) ** 2)
        back = amb.to_half_space(H3, mink)
        assert np.allclose(back.coords, p.coords, rtol=0, atol=1e-12 * max(1.0, x3, abs(x1), abs(x2)))

    @settings(max_examples=250, deadline=None)
    @given(coords, coords, heights, st.sampled_from([-1, 1]))
    def test_round_trip_ds3(self, x1, x2, x3, sheet):
        p = amb.HalfSpacePoint((x1, x2, x3))
        mink = amb.to_minkowski(DS3, p, sheet)
        assert mink.branch_sign() == sheet
        back = amb.to_half_space(DS3, mink)
        assert np.allclose(back.coords, p.coords, rtol=0, atol=1e-12 * max(1.0, x3, abs(x1), abs(x2)))
        again = amb.to_minkowski(DS3, back, mink.branch_sign())
        assert np.allclose(again.coords, mink.coords, rtol=1e-12, atol=1e-12)

    def test_bulk_round_trip_budget(self, rng):
        worst = 0.0
        for _ in range(1000):
            x = (rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.05, 20))
            for space, sheet in ((H3, 1), (DS3, 1), (DS3, -1)):
                mink = amb.to_minkowski(space, amb.HalfSpacePoint(x), sheet)
                back = amb.to_half_space(space, mink)
                worst = max(worst, max(abs(a - b) for a, b in zip(back.coords, x)))
        assert worst <= 1e-12 * 20


class TestIsometryShift:
    def test_quarter_turn(self):
        p = amb.isometry_shift(amb.HalfSpacePoint((1, 0, 1)), math.pi / 2, 0, 0)
        assert np.allclose(p.coords, (0, 1, 1), atol=1e-15)

    def test_pure_translation(self):
        p = amb.isometry_shift(amb.HalfSpacePoint((1, 2, 3)), 0.0, -1, -2)
        assert p.coords == (0.0, 0.0, 3.0)

    @settings(max_examples=100, deadline=None)
    @given(coords, coords, heights,
           st.floats(-math.pi, math.pi), coords, coords)
    def test_inverse_composition(self, x1, x2, x3, theta, a, b):
        p = amb.HalfSpacePoint((x1, x2, x3))
        q = amb.isometry_shift(p, theta, a, b)
        # inverse: undo the translation, then rotate back
        back = amb.isometry_shift(
            amb.HalfSpacePoint((q.coords[0] - a, q.coords[1] - b, q.coords[2])),
            -theta, 0, 0)
        assert np.allclose(back.coords, p.coords,
                           atol=1e-14 * max(1, abs(x1), abs(x2), abs(a), abs(b)))

    def test_metric_preserved_through_jacobian(self, rng):
        # The map is Euclidean-rigid horizontally and fixes the height, so the
        # pulled-back metric equals the metric exactly.
        for _ in range(20):
            x = amb.HalfSpacePoint((rng.uniform(-3, 3), rng.uniform(-3, 3),
                                    rng.uniform(0.1, 5)))
            theta = rng.uniform(-math.pi, math.pi)
            c, s = math.cos(theta), math.sin(theta)
            jac = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
            target = amb.isometry_shift(x, theta, 1.2, -0.4)
            for space in (H3, DS3):
                g_src = amb.metric_at(space, x)
                g_dst = amb.metric_at(space, target)
                assert np.allclose(jac.T @ g_dst @ jac, g_src, atol=1e-15)


class TestFrameComponents:
    def test_round_trip_with_lift(self, rng):
        from gaussform import duality

        for space, sheet in ((H3, 1), (DS3, 1), (DS3, -1)):
            for _ in range(20):
                x = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.2, 4))
                eta = rng.normal(size=3)
                X, V = duality.minkowski_normal(space, x, eta, sheet)
                point = amb.MinkowskiPoint(tuple(X), amb.Quadric.H
                                           if space.kind is amb.Kind.HYPERBOLIC
                                           else amb.Quadric.DS)
                back = amb.frame_components(space, point, V)
                assert np.allclose(back, eta, atol=1e-11)
