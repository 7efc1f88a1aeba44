"""Unit normal, fundamental forms, curvatures, and conformality tests.

Conventions, fixed once by the horosphere calibration (f = 1 in hyperbolic
space must give II = I with eta = (0, 0, 1)):

* the second form is h_ij = eps_N <D_i dx_j, N> with eps_N the scalar square
  of the unit normal, so the shape operator is I^{-1} II in every causal case;
* the normal is oriented so its last frame component is nonnegative unless a
  chart overrides the sign;
* the fourth form is the flat sign-weighted product of the differential of
  the frame-translated normal, computed here through the closed-form normal
  derivative (the finite-difference route lives in fourth_form_direct and is
  kept independent on purpose).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ambient as amb
from . import calculus
from .errors import NonImmersed, OrientationUndefined, WrongCausalClass

UMBILIC_REL_TOL = 1e-8
TOTALLY_GEODESIC_TOL = 1e-12
ORIENTATION_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ShapeSpectrum:
    """Eigenvalue data of the shape operator, when extracted."""

    kind: str                  # "real" | "complex" | "not_computed"
    values: tuple = ()

    @classmethod
    def real_pair(cls, values):
        return cls("real", tuple(sorted(float(v) for v in values)))

    @classmethod
    def complexified(cls):
        return cls("complex")

    @classmethod
    def not_computed(cls):
        return cls("not_computed")

    @property
    def is_real(self):
        return self.kind == "real"


@dataclass(frozen=True)
class FormBundle:
    """The four fundamental forms and derived curvature data at one point."""

    space: amb.AmbientSpace
    eta: np.ndarray            # frame components of the unit normal
    eta_du: np.ndarray         # closed-form parameter derivative of eta
    first: np.ndarray
    second: np.ndarray
    third: np.ndarray
    fourth: np.ndarray
    mean_curvature: float
    gauss_curvature: float
    shape_spectrum: ShapeSpectrum

    # Aliases matching the classical numerals.
    @property
    def I(self):  # noqa: E743 - the classical name
        return self.first

    @property
    def II(self):
        return self.second

    @property
    def III(self):
        return self.third

    @property
    def IV(self):
        return self.fourth


def _check_causal_class(space, first):
    det = np.linalg.det(first)
    if abs(det) < calculus.GRAM_DET_TOL:
        raise NonImmersed(f"induced metric is degenerate (det {det:.3e})")
    if space.causal_class is amb.CausalClass.SPACE_LIKE:
        if not np.all(np.linalg.eigvalsh(first) > 0):
            raise WrongCausalClass("induced metric is not positive definite")
    else:
        if first.shape != (2, 2) or det >= 0:
            raise WrongCausalClass("induced metric is not Lorentzian")
    return det


def _unit_normal(space, jet, orientation):
    """Coordinate components of the unit normal, oriented per convention.

    ``orientation`` may be None (last frame component nonnegative), an int
    sign forcing that component's sign, or a reference vector whose plain dot
    with eta breaks the tie (needed where the last component vanishes
    identically, e.g. vertical planes and generalized cylinders).
    """
    g = amb.metric_at_height(space, jet.height)
    rows = jet.du.T @ g                     # orthogonality conditions <N, x_ui> = 0
    _, _, vh = np.linalg.svd(rows)
    n0 = vh[-1]
    normsq = float(n0 @ g @ n0)
    if normsq == 0.0 or math.copysign(1.0, normsq) != space.normal_sign:
        raise WrongCausalClass(
            f"normal has scalar square of sign {math.copysign(1.0, normsq):+.0f}, "
            f"expected {space.normal_sign:+d}")
    n = n0 / math.sqrt(abs(normsq))
    eta = n / jet.height
    if orientation is not None and not isinstance(orientation, (int, float)):
        ref = np.asarray(orientation, dtype=float)
        dot = float(ref @ eta)
        if abs(dot) <= ORIENTATION_TIE_TOL:
            raise OrientationUndefined("reference vector is orthogonal to the normal")
        if dot < 0.0:
            n = -n
        return n, g
    eta_last = eta[-1]
    if abs(eta_last) <= ORIENTATION_TIE_TOL:
        raise OrientationUndefined(
            "last normal component vanishes; give a reference-vector override")
    want = 1 if orientation is None else int(orientation)
    if math.copysign(1.0, eta_last) != math.copysign(1.0, want):
        n = -n
    return n, g


def fundamental_forms(jet: calculus.Jet2, space: amb.AmbientSpace,
                      orientation: int | None = None) -> FormBundle:
    """All four fundamental forms plus curvature data from an exact two-jet.

    ``orientation`` forces the sign of the last frame component of the normal
    (default nonnegative).
    """
    h = jet.height
    du, duu = jet.du, jet.duu
    k = du.shape[1]
    n_coord, g = _unit_normal(space, jet, orientation)

    first = du.T @ g @ du
    _check_causal_class(space, first)

    gamma = amb.christoffel_at_height(space, h)
    # Ambient covariant second derivative: duu^A + Gamma^A_BC du^B_i du^C_j.
    d2 = duu + np.einsum("abc,bi,cj->aij", gamma, du, du)
    gn = g @ n_coord
    second = space.normal_sign * np.einsum("aij,a->ij", d2, gn)
    second = 0.5 * (second + second.T)

    first_inv = np.linalg.inv(first)
    shape_op = first_inv @ second
    third = second @ first_inv @ second

    eta = n_coord / h
    # Closed-form normal derivative; the first term is the frame drift, the
    # second the shape-operator action.
    eta_du = (eta[-1] * du - space.normal_sign * (du @ shape_op)) / h
    eps = space.eps
    fourth = np.einsum("a,ai,aj->ij", eps, eta_du, eta_du)

    mean = float(np.trace(shape_op)) / k
    curv_const = -1.0 if space.kind is amb.Kind.HYPERBOLIC else 1.0
    gauss = curv_const + space.normal_sign * float(
        np.linalg.det(second) / np.linalg.det(first))

    if space.causal_class is amb.CausalClass.SPACE_LIKE:
        eigs = np.linalg.eigvals(shape_op)
        if np.abs(eigs.imag).max() < 1e-10 * (1.0 + np.abs(eigs).max()):
            spectrum = ShapeSpectrum.real_pair(eigs.real)
        else:
            spectrum = ShapeSpectrum.complexified()
    else:
        spectrum = ShapeSpectrum.not_computed()

    return FormBundle(space, eta, eta_du, first, second, third, fourth,
                      mean, gauss, spectrum)


def forms_at(chart: calculus.SurfaceChart, p) -> FormBundle:
    """Convenience wrapper: jet then forms, honoring the chart orientation."""
    jet = calculus.jet2_eval(chart, p)
    orientation = chart.orientation
    if callable(orientation):
        orientation = orientation(float(p[0]), float(p[1]))
    return fundamental_forms(jet, chart.ambient, orientation)


@dataclass(frozen=True)
class ConformalityReport:
    """Outcome of testing proportionality of the fourth and second forms."""

    classification: str        # "conformal" | "not_conformal" |
    #                            "totally_geodesic_degenerate" | "umbilic_point"
    is_conformal: bool
    rho: float | None
    residual: float

    CONFORMAL = "conformal"
    NOT_CONFORMAL = "not_conformal"
    TOTALLY_GEODESIC = "totally_geodesic_degenerate"
    UMBILIC = "umbilic_point"


def conformality_test(bundle: FormBundle, tol: float = 1e-8) -> ConformalityReport:
    """Classify IV = rho * II proportionality by Frobenius least squares.

    Totally geodesic points (vanishing second form) and umbilic points with a
    failing residual are classified instead of failing; rho is reported only
    for conformal points.
    """
    ii, iv = bundle.second, bundle.fourth
    ii_norm = float(np.linalg.norm(ii))
    if ii_norm <= TOTALLY_GEODESIC_TOL:
        return ConformalityReport(ConformalityReport.TOTALLY_GEODESIC,
                                  False, None, 0.0)
    rho = float(np.tensordot(iv, ii) / np.tensordot(ii, ii))
    residual = float(np.linalg.norm(iv - rho * ii)
                     / max(np.linalg.norm(iv), 1e-12))
    if residual <= tol:
        return ConformalityReport(ConformalityReport.CONFORMAL, True, rho, residual)
    spec = bundle.shape_spectrum
    if spec.is_real and len(spec.values) == 2:
        lam, mu = spec.values
        if abs(lam - mu) <= UMBILIC_REL_TOL * (1.0 + abs(lam) + abs(mu)):
            return ConformalityReport(ConformalityReport.UMBILIC, False, None, residual)
    return ConformalityReport(ConformalityReport.NOT_CONFORMAL, False, None, residual)


def obata_identity_residual(bundle: FormBundle) -> float:
    """Frobenius residual of IV = eta_last^2 I + s 2 eta_last II + III.

    The sign s is -1 in hyperbolic space, +1 for space-like surfaces in
    de Sitter space, -1 for time-like ones; uniformly s = -eps_N.
    """
    s = -bundle.space.normal_sign
    eta_last = bundle.eta[-1]
    predicted = (eta_last**2 * bundle.first
                 + 2.0 * s * eta_last * bundle.second + bundle.third)
    return float(np.linalg.norm(bundle.fourth - predicted))


def curvature_relation_residual(bundle: FormBundle) -> float:
    """|K - (c + sigma eta_last^2)| for the bundle's causal case.

    (c, sigma) is (-1, +1) in hyperbolic space, (+1, -1) for space-like and
    (+1, +1) for time-like surfaces in de Sitter space; this is the curvature
    relation characterizing conformal normal Gauss maps away from umbilics.
    """
    if bundle.space.kind is amb.Kind.HYPERBOLIC:
        c, sigma = -1.0, 1.0
    elif bundle.space.causal_class is amb.CausalClass.SPACE_LIKE:
        c, sigma = 1.0, -1.0
    else:
        c, sigma = 1.0, 1.0
    return abs(bundle.gauss_curvature - (c + sigma * bundle.eta[-1] ** 2))


def rho_formula_residual(bundle: FormBundle, rho: float) -> float:
    """|rho - 2(H -+ eta_last)|: minus in hyperbolic space, plus for
    space-like de Sitter surfaces (the two cases the classification covers)."""
    s = -1.0 if bundle.space.kind is amb.Kind.HYPERBOLIC else 1.0
    return abs(rho - 2.0 * (bundle.mean_curvature + s * bundle.eta[-1]))


def fourth_form_direct(chart: calculus.SurfaceChart, p, step=1e-4) -> np.ndarray:
    """Fourth form by finite-differencing the normal over the parameter grid.

    Independent of the closed-form normal-derivative route; agreement to 1e-4
    relative is a module invariant.
    """
    u, v = float(p[0]), float(p[1])
    h = step * max(1.0, abs(u), abs(v))

    def eta_at(uu, vv):
        return forms_at(chart, (uu, vv)).eta

    deta = np.stack([(eta_at(u + h, v) - eta_at(u - h, v)) / (2 * h),
                     (eta_at(u, v + h) - eta_at(u, v - h)) / (2 * h)], axis=1)
    eps = chart.ambient.eps
    return np.einsum("a,ai,aj->ij", eps, deta, deta)


def intrinsic_gauss_curvature(chart: calculus.SurfaceChart, p, step=1e-3) -> float:
    """Gauss curvature of the induced metric by the Brioschi formula.

    Metric samples come from exact jets; metric derivatives use central
    differences with the given step.  Space-like charts only.
    """
    if chart.ambient.causal_class is not amb.CausalClass.SPACE_LIKE:
        raise WrongCausalClass("intrinsic curvature path expects a space-like chart")
    u, v = float(p[0]), float(p[1])
    h = step * max(1.0, abs(u), abs(v))

    def metric(uu, vv):
        jet = calculus.jet2_eval(chart, (uu, vv))
        g = amb.metric_at_height(chart.ambient, jet.height)
        return jet.du.T @ g @ jet.du

    # 3x3 stencil of induced metrics, indexed [iu][iv] with offsets -h, 0, +h.
    s = [[metric(u + (iu - 1) * h, v + (iv - 1) * h) for iv in range(3)]
         for iu in range(3)]
    e = np.array([[s[iu][iv][0, 0] for iv in range(3)] for iu in range(3)])
    f = np.array([[s[iu][iv][0, 1] for iv in range(3)] for iu in range(3)])
    g = np.array([[s[iu][iv][1, 1] for iv in range(3)] for iu in range(3)])

    def d_u(a):
        return (a[2, 1] - a[0, 1]) / (2 * h)

    def d_v(a):
        return (a[1, 2] - a[1, 0]) / (2 * h)

    e_u, e_v = d_u(e), d_v(e)
    g_u, g_v = d_u(g), d_v(g)
    f_u, f_v = d_u(f), d_v(f)
    e_vv = (e[1, 2] - 2 * e[1, 1] + e[1, 0]) / h**2
    g_uu = (g[2, 1] - 2 * g[1, 1] + g[0, 1]) / h**2
    f_uv = (f[2, 2] - f[2, 0] - f[0, 2] + f[0, 0]) / (4 * h**2)

    ee, ff, gg = e[1, 1], f[1, 1], g[1, 1]
    m1 = np.array([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, ee, ff],
        [0.5 * g_v, ff, gg],
    ])
    m2 = np.array([
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, ee, ff],
        [0.5 * g_u, ff, gg],
    ])
    denom = (ee * gg - ff * ff) ** 2
    return float((np.linalg.det(m1) - np.linalg.det(m2)) / denom)
