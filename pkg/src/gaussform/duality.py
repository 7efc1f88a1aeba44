"""Polar-variety duality between the two model spaces.

The unit normal of a surface, parallel translated to the origin of Minkowski
4-space, lands on the opposite quadric: de Sitter for sources in hyperbolic
space and vice versa (time-like de Sitter surfaces stay on the de Sitter
quadric).  This module computes that dual point, its exact first derivatives
(through the closed-form normal derivative, so double polarity can be checked
at full precision), the curvature and volume transfer laws, the graph-level
duality between the two fully nonlinear graph PDEs, and the isometry fitting
used to match dual families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from . import ambient as amb
from . import calculus as calc
from . import forms
from . import zoo
from .errors import (BranchPoint, CausalityViolation, EquatorialNormal,
                     NonPositiveHeight, OrientationUndefined, WrongCausalClass)

H3_TO_DS3 = "h3-to-ds3"
DS3_TO_H3 = "ds3-to-h3"
DS3_TIMELIKE = "ds3-timelike"

EQUATORIAL_TOL = 1e-12
BRANCH_K_TOL = 1e-6
BRANCH_DET_TOL = 1e-10


def _branch_curvature(space: amb.AmbientSpace) -> float:
    return -1.0 if space.kind is amb.Kind.HYPERBOLIC else 1.0


def transfer_direction(space: amb.AmbientSpace) -> str:
    if space.kind is amb.Kind.HYPERBOLIC:
        return H3_TO_DS3
    if space.causal_class is amb.CausalClass.SPACE_LIKE:
        return DS3_TO_H3
    return DS3_TIMELIKE


def dual_space(space: amb.AmbientSpace) -> amb.AmbientSpace:
    """Ambient space the polar variety lives in, with its causal class."""
    if space.kind is amb.Kind.HYPERBOLIC:
        return amb.de_sitter_space()
    if space.causal_class is amb.CausalClass.SPACE_LIKE:
        return amb.hyperbolic_space()
    return amb.de_sitter_space(causal_class=amb.CausalClass.TIME_LIKE)


def curvature_transfer(curvature: float, direction: str) -> float:
    """Dual Gauss curvature under the generalized Gauss map.

    K/(K+1) out of hyperbolic space, K/(1-K) for space-like de Sitter
    sources, K/(K-1) for time-like ones (the sign follows from eta_3 -> 1/eta_3
    and K = 1 + eta_3^2 on conformal time-like surfaces; a dual time-like
    curvature below 1 would be inconsistent).  Branch points raise.
    """
    if direction == H3_TO_DS3:
        if abs(curvature + 1.0) < 1e-12:
            raise BranchPoint("dual curvature undefined where K = -1")
        return curvature / (curvature + 1.0)
    if direction == DS3_TO_H3:
        if abs(curvature - 1.0) < 1e-12:
            raise BranchPoint("dual curvature undefined where K = 1")
        return curvature / (1.0 - curvature)
    if direction == DS3_TIMELIKE:
        if abs(curvature - 1.0) < 1e-12:
            raise BranchPoint("dual curvature undefined where K = 1")
        return curvature / (curvature - 1.0)
    raise ValueError(f"unknown direction {direction!r}")


# --------------------------------------------------------------------------
# Minkowski lift of point and normal, with exact first derivatives
# --------------------------------------------------------------------------

def minkowski_jacobian(space: amb.AmbientSpace, x, sheet_sign=1) -> np.ndarray:
    """d(Minkowski)/d(half-space) as a 4x3 matrix at half-space coords x."""
    x1, x2, x3 = (float(c) for c in x)
    q = x1 * x1 + x2 * x2
    j = np.zeros((4, 3))
    if space.kind is amb.Kind.HYPERBOLIC:
        j[0] = [x1 / x3, x2 / x3, (x3 * x3 - q - 1.0) / (2.0 * x3 * x3)]
        j[3] = [x1 / x3, x2 / x3, (x3 * x3 - q + 1.0) / (2.0 * x3 * x3)]
    else:
        s = 1.0 if sheet_sign >= 0 else -1.0
        j[0] = [s * x1 / x3, s * x2 / x3,
                -s * (q + x3 * x3 + 1.0) / (2.0 * x3 * x3)]
        j[3] = [s * x1 / x3, s * x2 / x3,
                -s * (q + x3 * x3 - 1.0) / (2.0 * x3 * x3)]
    j[1] = [1.0 / x3, 0.0, -x1 / (x3 * x3)]
    j[2] = [0.0, 1.0 / x3, -x2 / (x3 * x3)]
    return j


def minkowski_normal(space: amb.AmbientSpace, x, eta, sheet_sign=1):
    """Minkowski coordinates of the surface point and its unit normal.

    Returns (X, V) as 4-vectors; V is the parallel-translated normal, i.e.
    the polar point on the opposite quadric.
    """
    X = amb.to_minkowski(space, amb.HalfSpacePoint(tuple(x)), sheet_sign).array()
    return X, _normal_from_lift(X, eta)


def _normal_from_lift(X, eta):
    eta1, eta2, eta3 = (float(c) for c in eta)
    w = X[3] - X[0]
    v1 = eta1 - X[1] * eta3
    v2 = eta2 - X[2] * eta3
    d = eta3 * w                      # V0 - V3
    s = ((X[0] + X[3]) * d - 2.0 * (X[1] * v1 + X[2] * v2)) / w
    return np.array([(s + d) / 2.0, v1, v2, (s - d) / 2.0])


def _normal_lift_derivative(X, dX, eta, deta):
    """Derivative of the lifted normal along the surface parameters."""
    w = X[3] - X[0]
    dw = dX[3] - dX[0]
    v1 = eta[0] - X[1] * eta[2]
    v2 = eta[1] - X[2] * eta[2]
    dv1 = deta[0] - dX[1] * eta[2] - X[1] * deta[2]
    dv2 = deta[1] - dX[2] * eta[2] - X[2] * deta[2]
    d = eta[2] * w
    dd = deta[2] * w + eta[2] * dw
    num = (X[0] + X[3]) * d - 2.0 * (X[1] * v1 + X[2] * v2)
    dnum = ((dX[0] + dX[3]) * d + (X[0] + X[3]) * dd
            - 2.0 * (dX[1] * v1 + X[1] * dv1 + dX[2] * v2 + X[2] * dv2))
    ds = (dnum * w - num * dw) / (w * w)
    return np.array([(ds + dd) / 2.0, dv1, dv2, (ds - dd) / 2.0])


# --------------------------------------------------------------------------
# The polar variety
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarPoint:
    """Image of one surface point under the generalized Gauss map."""

    position: amb.HalfSpacePoint      # dual point in its half-space chart
    minkowski: amb.MinkowskiPoint     # the lifted normal on the dual quadric
    source_minkowski: amb.MinkowskiPoint
    source_eta3: float
    source_curvature: float
    dual_curvature: float | None     # None exactly at branch points
    volume_ratio: float
    branch_flag: bool
    direction: str

    def require_dual_curvature(self) -> float:
        if self.dual_curvature is None:
            raise BranchPoint("dual curvature requested at a branch point")
        return self.dual_curvature


def _polar_pieces(bundle: forms.FormBundle, jet: calc.Jet2, sheet_sign):
    """X, dX, V, dV for the dual point, all exact from the bundle."""
    space = bundle.space
    eta = bundle.eta
    if abs(eta[2]) < EQUATORIAL_TOL:
        raise EquatorialNormal("dual point would land on the degenerate set")
    X, V = minkowski_normal(space, jet.x, eta, sheet_sign)
    J = minkowski_jacobian(space, jet.x, sheet_sign)
    dX = J @ jet.du                   # (4, 2)
    dV = np.stack([_normal_lift_derivative(X, dX[:, k], eta, bundle.eta_du[:, k])
                   for k in range(jet.du.shape[1])], axis=1)
    target = dual_space(space)
    if target.kind is amb.Kind.HYPERBOLIC and V[0] < 0.0:
        V, dV = -V, -dV               # pick the upper sheet of the hyperboloid
    return X, dX, V, dV, target


def _half_space_of(V, dV=None):
    """Project a quadric point (and optionally its derivative) to the chart."""
    d = V[0] - V[3]
    sd = math.copysign(1.0, d)
    pos = np.array([V[1] / (sd * d), V[2] / (sd * d), 1.0 / (sd * d)])
    if dV is None:
        return pos, None
    dd = dV[0] - dV[3]
    dpos = np.empty((3, dV.shape[1]))
    dpos[0] = dV[1] / (sd * d) - V[1] * dd / (sd * d * d)
    dpos[1] = dV[2] / (sd * d) - V[2] * dd / (sd * d * d)
    dpos[2] = -dd / (sd * d * d)
    return pos, dpos


def polar_variety(chart: calc.SurfaceChart, p, sheet_sign=1) -> PolarPoint:
    """Polar point of the surface at parameter p, with curvature transfer.

    Branch points (source curvature at the branch value, or a singular second
    form) are flagged rather than failed; the dual curvature is withheld
    there.
    """
    jet = calc.jet2_eval(chart, p)
    orientation = chart.orientation
    if callable(orientation):
        orientation = orientation(float(p[0]), float(p[1]))
    bundle = forms.fundamental_forms(jet, chart.ambient, orientation)
    X, _, V, _, target = _polar_pieces(bundle, jet, sheet_sign)
    pos, _ = _half_space_of(V)
    if not pos[2] > 0.0:
        raise NonPositiveHeight("dual point left the upper half-space")

    k = bundle.gauss_curvature
    k_branch = _branch_curvature(chart.ambient)
    branched = (abs(k - k_branch) < BRANCH_K_TOL
                or abs(np.linalg.det(bundle.second)) < BRANCH_DET_TOL)
    direction = transfer_direction(chart.ambient)
    dual_k = None if branched else curvature_transfer(k, direction)
    volume_ratio = abs(k - k_branch)

    src_quadric = amb.Quadric.H if chart.ambient.kind is amb.Kind.HYPERBOLIC \
        else amb.Quadric.DS
    dst_quadric = amb.Quadric.DS if target.kind is amb.Kind.DE_SITTER \
        else amb.Quadric.H
    return PolarPoint(
        position=amb.HalfSpacePoint(tuple(pos)),
        minkowski=amb.MinkowskiPoint(tuple(V), dst_quadric),
        source_minkowski=amb.MinkowskiPoint(tuple(X), src_quadric),
        source_eta3=float(bundle.eta[2]),
        source_curvature=k,
        dual_curvature=dual_k,
        volume_ratio=volume_ratio,
        branch_flag=bool(branched),
        direction=direction,
    )


def _exact_polar_jet_fn(chart: calc.SurfaceChart, sheet_sign):
    """Polar map differentiated by running it on second-order jets.

    Works for charts whose evaluator exposes component expression trees; the
    whole pipeline (sign-weighted cross product, normalization, Minkowski
    lift, projection to the dual chart) is rational-plus-sqrt, so jets pass
    through it exactly.
    """
    asts = chart.evaluator.component_asts
    du_asts = tuple(calc.derivative(a, "u") for a in asts)
    dv_asts = tuple(calc.derivative(a, "v") for a in asts)
    space = chart.ambient
    eps = space.signature
    target = dual_space(space)
    hyper_source = space.kind is amb.Kind.HYPERBOLIC
    hyper_target = target.kind is amb.Kind.HYPERBOLIC
    s_sheet = 1.0 if sheet_sign >= 0 else -1.0

    def jet_fn(u, v):
        x = [calc.scalar_jet(a, u, v) for a in asts]
        xu = [calc.scalar_jet(a, u, v) for a in du_asts]
        xv = [calc.scalar_jet(a, u, v) for a in dv_asts]
        w = [xu[1] * xv[2] - xu[2] * xv[1],
             xu[2] * xv[0] - xu[0] * xv[2],
             xu[0] * xv[1] - xu[1] * xv[0]]
        nd = [eps[a] * w[a] for a in range(3)]
        nn = eps[0] * nd[0] * nd[0] + eps[1] * nd[1] * nd[1] + eps[2] * nd[2] * nd[2]
        if nn.val == 0.0 or math.copysign(1.0, nn.val) != space.normal_sign:
            raise WrongCausalClass(
                "normal scalar square has the wrong sign for the declared class")
        eta = [c / calc.jet_sqrt(space.normal_sign * nn) for c in nd]
        orientation = chart.orientation
        if callable(orientation):
            orientation = orientation(u, v)
        if orientation is None or isinstance(orientation, (int, float)):
            want = 1.0 if orientation is None else float(orientation)
            if abs(eta[2].val) < EQUATORIAL_TOL:
                raise EquatorialNormal("dual point would land on the degenerate set")
            sigma = 1.0 if math.copysign(1.0, eta[2].val) == math.copysign(1.0, want) \
                else -1.0
        else:
            ref = np.asarray(orientation, dtype=float)
            dot = sum(float(ref[a]) * eta[a].val for a in range(3))
            if abs(dot) <= 1e-12:
                raise OrientationUndefined("reference vector orthogonal to normal")
            sigma = math.copysign(1.0, dot)
        eta = [sigma * c for c in eta]
        if abs(eta[2].val) < EQUATORIAL_TOL:
            raise EquatorialNormal("dual point would land on the degenerate set")

        x1, x2, x3 = x
        q = x1 * x1 + x2 * x2
        if hyper_source:
            X0 = (q + x3 * x3 + 1.0) / (2.0 * x3)
            X3 = (q + x3 * x3 - 1.0) / (2.0 * x3)
        else:
            X0 = s_sheet * (q - x3 * x3 + 1.0) / (2.0 * x3)
            X3 = s_sheet * (q - x3 * x3 - 1.0) / (2.0 * x3)
        X1, X2 = x1 / x3, x2 / x3

        wdiff = X3 - X0
        v1 = eta[0] - X1 * eta[2]
        v2 = eta[1] - X2 * eta[2]
        d = eta[2] * wdiff
        s = ((X0 + X3) * d - 2.0 * (X1 * v1 + X2 * v2)) / wdiff
        v0 = 0.5 * (s + d)
        v3 = 0.5 * (s - d)
        if hyper_target and v0.val < 0.0:
            v0, v1, v2, v3 = -v0, -v1, -v2, -v3
        diff = v0 - v3
        sd = math.copysign(1.0, diff.val)
        p1 = v1 / (sd * diff)
        p2 = v2 / (sd * diff)
        p3 = 1.0 / (sd * diff)
        pos = np.array([p1.val, p2.val, p3.val])
        dpos = np.stack([p1.g, p2.g, p3.g])
        duu = np.stack([p1.h, p2.h, p3.h])
        return pos, dpos, duu

    return jet_fn


def _fd_polar_jet_fn(chart: calc.SurfaceChart, sheet_sign):
    """Fallback for charts without expression trees: exact first derivatives
    through the closed-form normal derivative, fourth-order differences of
    those for the second order."""

    def first_order(u, v):
        jet = calc.jet2_eval(chart, (u, v))
        orientation = chart.orientation
        if callable(orientation):
            orientation = orientation(u, v)
        bundle = forms.fundamental_forms(jet, chart.ambient, orientation)
        if abs(bundle.eta[2]) < EQUATORIAL_TOL:
            raise EquatorialNormal("dual point would land on the degenerate set")
        X, dX, V, dV, _ = _polar_pieces(bundle, jet, sheet_sign)
        return _half_space_of(V, dV)

    def jet_fn(u, v):
        pos, dpos = first_order(u, v)
        h = 1e-3 * max(1.0, abs(u), abs(v))
        duu = np.empty((3, 2, 2))
        for axis in range(2):
            step = (h, 0.0) if axis == 0 else (0.0, h)
            d = [first_order(u + k * step[0], v + k * step[1])[1]
                 for k in (-2, -1, 1, 2)]
            duu[:, :, axis] = (d[0] - 8.0 * d[1] + 8.0 * d[2] - d[3]) / (12.0 * h)
        duu = 0.5 * (duu + duu.transpose(0, 2, 1))
        return pos, dpos, duu

    return jet_fn


def polar_chart(chart: calc.SurfaceChart, sheet_sign=1) -> calc.SurfaceChart:
    """The polar variety as a chart over the source parameters.

    Charts built from expressions get exact dual jets (the polar map is
    differentiated by jet arithmetic); position-only sources fall back to
    finite differences of the exact first derivatives.
    """
    target = dual_space(chart.ambient)
    if getattr(chart.evaluator, "component_asts", None) is not None:
        jet_fn = _exact_polar_jet_fn(chart, sheet_sign)
    else:
        jet_fn = _fd_polar_jet_fn(chart, sheet_sign)
    return calc.SurfaceChart(chart.domain, calc.ClosedFormEvaluator(jet_fn=jet_fn),
                             target)


def polar_of_polar_minkowski(chart: calc.SurfaceChart, p, sheet_sign=1) -> np.ndarray:
    """Minkowski position of the second polar (normal of the dual surface).

    The dual surface's normal is computed from its own exact first
    derivatives, not assumed; double polarity predicts this equals the source
    position up to overall sign.
    """
    dual = polar_chart(chart, sheet_sign)
    jet = calc.jet2_eval(dual, p)
    bundle = forms.fundamental_forms(jet, dual.ambient)
    # The dual surface must be lifted on the branch its points actually
    # occupy; a de Sitter dual records that in the first polar point.
    first = polar_variety(chart, p, sheet_sign)
    branch = first.minkowski.branch_sign() or 1
    _, second = minkowski_normal(dual.ambient, jet.x, bundle.eta, branch)
    return second


# --------------------------------------------------------------------------
# Graph-level duality
# --------------------------------------------------------------------------

def graph_dualize(u, v, f, fu, fv, direction: str) -> amb.HalfSpacePoint:
    """Map one graph jet to the dual surface point.

    Directions: hyperbolic graph -> space-like de Sitter ('h3-to-ds3'),
    space-like de Sitter graph -> hyperbolic ('ds3-to-h3', needs gradient
    square < 1), time-like de Sitter graph -> time-like de Sitter
    ('ds3-timelike', needs gradient square > 1).
    """
    if f <= 0.0:
        raise NonPositiveHeight(f"graph height {f} is not positive")
    grad_sq = fu * fu + fv * fv
    if direction == H3_TO_DS3:
        return amb.HalfSpacePoint((-f * fu - u, -f * fv - v,
                                   f * math.sqrt(1.0 + grad_sq)))
    if direction == DS3_TO_H3:
        if grad_sq >= 1.0:
            raise CausalityViolation(
                f"gradient square {grad_sq:.6g} must be < 1 for this direction")
        return amb.HalfSpacePoint((f * fu - u, f * fv - v,
                                   f * math.sqrt(1.0 - grad_sq)))
    if direction == DS3_TIMELIKE:
        if grad_sq <= 1.0:
            raise CausalityViolation(
                f"gradient square {grad_sq:.6g} must be > 1 for this direction")
        return amb.HalfSpacePoint((f * fu - u, f * fv - v,
                                   f * math.sqrt(grad_sq - 1.0)))
    raise ValueError(f"unknown direction {direction!r}")


def _dual_graph_first(expr: calc.GraphExpr, u, v, direction):
    """Dual position and its exact first derivatives from the source 2-jet."""
    f, grad, hess = expr.jet(u, v)
    fu, fv = grad
    fuu, fuv, fvv = hess[0, 0], hess[0, 1], hess[1, 1]
    pos = graph_dualize(u, v, f, fu, fv, direction)
    half_dr = np.array([fu * fuu + fv * fuv, fu * fuv + fv * fvv])
    if direction == H3_TO_DS3:
        dp = np.array([[-fu * fu - f * fuu - 1.0, -fv * fu - f * fuv],
                       [-fu * fv - f * fuv, -fv * fv - f * fvv - 1.0]])
        r = math.sqrt(1.0 + fu * fu + fv * fv)
        dr = half_dr / r
    else:
        dp = np.array([[fu * fu + f * fuu - 1.0, fv * fu + f * fuv],
                       [fu * fv + f * fuv, fv * fv + f * fvv - 1.0]])
        if direction == DS3_TO_H3:
            r = math.sqrt(1.0 - fu * fu - fv * fv)
            dr = -half_dr / r
        else:
            r = math.sqrt(fu * fu + fv * fv - 1.0)
            dr = half_dr / r
    dw = np.array([fu, fv]) * r + f * dr
    first = np.vstack([dp, dw[None, :]])       # rows: dp1, dp2, dw
    return np.array(pos.coords), first


def dual_graph_jet(expr: calc.GraphExpr, p, direction: str):
    """Height of the dualized graph with gradient and Hessian in its own base.

    Second derivatives of the dual position come from central differences of
    the exact first derivatives; the chain rule then inverts the base map.
    """
    u, v = float(p[0]), float(p[1])
    pos, first = _dual_graph_first(expr, u, v, direction)
    h = 1e-5 * max(1.0, abs(u), abs(v))
    _, fp = _dual_graph_first(expr, u + h, v, direction)
    _, fm = _dual_graph_first(expr, u - h, v, direction)
    _, gp = _dual_graph_first(expr, u, v + h, direction)
    _, gm = _dual_graph_first(expr, u, v - h, direction)
    hess = np.empty((3, 2, 2))
    hess[:, :, 0] = (fp - fm) / (2.0 * h)
    hess[:, :, 1] = (gp - gm) / (2.0 * h)
    hess = 0.5 * (hess + hess.transpose(0, 2, 1))

    jac = first[:2]                        # d(p1, p2)/d(u, v)
    wgrad_uv = first[2]
    wgrad = np.linalg.solve(jac.T, wgrad_uv)
    correction = hess[2] - wgrad[0] * hess[0] - wgrad[1] * hess[1]
    jac_inv = np.linalg.inv(jac)
    whess = jac_inv.T @ correction @ jac_inv
    return float(pos[2]), wgrad, 0.5 * (whess + whess.T)


DUAL_PDE = {H3_TO_DS3: zoo.PDE_DS3, DS3_TO_H3: zoo.PDE_H3, DS3_TIMELIKE: zoo.PDE_DS3}


def graph_duality_residual(expr: calc.GraphExpr, p, direction: str) -> float:
    """Residual of the partner PDE on the dualized graph at p."""
    w, wgrad, whess = dual_graph_jet(expr, p, direction)
    return zoo.pde_residual_values(w, wgrad[0], wgrad[1],
                                   whess[0, 0], whess[0, 1], whess[1, 1],
                                   DUAL_PDE[direction])


# --------------------------------------------------------------------------
# Isometry fitting for dual family pairings
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometryFit:
    theta: float
    a: float
    b: float
    max_gap: float
    label: str = ""


def _height_64(params, _s1, _s2):
    a, b = abs(params["a"]), abs(params["b"])
    return lambda q1, q2: np.sqrt(a * a + q1 * q1) + np.sqrt(b * b + q2 * q2)


def _height_622(params, s1, _s2):
    c = abs(params["c"])
    return lambda q1, q2: s1 * q1 * q2 / np.sqrt(c * c + q2 * q2)


def _height_623(params, s1, s2):
    c1, c2 = abs(params["c1"]), abs(params["c2"])
    return lambda q1, q2: (s2 * c1 * c2 + s1 * q1 * q2) / np.sqrt(c1 * c1 + q2 * q2)


# Source family -> (target family, graph height of the target over its own
# base).  The sign switches absorb the target's parameter-sign freedom, which
# depends on the sampled patch.
PAIRINGS = {
    "translational-6.6": ("translational-6.4", _height_64, ((1, 1),)),
    "ruled-6.7": ("ruled-6.2-2", _height_622, ((1, 1), (-1, 1))),
    "ruled-6.8": ("ruled-6.2-3", _height_623,
                  ((1, 1), (1, -1), (-1, 1), (-1, -1))),
}


def fit_family_pairing(source_key: str, params=None, count=100, seed=0):
    """Fit the known dual partner of a family to its sampled polar points.

    Returns (target_key, IsometryFit); the fit's max_gap bounds the
    point-to-surface distance after the horizontal isometry.
    """
    if source_key not in PAIRINGS:
        raise ValueError(f"no recorded dual partner for family {source_key!r}")
    target_key, height_builder, sign_choices = PAIRINGS[source_key]
    chart = zoo.make_surface(source_key, params)
    merged = zoo.resolve_params(zoo.get_family(source_key), params)
    rng = np.random.default_rng(seed)
    pts = np.array([polar_variety(chart, p).position.coords
                    for p in chart.interior_points(count, rng, margin_frac=0.1)])
    best = None
    for s1, s2 in sign_choices:
        fit = fit_isometry(pts, height_builder(merged, s1, s2),
                           label=f"signs ({s1:+d}, {s2:+d})")
        if best is None or fit.max_gap < best.max_gap:
            best = fit
    return target_key, best


def fit_isometry(points: np.ndarray, height_fn, thetas=(math.pi / 2, -math.pi / 2),
                 label="") -> IsometryFit:
    """Fit the horizontal isometry mapping a target graph onto given points.

    ``height_fn(q1, q2)`` is the target surface's height over its own base
    coordinates; the fit searches the given rotation angles with continuous
    translation (a, b) by least squares and reports the largest vertical gap,
    an upper bound for the point-to-surface distance.
    """
    pts = np.asarray(points, dtype=float)

    def gaps(params, theta):
        a, b = params
        c, s = math.cos(theta), math.sin(theta)
        q1 = (pts[:, 0] - a) * c + (pts[:, 1] - b) * s
        q2 = -(pts[:, 0] - a) * s + (pts[:, 1] - b) * c
        return pts[:, 2] - height_fn(q1, q2)

    best = None
    for theta in thetas:
        try:
            res = least_squares(gaps, x0=np.zeros(2), args=(theta,),
                                xtol=1e-15, ftol=1e-15, gtol=1e-15)
        except (ValueError, FloatingPointError):
            continue
        gap = float(np.abs(gaps(res.x, theta)).max())
        if best is None or gap < best.max_gap:
            best = IsometryFit(theta, float(res.x[0]), float(res.x[1]), gap, label)
    if best is None:
        raise ValueError("no rotation angle produced a finite fit")
    return best
