"""Stereographic normal Gauss map and the far (ideal-boundary) Gauss map.

The frame-translated unit normal eta lives on the unit sphere (hyperbolic
ambient) or on the two-sheeted unit hyperboloid (space-like surfaces in de
Sitter space).  Stereographic projection from (0, 0, 1) sends it to the
extended complex plane; in the de Sitter case the image avoids the unit
circle and the sheet is read off the modulus (|g| > 1 on the eta_3 > 0
sheet).  The far Gauss map of a surface point is the ideal endpoint of the
oriented normal geodesic, with closed form G = x1 + i x2 + x3 g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ambient as amb
from .errors import InfiniteG, QuadricViolation, UnitCircleSingularity

QUADRIC_TOL = 1e-9
POLE_TOL = 1e-14
UNIT_CIRCLE_TOL = 1e-9


class _Infinity:
    """The point at infinity of the extended complex plane (tagged, not a float)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(value) -> bool:
    return value is INFINITY


BRANCH_ETA_POS = "eta_pos"
BRANCH_ETA_NEG = "eta_neg"
BRANCH_UNBRANCHED = "unbranched"


def branch_of(eta) -> str:
    """Sheet tag from the sign of the last normal component.

    Time-like surfaces can hit eta_3 = 0, where neither sheet applies; the
    tag degrades to unbranched there.
    """
    e3 = float(eta[2])
    if e3 > 0.0:
        return BRANCH_ETA_POS
    if e3 < 0.0:
        return BRANCH_ETA_NEG
    return BRANCH_UNBRANCHED


def _quadric_defect(eta, space):
    e1, e2, e3 = float(eta[0]), float(eta[1]), float(eta[2])
    if space.kind is amb.Kind.HYPERBOLIC:
        return abs(e1 * e1 + e2 * e2 + e3 * e3 - 1.0)
    return abs(e1 * e1 + e2 * e2 - e3 * e3 + 1.0)


def stereo_project(eta, space: amb.AmbientSpace):
    """Stereographic image g = (eta_1 + i eta_2)/(1 - eta_3), or INFINITY.

    ``eta`` must sit on the unit sphere (hyperbolic case) or on the unit
    two-sheeted hyperboloid (space-like de Sitter case) to 1e-9.
    """
    defect = _quadric_defect(eta, space)
    if defect > QUADRIC_TOL:
        raise QuadricViolation(f"normal misses its quadric by {defect:.3e}")
    e1, e2, e3 = float(eta[0]), float(eta[1]), float(eta[2])
    denom = 1.0 - e3
    if abs(denom) < POLE_TOL:
        return INFINITY
    return complex(e1, e2) / denom


def stereo_unproject(g, space: amb.AmbientSpace):
    """Inverse stereographic projection back to the normal quadric.

    For de Sitter space the unit circle |g| = 1 has no preimage and raises
    UnitCircleSingularity.
    """
    if space.kind is amb.Kind.HYPERBOLIC:
        if is_infinity(g):
            return np.array([0.0, 0.0, 1.0])
        g = complex(g)
        m2 = abs(g) ** 2
        return np.array([2.0 * g.real, 2.0 * g.imag, m2 - 1.0]) / (m2 + 1.0)
    if is_infinity(g):
        return np.array([0.0, 0.0, 1.0])
    g = complex(g)
    m2 = abs(g) ** 2
    if abs(abs(g) - 1.0) <= UNIT_CIRCLE_TOL:
        raise UnitCircleSingularity(f"|g| = {abs(g)} is on the excluded circle")
    return np.array([2.0 * g.real, 2.0 * g.imag, -(1.0 + m2)]) / (1.0 - m2)


def far_gauss_map(x, g):
    """Ideal endpoint G = x1 + i x2 + x3 g of the oriented normal geodesic.

    ``x`` is a half-space point (sequence of three coordinates).  INFINITY in
    raises InfiniteG: the geodesic ends at the point at infinity.
    """
    if is_infinity(g):
        raise InfiniteG("normal geodesic ends at the ideal point at infinity")
    coords = x.coords if isinstance(x, amb.HalfSpacePoint) else x
    x1, x2, x3 = (float(c) for c in coords)
    return complex(x1, x2) + x3 * complex(g)


def relabel_far_map(value, branch: str):
    """Sign relation between the de Sitter and hyperbolic far maps.

    On the eta_3 > 0 sheet the two maps are negatives of each other; on the
    eta_3 < 0 sheet they agree.  The relation is an involution, so the same
    helper converts either way.
    """
    if branch == BRANCH_ETA_POS:
        return -value
    if branch == BRANCH_ETA_NEG:
        return value
    raise ValueError(f"no sign relation for branch {branch!r}")


@dataclass(frozen=True)
class GaussData:
    """Normal, its stereographic image, and the far Gauss map at one point."""

    eta: object
    g: object               # complex or INFINITY
    far: object             # complex, or None when g is INFINITY
    branch: str


def gauss_data(x, eta, space: amb.AmbientSpace) -> GaussData:
    g = stereo_project(eta, space)
    far = None if is_infinity(g) else far_gauss_map(x, g)
    return GaussData(eta, g, far, branch_of(eta))
