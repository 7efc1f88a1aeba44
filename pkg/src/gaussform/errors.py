"""Exception hierarchy shared by all gaussform modules."""


class GaussformError(Exception):
    """Base class for every error raised by this package."""


# -- ambient ---------------------------------------------------------------

class NonPositiveHeight(GaussformError):
    """Point left the upper half-space (last coordinate <= 0)."""


class DegenerateSet(GaussformError):
    """Minkowski point lies on the X0 = X3 slice, which has no half-space chart."""


class QuadricViolation(GaussformError):
    """Coordinates do not satisfy their quadric equation within tolerance."""


# -- calculus (expressions and jets) ---------------------------------------

class ParseError(GaussformError):
    """Expression text could not be parsed.

    Carries the byte offset of the failure and the set of tokens that would
    have been accepted there.
    """

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected one of: {', '.join(sorted(expected))})" if expected else ""))
        self.offset = offset
        self.expected = frozenset(expected)


class DomainError(GaussformError):
    """Expression evaluated outside its real domain (log of nonpositive, etc.)."""


class EvaluationError(GaussformError):
    """Expression produced a non-finite value."""


class OutsideDomain(GaussformError):
    """Parameter point is not interior to the chart's rectangle."""


class NonImmersed(GaussformError):
    """First partials are metrically degenerate at the requested point."""


class HeightViolation(GaussformError):
    """Evaluated surface point has nonpositive height."""


# -- forms -----------------------------------------------------------------

class WrongCausalClass(GaussformError):
    """Signature of the induced metric contradicts the declared causal class."""


class OrientationUndefined(GaussformError):
    """Normal orientation tie-break needed at a point with vanishing last
    normal component and no override supplied."""


# -- gaussmaps -------------------------------------------------------------

class UnitCircleSingularity(GaussformError):
    """Stereographic inverse requested on the excluded circle |g| = 1."""


class InfiniteG(GaussformError):
    """Far Gauss map undefined: the normal geodesic ends at infinity."""


# -- duality ---------------------------------------------------------------

class EquatorialNormal(GaussformError):
    """Dual point would fall on the degenerate set (normal has eta_3 = 0)."""


class BranchPoint(GaussformError):
    """Curvature transfer requested exactly at a branch point."""


class CausalityViolation(GaussformError):
    """Graph gradient violates the causal constraint of the requested duality."""


# -- zoo -------------------------------------------------------------------

class UnknownFamily(GaussformError):
    """No registered surface family under that name."""


class ParamConstraint(GaussformError):
    """Family parameters violate a stated constraint."""


class DomainConstraint(GaussformError):
    """Requested parameter rectangle leaves the family's valid region."""


# -- weierstrass -----------------------------------------------------------

class UnitModulusSingularity(GaussformError):
    """Normal-map field too close to |g| = 1 for the compatibility operator."""


class ConstraintViolation(GaussformError):
    """Field violates its modulus constraint."""


class SingularSystem(GaussformError):
    """Linear system factorization failed; carries the pivot location if known."""

    def __init__(self, message, pivot=None):
        super().__init__(message if pivot is None else f"{message} (pivot {pivot})")
        self.pivot = pivot


class NonRealHeight(GaussformError):
    """Kept sample produced a height with too large an imaginary part."""


class EmptyOutput(GaussformError):
    """Every sample of a built surface was dropped."""


class DegenerateInput(GaussformError):
    """Field data is constant where the construction needs a nonconstant map."""


# -- cli / io --------------------------------------------------------------

class EmptyGrid(GaussformError):
    """Mesh export requested for an empty sample grid."""
