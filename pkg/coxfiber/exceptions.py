class CoxFiberError(Exception):
    """Base class for all errors."""


class CoxFiberInvalidError(CoxFiberError):
    """Invalid information provided."""


class CoxFiberCheckError(CoxFiberError):
    """A mathematical check did not pass."""


class MalformedInput(CoxFiberInvalidError):
    """A file or value does not follow the fan or morphism format."""


class DimensionMismatch(CoxFiberInvalidError):
    """Vectors or matrices of incompatible sizes were combined."""


class NonPrimitiveRay(CoxFiberInvalidError):
    """A ray generator is zero or not primitive."""


class DuplicateRay(CoxFiberInvalidError):
    """Two ray generators of a fan coincide."""


class NotStronglyConvex(CoxFiberInvalidError):
    """A cone of a fan contains a line."""


class RedundantGenerator(CoxFiberInvalidError):
    """A listed generator of a cone does not span one of its faces."""


class BadIntersection(CoxFiberInvalidError):
    """Two cones of a fan do not meet in a common face.

    The offending pair of cone indices is stored in ``cones``.
    """

    def __init__(self, message, cones=None):
        super().__init__(message)
        self.cones = cones


class Incompatible(CoxFiberInvalidError):
    """A lattice map does not send every source cone into a target cone.

    The source cone index and the ray index of the witness generator are stored
    in ``cone`` and ``ray``.
    """

    def __init__(self, message, cone=None, ray=None):
        super().__init__(message)
        self.cone = cone
        self.ray = ray


class TorusFactor(CoxFiberInvalidError):
    """The rays of a fan do not span, so there are non-constant units."""


class BadWeights(CoxFiberInvalidError):
    """Weights do not define a weighted projective space."""


class NoSolution(CoxFiberCheckError):
    """An integer linear system has no integer solution."""


class SearchExhausted(CoxFiberCheckError):
    """A randomized search gave up after its retry bound."""


class Mismatch(CoxFiberCheckError):
    """Two groups that should be isomorphic are not.

    Both normal forms are stored in ``groups``.
    """

    def __init__(self, message, groups=None):
        super().__init__(message)
        self.groups = groups


class TorsionVertical(CoxFiberCheckError):
    """The group of vertical classes has torsion."""


class NoMonomialUnit(CoxFiberCheckError):
    """No monomial of the required degree is supported on vertical rays."""


class GradingError(CoxFiberCheckError):
    """The fiber ray assignment does not give a grading isomorphism.

    The offending class is stored in ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotWellDefined(GradingError):
    """The assignment does not respect relations."""


class NotInjective(GradingError):
    """The assignment has a nonzero kernel."""


class NotSurjective(GradingError):
    """The assignment misses part of the target."""


class InfiniteDimension(CoxFiberCheckError):
    """A graded piece is not finite dimensional."""


class HypothesisFailed(CoxFiberCheckError):
    """Hypotheses of the fiber space theorem are not met.

    The names of the failing hypotheses are stored in ``failed``.
    """

    def __init__(self, message, failed=None, checks=None):
        super().__init__(message)
        self.failed = failed or []
        self.checks = checks or []


class PrerequisiteFailed(HypothesisFailed):
    """The blow-up ledger cannot be built because hypotheses fail."""
