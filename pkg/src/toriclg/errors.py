"""Exception types shared across the package.

Errors that have an obvious builtin counterpart subclass it, so callers may
catch either the specific type or the familiar builtin.
"""


class ToricLGError(Exception):
    """Base class for all package-specific errors."""


class NotInLambdaZero(ToricLGError, ValueError):
    """A series with negative-exponent terms was passed where one in the
    valuation-nonnegative subring was required."""


class ZeroLeadingCoefficient(ToricLGError, ZeroDivisionError):
    """Inversion, exp or log hit a series whose leading data is zero."""


class InvalidPolytope(ToricLGError, ValueError):
    """Facet data fails validation (unbounded, non-simple, non-unimodular,
    redundant, or empty interior)."""


class UnknownName(ToricLGError, KeyError):
    """Catalog lookup with an unrecognised entry name."""


class ParamOutOfRange(ToricLGError, ValueError):
    """Catalog parameters outside their admissible open ranges."""


class CorrectionNotPositive(ToricLGError, ValueError):
    """A higher-order correction term whose extra T-power is not > 0."""


class OutsideDomain(ToricLGError, ValueError):
    """Evaluation point whose valuation vector does not lie in the polytope."""


class DimensionUnsupported(ToricLGError, ValueError):
    """Problem dimension beyond what the solvers handle."""


class PositiveDimensionalInitialLocus(ToricLGError):
    """The leading-coefficient system has a positive-dimensional solution set;
    isolated-root machinery does not apply."""


class EliminationFailed(ToricLGError):
    """Resultant elimination could not reduce the system to one variable."""


class SingularInitialJacobian(ToricLGError):
    """Newton lifting started from a root with singular leading Jacobian."""


class NoConvergence(ToricLGError):
    """Iteration budget exhausted before the residual reached the target
    order."""


class NotInterior(ToricLGError, ValueError):
    """A fiber position on or outside the polytope boundary where an interior
    point is required."""


class IntegralityFailure(ToricLGError):
    """Change-of-basis data that must be integral came out fractional; the
    adapted basis construction is broken for this input."""


class LevelUnderdetermined(ToricLGError):
    """A level subsystem is neither square nor vacuous after removing
    monomial units; the cascade cannot continue."""


class NotMorse(ToricLGError):
    """An operation requiring nondegenerate critical points met a degenerate
    one."""


class SingularHessian(ToricLGError):
    """Hessian determinant is zero to working precision."""


class UnresolvedMultiplicities(ToricLGError):
    """Critical point counting had leftover cells or unresolved multiplicity
    labels; only an inequality check is meaningful."""
