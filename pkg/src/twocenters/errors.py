"""Exception and warning types shared across the package."""


class TwoCentersError(Exception):
    """Base class for all errors raised by :mod:`twocenters`."""


class FocusCollision(TwoCentersError):
    """A position lies (numerically) on one of the fixed centers."""


class DegenerateChart(TwoCentersError):
    """A chart map or momentum lift is not invertible at the given point."""


class DomainError(TwoCentersError, ValueError):
    """An argument lies outside the domain of a separated-chart function."""


class OutOfScope(TwoCentersError):
    """The request concerns negative energies, which are not classified."""


class NonPositiveEnergy(TwoCentersError):
    """Integration was requested for a state with E < 0."""


class OnBifurcationCurve(TwoCentersError):
    """A regular (E, K) value was required but the point lies on a curve."""


class NoSectionRule(TwoCentersError):
    """No transversal section rule applies to the interval pattern."""


class IntegratorDefect(TwoCentersError):
    """The integrated motion contradicts the exact classification."""


class ConsistencyWarning(RuntimeWarning):
    """Two mathematically identical evaluations disagree beyond tolerance."""
