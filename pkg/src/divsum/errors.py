"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`DivsumError`;
the CLI maps them to exit code 3.
"""


class DivsumError(Exception):
    """Base class for domain and analysis errors."""

    reason = "analysis error"

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "reason": self.reason, "detail": str(self)}


class DegreeCapExceeded(DivsumError):
    reason = "degree cap exceeded"


class RootFindingError(DivsumError):
    reason = "root iteration did not converge"

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)


class WindowExhausted(DivsumError):
    reason = "window exhausted"


class NoConvergenceCertificate(DivsumError):
    reason = "tail of the window does not certify convergence"


class NotConvergent(DivsumError):
    reason = "partial sums fail the Cauchy criterion on the window"


class NotRecurrentOnWindow(DivsumError):
    reason = "no linear recurrence of admissible degree annihilates the window"


class InconsistentDecomposition(DivsumError):
    reason = "the polynomial does not annihilate the window"


class NotSummable(DivsumError):
    reason = "1 ∈ spec(x): the series is not summable"


class PoleAtOne(NotSummable):
    reason = "1 ∈ spec(x): the generating function has a pole at t = 1"


class AmbiguousSpectrum(DivsumError):
    reason = "an approximate spectral point lies too close to 1 to decide"


class NotC1Summable(DivsumError):
    reason = "Cesàro means fail the Cauchy criterion on the window"


class NotPeriodic(DivsumError):
    reason = "window is not periodic with the given period"


class NonzeroPeriodSum(NotSummable):
    reason = "1 ∈ spec(x): the period sum is nonzero"


class NotInQ1(DivsumError):
    reason = "subspace is not contained in Q1"


class AlreadyExtendable(DivsumError):
    reason = "θ(1) ≠ 0: no regularization needed"


class MeanNonzero(DivsumError):
    reason = "observable has nonzero mean; zero mean is necessary for a measurable solution"


class ZeroInput(DivsumError):
    reason = "zero observable"


class HypothesisViolation(DivsumError):
    reason = "frequencies do not lie in distinct q-orbits"


class NotASolution(DivsumError):
    reason = "psi does not solve the cohomological equation"
