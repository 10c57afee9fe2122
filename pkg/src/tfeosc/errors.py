"""Exception taxonomy shared by all tfeosc modules.

Each class marks one failure mode of the numerical machinery; CLI exit codes
are derived from these (see cli.EXIT_CODES).
"""


class TfeoscError(Exception):
    """Base class for all package errors."""


class OutOfRange(TfeoscError):
    """Parameters outside the admissible (m, n) range, or an exponent
    outside the hypothesis of the formula being evaluated."""


class NoPositiveSolution(TfeoscError):
    """The monomial amplitude formula has a non-positive base for these
    exponents; no single-signed power solution exists."""


class NoConvergence(TfeoscError):
    """An iterative solver stalled above its tolerance within its cap."""


class UnresolvedCluster(TfeoscError):
    """Root isolation could not certify a sign at a separation point;
    usually signals a multiple root or a root at a subdivision node."""


class RootCountMismatch(TfeoscError):
    """A certified root count disagrees with the count required by the
    construction (e.g. the matching determinant must have exactly two
    roots in (0, 1))."""


class MatchingFailure(TfeoscError):
    """A piecewise profile violates its junction smoothness conditions,
    or the scaling ratio is inconsistent with the requested sign."""


class SingularState(TfeoscError):
    """The unregularized nonlinearity was evaluated at a singular point
    (zero state with negative exponent and no regularization)."""


class StepUnderflow(TfeoscError):
    """The adaptive integrator collapsed below the minimum step size;
    signals a genuine singularity of the trajectory."""


class NoSettling(TfeoscError):
    """Forward integration did not settle onto a periodic orbit within
    the allotted window (expected for orbits unstable as s -> +inf)."""


class NewtonDiverged(TfeoscError):
    """Periodic-orbit shooting failed to converge within its iteration
    cap, trust region, or conditioning limits."""


class BracketInvalid(TfeoscError):
    """A continuation bracket whose lower end does not carry a certified
    orbit."""
