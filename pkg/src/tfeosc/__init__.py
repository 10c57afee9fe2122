"""tfeosc: oscillatory interface structures of a doubly degenerate
fifth-order thin-film ODE.

Subpackages by concern:

* polyroots  - polynomial arithmetic and certified real-root isolation
* params     - exponent algebra, explicit power solutions, regularity
* m1exact    - exact piecewise-polynomial profiles at m = 1 (alpha = 0)
* odeflow    - system right-hand sides, chart transforms, integration
* orbits     - periodic-orbit detection, Floquet analysis, continuation
* identities - sign-interval computation and integral identities
* cli        - reproducible command-line experiments
"""

from . import cli, identities, m1exact, odeflow, orbits, params, polyroots  # noqa: F401
from .errors import (BracketInvalid, MatchingFailure, NewtonDiverged,  # noqa: F401
                     NoConvergence, NoPositiveSolution, NoSettling, OutOfRange,
                     RootCountMismatch, SingularState, StepUnderflow,
                     TfeoscError, UnresolvedCluster)

__version__ = "0.1.0"
