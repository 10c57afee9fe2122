"""Exponent algebra for the doubly degenerate fifth-order interface ODE.

The near-interface reduction of the sixth-order thin film equation
u_t = (|u|^m |u_xxxxx|^n u_xxxxx)_x is

    f^(5) = -lam * |f|^(alpha-1) f,   alpha = (1-m)/(1+n),   lam = +-1,

with the envelope power mu = 5/(1-alpha) = 5(n+1)/(m+n). This module holds
the (m, n, lam) bookkeeping, the explicit single-signed power solution, the
interface regularity classification, and the inverse-function fixed-point
construction of the positive solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NoPositiveSolution, OutOfRange

MU_REL_TOL = 1e-12


@dataclass(frozen=True)
class PowerParams:
    """The (m, n, lam) triple with all derived exponents.

    alpha = (1-m)/(1+n)        nonlinearity exponent, in (-1, 1)
    mu    = 5(n+1)/(m+n)       interface envelope power, equals 5/(1-alpha)
    beta  = 1/(6+m+n)          self-similar time exponent (mass-preserving)
    gamma_scale = 6/(m+n)      scaling-group exponent of the self-similar profile
    """

    m: float
    n: float
    lam: int
    alpha: float
    mu: float
    beta: float
    gamma_scale: float


def derive(m: float, n: float, lam: int) -> PowerParams:
    """Validate (m, n) and populate every derived exponent.

    Admissible range: n > -1 and m in the open interval (-n, n+2); this is
    exactly where alpha lands in (-1, 1) and m+n > 0.
    """
    if lam not in (+1, -1):
        raise OutOfRange(f"lam must be +1 or -1, got {lam!r}")
    if not (n > -1.0):
        raise OutOfRange(f"need n > -1, got n={n}")
    if not (-n < m < n + 2.0):
        raise OutOfRange(f"need m in (-n, n+2) = ({-n}, {n + 2}), got m={m}")
    alpha = (1.0 - m) / (1.0 + n)
    mu = 5.0 * (n + 1.0) / (m + n)
    mu_alt = 5.0 / (1.0 - alpha)
    if abs(mu - mu_alt) > MU_REL_TOL * abs(mu):
        raise AssertionError(f"mu forms disagree: {mu} vs {mu_alt}")
    return PowerParams(
        m=float(m), n=float(n), lam=int(lam),
        alpha=alpha, mu=mu,
        beta=1.0 / (6.0 + m + n),
        gamma_scale=6.0 / (m + n),
    )


def equilibrium_product(mu: float) -> float:
    return mu * (mu - 1.0) * (mu - 2.0) * (mu - 3.0) * (mu - 4.0)


def phi0(p: PowerParams) -> float:
    """Amplitude of the exact single-signed solution f0(y) = phi0 * y^mu.

    lam=-1 admits it for mu in (4, inf), (2, 3), (0, 1); lam=+1 for mu in
    (1, 2), (3, 4). Outside, the base 1/(mu(mu-1)...(mu-4)) (negated for
    lam=+1) is non-positive and no real power applies.
    """
    prod = equilibrium_product(p.mu)
    if prod == 0.0:
        raise NoPositiveSolution(f"mu={p.mu} is an integer in 0..4; amplitude undefined")
    base = (1.0 / prod) if p.lam == -1 else (-1.0 / prod)
    if base <= 0.0:
        raise NoPositiveSolution(
            f"no single-signed power solution at mu={p.mu}, lam={p.lam:+d}: base={base:.3e}"
        )
    # (n+1)/(m+n) == mu/5
    return base ** (p.mu / 5.0)


@dataclass(frozen=True)
class RegularityClass:
    cp_class: str  # "C4" | "C3" | "C2" | "below"
    fbp_gamma: float
    fbp_valid: bool


def classify_regularity(m: float, n: float) -> RegularityClass:
    """Interface smoothness of the zero-extended solution.

    Thresholds in m at fixed n (lower bound inclusive on the less smooth
    side): C4 below (n+5)/4, C3 below (2n+5)/3, C2 below (3n+5)/2, else
    "below". The free-boundary expansion exponent (8+5n-3m)/(n+1) is
    reported always; it supports a C^2 free-boundary solution iff > 3.
    """
    if m < (n + 5.0) / 4.0:
        cp = "C4"
    elif m < (2.0 * n + 5.0) / 3.0:
        cp = "C3"
    elif m < (3.0 * n + 5.0) / 2.0:
        cp = "C2"
    else:
        cp = "below"
    g = (8.0 + 5.0 * n - 3.0 * m) / (n + 1.0)
    return RegularityClass(cp_class=cp, fbp_gamma=g, fbp_valid=g > 3.0)


def scaling_exponents(m: float, n: float) -> dict[str, float]:
    """Scaling-group exponents kappa such that a^kappa F(y/a) maps solutions
    to solutions.

    "tw": the traveling-wave form |f|^m |f^(5)|^n f^(5) = -lam f; kappa = mu.
    "source": the self-similar form with the +beta*F*y term; kappa =
    (5n+6)/(m+n), which reduces to 6/m at n = 0.
    """
    return {
        "tw": 5.0 * (n + 1.0) / (m + n),
        "source": (5.0 * n + 6.0) / (m + n),
    }


@dataclass
class FixedPointResult:
    f: np.ndarray          # ascending grid on (0, f_max]
    y: np.ndarray          # fixed-point iterate y(f)
    iterations: int
    final_delta: float     # sup-relative change of the last update


def _inverse_operator(f: np.ndarray, y: np.ndarray, alpha: float, mu: float) -> np.ndarray:
    """One application of the inverse-function integral operator.

    Three cumulative integrations of f^alpha against dy give the second
    derivative composed with y; one plain integration and a square root give
    u = f'(y(f)); y_new integrates 1/u. Heads on (0, f_0] use the local
    power exponents (integrands are power-like at 0; y ~ f^(1/mu)).
    """
    V = f ** alpha
    a = alpha
    for _ in range(3):
        dV = 0.5 * (V[1:] + V[:-1]) * np.diff(y)
        head = V[0] * y[0] * (1.0 / mu) / (a + 1.0 / mu)
        V = np.concatenate(([0.0], np.cumsum(dV))) + head
        a += 1.0 / mu
    dR = 0.5 * (V[1:] + V[:-1]) * np.diff(f)
    integral = np.concatenate(([0.0], np.cumsum(dR))) + V[0] * f[0] / (a + 1.0)
    u = np.sqrt(2.0 * np.abs(integral))
    g = 1.0 / u
    dg = 0.5 * (g[1:] + g[:-1]) * np.diff(f)
    return np.concatenate(([0.0], np.cumsum(dg))) + mu * f[0] * g[0]


def fixed_point_positive(
    p: PowerParams,
    f_max: float,
    tol: float = 1e-10,
    grid_points: int = 12000,
    f_min_rel: float = 1e-12,
    relax: float = 0.4,
    max_iter: int = 200,
) -> FixedPointResult:
    """Damped successive approximation for the inverse function y(f) of the
    strictly increasing positive solution, on a geometric grid clustered at 0.

    Requires alpha in (0, 1) (i.e. m in (0, 1)) and lam = -1; the integrals
    defining the operator diverge otherwise. The undamped map multiplies a
    relative perturbation of the fixed point by -3/2 along the scaling
    family (theta*y -> theta^(-3/2)*y), so plain iteration oscillates and
    diverges; the 0.4-damped update has linear rate |1 - 2.5*relax| = 0
    along that family and converges from the deliberately scaled initial
    iterate 2*(f/phi0)^(1/mu).
    """
    if p.lam != -1:
        raise NoConvergence("inverse-function construction requires lam = -1")
    if not (0.0 < p.alpha < 1.0):
        raise NoConvergence(
            f"operator integrals require alpha in (0,1), got alpha={p.alpha}; "
            "equivalently m in (0,1)"
        )
    if f_max <= 0 or tol <= 0:
        raise ValueError("f_max and tol must be positive")

    q = f_min_rel ** (1.0 / grid_points)
    f = f_max * q ** np.arange(grid_points, -1, -1.0)
    amp = phi0(p)
    y = 2.0 * (f / amp) ** (1.0 / p.mu)

    delta = np.inf
    for it in range(1, max_iter + 1):
        y_new = _inverse_operator(f, y, p.alpha, p.mu)
        y_next = (1.0 - relax) * y + relax * y_new
        delta = float(np.max(np.abs(y_next - y)) / np.max(np.abs(y)))
        y = y_next
        if not math.isfinite(delta):
            raise NoConvergence(f"iteration diverged (delta={delta}) at step {it}")
        if delta < tol:
            if np.any(np.diff(y) <= 0.0):
                raise NoConvergence("fixed point is not strictly increasing")
            return FixedPointResult(f=f, y=y, iterations=it, final_delta=delta)
    raise NoConvergence(f"stalled at delta={delta:.3e} after {max_iter} iterations")
