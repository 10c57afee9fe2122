"""Right-hand sides and integration contracts for the three dynamical systems:

* the physical interface ODE in first-order system form (f, f', f'', f''', h),
  where h accumulates the integral of the non-Lipschitz term so that the
  term is never differentiated;
* the rescaled oscillatory-component system for phi(s), f = y^mu phi(ln y),
  driven by the constant-coefficient operator
      L5(phi) = phi^(5) + a4 phi^(4) + a3 phi''' + a2 phi'' + a1 phi' + a0 phi
  with the closed-form coefficients below;
* the third-order analogue (fourth-order thin film case)
      L3(phi) = phi''' + b2 phi'' + b1 phi' + b0 phi.

Integration is delegated to scipy's embedded RK 5(4) pair with dense output;
events (zero crossings of phi and of phi') are refined on the dense
interpolant by scipy's brentq-based event machinery.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import SingularState, StepUnderflow
from .polyroots import Polynomial

DEFAULT_ABS_TOL = 1e-11
DEFAULT_REL_TOL = 1e-11
DEFAULT_REG_EPS = 1e-10


# ---------------------------------------------------------------------------
# operator coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffSet:
    """Coefficients of the linear operator, highest derivative first after
    the (implicit, unit) leading term: order 5 carries (a4, a3, a2, a1, a0),
    order 3 carries (b2, b1, b0)."""

    order: int
    coeffs: tuple[float, ...]

    def char_poly(self) -> Polynomial:
        """Characteristic polynomial in rho, lowest degree first."""
        return Polynomial(tuple(reversed(self.coeffs)) + (1.0,))


def coeffs_p5(mu: float) -> CoeffSet:
    """Closed forms of the fifth-order coefficients at envelope power mu.

    Identical to the elementary symmetric functions of {mu, mu-1, ..., mu-4}:
    the characteristic polynomial is (rho+mu)(rho+mu-1)...(rho+mu-4), so the
    eigenvalues of the linearization are rho_k = k - mu, k = 0..4.
    """
    a4 = 5.0 * (mu - 2.0)
    a3 = 5.0 * (2.0 * mu * mu - 8.0 * mu + 7.0)
    a2 = 5.0 * (mu - 2.0) * (2.0 * mu * mu - 8.0 * mu + 5.0)
    a1 = 5.0 * mu ** 4 - 40.0 * mu ** 3 + 105.0 * mu * mu - 100.0 * mu + 24.0
    a0 = mu * (mu - 1.0) * (mu - 2.0) * (mu - 3.0) * (mu - 4.0)
    return CoeffSet(order=5, coeffs=(a4, a3, a2, a1, a0))


def coeffs_p3(mu: float) -> CoeffSet:
    """Third-order analogue; characteristic roots are k - mu, k = 0..2."""
    b2 = 3.0 * (mu - 1.0)
    b1 = 3.0 * mu * mu - 6.0 * mu + 2.0
    b0 = mu * (mu - 1.0) * (mu - 2.0)
    return CoeffSet(order=3, coeffs=(b2, b1, b0))


def char_poly_product(mu: float, order: int = 5) -> Polynomial:
    """Independent construction of the characteristic polynomial as the
    expanded product of (rho + mu - k); anchors the closed forms."""
    p = Polynomial((1.0,))
    for k in range(order):
        p = p * Polynomial((mu - k, 1.0))
    return p


def companion(cs: CoeffSet) -> np.ndarray:
    n = cs.order
    A = np.zeros((n, n))
    for i in range(n - 1):
        A[i, i + 1] = 1.0
    A[n - 1, :] = [-c for c in reversed(cs.coeffs)]
    return A


# ---------------------------------------------------------------------------
# regularized nonlinearity
# ---------------------------------------------------------------------------

def nonlinearity(phi: float, alpha: float, reg_eps: float) -> float:
    """|phi|^(alpha-1) * phi with even regularization (phi^2+eps^2)^((alpha-1)/2)*phi.

    At reg_eps = 0: exact for alpha > 0, the odd sign(0)=0 convention at
    alpha = 0, and SingularState at phi = 0 for alpha < 0.
    """
    if reg_eps > 0.0:
        return (phi * phi + reg_eps * reg_eps) ** (0.5 * (alpha - 1.0)) * phi
    if phi == 0.0:
        if alpha > 0.0:
            return 0.0
        if alpha == 0.0:
            return 0.0  # odd extension
        raise SingularState("unregularized |phi|^(alpha-1)*phi at phi=0 with alpha<0")
    return abs(phi) ** (alpha - 1.0) * phi


def nonlinearity_deriv(phi: float, alpha: float, reg_eps: float) -> float:
    """d/dphi of the regularized nonlinearity: (phi^2+eps^2)^((alpha-3)/2) (alpha phi^2 + eps^2)."""
    if reg_eps > 0.0:
        q = phi * phi + reg_eps * reg_eps
        return q ** (0.5 * (alpha - 3.0)) * (alpha * phi * phi + reg_eps * reg_eps)
    if phi == 0.0:
        if alpha > 1.0:
            return 0.0
        raise SingularState("unregularized nonlinearity derivative at phi=0")
    return alpha * abs(phi) ** (alpha - 1.0)


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------

def make_phi_rhs(mu: float, alpha: float, lam: int, reg_eps: float = DEFAULT_REG_EPS,
                 order: int = 5) -> Callable:
    """Companion-form RHS of L(phi) = -lam |phi|^(alpha-1) phi.

    Top row: phi^(order) = -(a_{order-1} phi^(order-1) + ... + a0 phi)
                           - lam * N_eps(phi).
    """
    cs = coeffs_p5(mu) if order == 5 else coeffs_p3(mu)
    a = np.array(list(reversed(cs.coeffs)))  # a0 .. a_{order-1}
    n = cs.order

    def rhs(s, x):
        out = np.empty(n)
        out[:-1] = x[1:n]
        out[-1] = -float(np.dot(a, x[:n])) - lam * nonlinearity(x[0], alpha, reg_eps)
        return out

    return rhs


def rhs_phi(state: Sequence[float], mu: float, alpha: float, lam: int,
            reg_eps: float = DEFAULT_REG_EPS) -> np.ndarray:
    """Single-call form of the oscillatory-component RHS (5 components)."""
    return make_phi_rhs(mu, alpha, lam, reg_eps)(0.0, np.asarray(state, float))


def make_phi_rhs_aug(mu: float, alpha: float, lam: int, reg_eps: float = DEFAULT_REG_EPS,
                     order: int = 5) -> Callable:
    """RHS of the state stacked with its order x order variational matrix.

    The variational potential uses the regularized derivative of the
    nonlinearity; across a transversal zero this concentrates exactly the
    jump correction a discontinuous-forcing linearization requires (checked
    in tests against the saltation-matrix product at alpha = 0).
    """
    cs = coeffs_p5(mu) if order == 5 else coeffs_p3(mu)
    a = np.array(list(reversed(cs.coeffs)))
    n = cs.order

    def rhs(s, z):
        x = z[:n]
        out = np.empty(n + n * n)
        out[: n - 1] = x[1:n]
        out[n - 1] = -float(np.dot(a, x)) - lam * nonlinearity(x[0], alpha, reg_eps)
        V = z[n:].reshape(n, n)
        dV = np.empty((n, n))
        dV[: n - 1] = V[1:]
        row = -a.copy()
        row[0] -= lam * nonlinearity_deriv(x[0], alpha, reg_eps)
        dV[n - 1] = row @ V
        out[n:] = dV.ravel()
        return out

    return rhs


def make_physical_rhs(alpha4: float, alpha: float, lam: int,
                      reg_eps: float = DEFAULT_REG_EPS) -> Callable:
    """RHS of the physical system (f, f', f'', f''', h).

    f'''' is reconstructed as alpha4 - lam*h with h' = N_eps(f), h(y0) = 0,
    so the non-Lipschitz term is integrated, never differentiated.
    """

    def rhs(y, x):
        nl = nonlinearity(x[0], alpha, reg_eps)
        return np.array([x[1], x[2], x[3], alpha4 - lam * x[4], nl])

    return rhs


def rhs_physical(state: Sequence[float], alpha: float, lam: int,
                 reg_eps: float = DEFAULT_REG_EPS, alpha4: float = 0.0) -> np.ndarray:
    """Single-call form of the physical-system RHS; state = (f, f', f'', f''', h)."""
    return make_physical_rhs(alpha4, alpha, lam, reg_eps)(0.0, np.asarray(state, float))


# ---------------------------------------------------------------------------
# chart transform between physical and oscillatory variables
# ---------------------------------------------------------------------------

def chart_matrix(mu: float, order: int = 5) -> np.ndarray:
    """Lower-triangular C with f^(k)(y) = y^(mu-k) * sum_j C[k,j] phi^(j)(ln y).

    Recursion: C[0,0]=1; C[k+1,j] = (mu-k) C[k,j] + C[k,j-1]. Unit diagonal,
    so the inverse transform is a forward substitution.
    """
    C = np.zeros((order, order))
    C[0, 0] = 1.0
    for k in range(order - 1):
        for j in range(k + 1):
            C[k + 1, j] += (mu - k) * C[k, j]
            C[k + 1, j + 1] += C[k, j]
    return C


def phi_from_physical(scaled_derivs: Sequence[float], mu: float) -> np.ndarray:
    """Oscillatory state (phi, ..., phi^(4)) from r_k = f^(k)(y) * y^(k-mu).

    Callers supply the products r_k directly so they can cancel the huge
    y^(k-mu) factors against decaying derivatives analytically.
    """
    r = np.asarray(scaled_derivs, float)
    C = chart_matrix(mu, len(r))
    phi = np.zeros_like(r)
    for k in range(len(r)):
        phi[k] = r[k] - C[k, :k] @ phi[:k]
    return phi


def physical_from_phi(phi_state: Sequence[float], mu: float) -> np.ndarray:
    """Inverse of phi_from_physical: returns r_k = f^(k)(y) y^(k-mu)."""
    ph = np.asarray(phi_state, float)
    return chart_matrix(mu, len(ph)) @ ph


# ---------------------------------------------------------------------------
# integration wrapper
# ---------------------------------------------------------------------------

@dataclass
class Event:
    kind: str       # "zero" (component 0) | "extremum" (component 1)
    t: float
    state: np.ndarray


@dataclass
class Trajectory:
    ts: np.ndarray
    states: np.ndarray              # shape (ncomp, nt)
    dense: Callable                 # vectorized interpolant t -> state
    events: list[Event] = field(default_factory=list)
    nfev: int = 0

    def event_times(self, kind: str) -> np.ndarray:
        return np.array([e.t for e in self.events if e.kind == kind])


def integrate(rhs: Callable, t_start: float, t_end: float, state0: Sequence[float],
              abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
              record_events: bool = True, max_step: float = np.inf) -> Trajectory:
    """Adaptive embedded RK 5(4) with dense output and an event log.

    Events record zero crossings of component 0 and extrema (zero crossings
    of component 1), each refined on the dense interpolant. StepUnderflow is
    raised when the integrator cannot continue (step below machine spacing),
    signalling a genuine trajectory singularity.
    """
    if abs_tol <= 0 or rel_tol <= 0:
        raise ValueError("tolerances must be positive")
    events = None
    if record_events:
        def ev_zero(t, x):
            return x[0]

        def ev_extremum(t, x):
            return x[1]

        events = [ev_zero, ev_extremum]
    sol = solve_ivp(rhs, (t_start, t_end), np.asarray(state0, float), method="RK45",
                    rtol=rel_tol, atol=abs_tol, dense_output=True, events=events,
                    max_step=max_step)
    if not sol.success:
        raise StepUnderflow(f"integrator stopped at t={sol.t[-1]!r}: {sol.message}")
    evs: list[Event] = []
    if record_events:
        for kind, te, ye in zip(("zero", "extremum"), sol.t_events, sol.y_events):
            for t, y in zip(te, ye):
                evs.append(Event(kind=kind, t=float(t), state=np.array(y)))
        evs.sort(key=lambda e: e.t)
    return Trajectory(ts=sol.t, states=sol.y, dense=sol.sol, events=evs, nfev=sol.nfev)


def comparison_check(data1: Sequence[float], data2: Sequence[float], alpha: float,
                     lam: int, span: float, reg_eps: float = DEFAULT_REG_EPS,
                     n_check: int = 400) -> bool:
    """Order preservation of the physical flow from ordered derivative data.

    data = (f, f', f'', f''', f'''') at the left endpoint. Valid regimes:
    alpha > 0 with lam = -1, and alpha < 0 with lam = +1. True iff
    f1 > f2 strictly on (0, span].
    """
    d1 = np.asarray(data1, float)
    d2 = np.asarray(data2, float)
    if not (np.all(d1 >= d2) and np.any(d1 > d2)):
        raise ValueError("need componentwise data1 >= data2 with a strict gap")
    if not ((alpha > 0 and lam == -1) or (alpha < 0 and lam == +1)):
        raise ValueError("ordering regime requires (alpha>0, lam=-1) or (alpha<0, lam=+1)")
    trajs = []
    for d in (d1, d2):
        rhs = make_physical_rhs(alpha4=d[4], alpha=alpha, lam=lam, reg_eps=reg_eps)
        state0 = np.array([d[0], d[1], d[2], d[3], 0.0])
        trajs.append(integrate(rhs, 0.0, span, state0, record_events=False))
    tt = np.linspace(span * 1e-3, span, n_check)
    f1 = trajs[0].dense(tt)[0]
    f2 = trajs[1].dense(tt)[0]
    return bool(np.all(f1 > f2))


def trajectory_rows(traj: Trajectory) -> tuple[list[str], list[list]]:
    """(header, rows) with columns s_or_y, c0..c4, event_flag (1 where a
    logged event time coincides with the sample row)."""
    ev_ts = {round(e.t, 12) for e in traj.events}
    n = traj.states.shape[0]
    header = ["s_or_y"] + [f"c{i}" for i in range(n)] + ["event_flag"]
    rows = []
    for j, t in enumerate(traj.ts):
        flag = 1 if round(float(t), 12) in ev_ts else 0
        rows.append([float(t)] + [float(v) for v in traj.states[:, j]] + [flag])
    return header, rows


def export_trajectory_csv(traj: Trajectory, path: str, float_fmt: str = "%.17g") -> None:
    header, rows = trajectory_rows(traj)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([float_fmt % v if isinstance(v, float) else v for v in row])
