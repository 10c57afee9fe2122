"""Coefficient-sign interval computation and integral identities on orbits.

Multiplying the orbit equation L5(phi) = -lam |phi|^(alpha-1) phi by phi and
by phi' and integrating by parts over one period yields two identities that
every T-periodic solution satisfies exactly:

    r1:  a4 I(phi'')  - a2 I(phi')  + a0 I(phi)  + lam * I(|phi|^(alpha+1)) = 0
    r2:  I(phi''')    - a3 I(phi'') + a1 I(phi')                            = 0

with I(g) the period integral of g^2 (last term of r1: of |phi|^(alpha+1)).
They make sense for alpha > -1 and power the nonexistence intervals: r2
forbids nonconstant orbits when a1 >= 0 and a3 <= 0 (lam = -1 interval),
r1 when a4 >= 0 and a2 <= 0 (lam = +1). The hyperbolicity interval adds
a0 >= 0. All bounding roots are certified by polyroots.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp

from . import odeflow
from .errors import OutOfRange
from .orbits import OrbitResult, _system_for
from .params import PowerParams
from .polyroots import Polynomial, isolate_real_roots

MU_ADMISSIBLE_MIN = 2.5  # alpha = (mu-5)/mu > -1 requires mu > 5/2


def _mu_to_alpha(mu: float) -> float:
    return (mu - 5.0) / mu


@dataclass(frozen=True)
class IntervalReport:
    kind: str                      # "nonexistence_minus" | "nonexistence_plus" | "hyperbolicity"
    mu_interval: tuple[float, float]
    alpha_interval: tuple[float, float]
    bounding_roots: tuple[tuple[str, float], ...]
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mu_lo": self.mu_interval[0], "mu_hi": self.mu_interval[1],
            "alpha_lo": self.alpha_interval[0], "alpha_hi": self.alpha_interval[1],
            "roots": [{"poly": nm, "value": v} for nm, v in self.bounding_roots],
            "notes": self.notes,
        }


def _coeff_polys() -> dict[str, Polynomial]:
    """The operator coefficients as polynomials in mu."""
    P = Polynomial.of
    return {
        "a4": P(-10.0, 5.0),
        "a3": P(35.0, -40.0, 10.0),
        "a2": P(-10.0, 5.0) * P(5.0, -8.0, 2.0),
        "a1": P(24.0, -100.0, 105.0, -40.0, 5.0),
        "a0": P(0.0, 1.0) * P(-1.0, 1.0) * P(-2.0, 1.0) * P(-3.0, 1.0) * P(-4.0, 1.0),
    }


def nonexistence_intervals() -> tuple[IntervalReport, IntervalReport]:
    """Certified mu-intervals with no nonconstant periodic component.

    lam = -1: a1 >= 0 and a3 <= 0 hold on (mu1m, mu1p), the middle root pair
    of a1 (the a3 < 0 window contains it); the identities require mu > 5/2,
    so the reported interval is (5/2, mu1p). The full sign window is kept in
    the notes. lam = +1: a4 >= 0 and a2 <= 0 hold up to the largest root of
    a2, which is 2 + sqrt(6)/2; reported as (5/2, mu2p].
    """
    polys = _coeff_polys()
    a1_roots = isolate_real_roots(polys["a1"], 0.0, 6.0).values
    a3_roots = isolate_real_roots(polys["a3"], 0.0, 6.0).values
    a2_roots = isolate_real_roots(polys["a2"], 0.0, 6.0).values

    # a1 > 0 between its 2nd and 3rd roots in (0, 6); check containment in a3 < 0
    mu1m, mu1p = a1_roots[1], a1_roots[2]
    if not (a3_roots[0] < mu1m and mu1p < a3_roots[1]):
        raise AssertionError("sign table violated: a1>0 window not inside a3<0 window")
    lo = max(MU_ADMISSIBLE_MIN, mu1m)
    minus = IntervalReport(
        kind="nonexistence_minus",
        mu_interval=(lo, mu1p),
        alpha_interval=(_mu_to_alpha(lo), _mu_to_alpha(mu1p)),
        bounding_roots=(("a1", mu1m), ("a1", mu1p)),
        notes=(f"sign conditions a1>=0, a3<=0 hold on ({mu1m:.6f}, {mu1p:.6f}); "
               f"reported interval clipped to mu > 5/2 where alpha > -1"),
    )

    mu2p = max(a2_roots)
    plus = IntervalReport(
        kind="nonexistence_plus",
        mu_interval=(MU_ADMISSIBLE_MIN, mu2p),
        alpha_interval=(-1.0, _mu_to_alpha(mu2p)),
        bounding_roots=(("a2", mu2p),),
        notes="sign conditions a4>=0, a2<=0; upper end is the largest root of a2, "
              "equal to 2 + sqrt(6)/2",
    )
    return minus, plus


def hyperbolicity_interval() -> IntervalReport:
    """mu-interval where a4 >= 0, a2 <= 0, a0 >= 0 force negative real parts
    on the linearized spectrum (lam = -1 orbits there are hyperbolic).

    The raw sign region is [2, 3]; intersected with the orbit-existence
    constraint (above the lam = -1 nonexistence interval) it is (mu1p, 3].
    """
    polys = _coeff_polys()
    a4_root = isolate_real_roots(polys["a4"], 0.0, 6.0).values[0]
    raw_lo = a4_root                                               # mu = 2
    raw_hi = isolate_real_roots(polys["a0"], 2.5, 3.5).values[0]   # mu = 3
    minus, _ = nonexistence_intervals()
    lo = max(raw_lo, minus.mu_interval[1])
    if not (lo < raw_hi):
        raise AssertionError("hyperbolicity interval collapsed")
    return IntervalReport(
        kind="hyperbolicity",
        mu_interval=(lo, raw_hi),
        alpha_interval=(_mu_to_alpha(lo), _mu_to_alpha(raw_hi)),
        bounding_roots=(("a4", raw_lo), ("a1", lo), ("a0", raw_hi)),
        notes=f"sign conditions a4>=0, a2<=0, a0>=0 hold on [{raw_lo:.6f}, {raw_hi:.6f}]; "
              "lower end raised to the nonexistence bound",
    )


# ---------------------------------------------------------------------------
# integral identities on computed orbits
# ---------------------------------------------------------------------------

class IdentityResiduals(NamedTuple):
    r1: float
    r2: float


def _orbit_dense(orbit: OrbitResult, p: PowerParams, reg_eps: float, rel_tol: float):
    sys = _system_for(p, reg_eps)
    sol = solve_ivp(sys.rhs(), (0.0, orbit.period), np.asarray(orbit.section_state),
                    method="RK45", rtol=rel_tol, atol=rel_tol * 1e-2,
                    dense_output=True, events=lambda s, x: x[0])
    return sol


def identity_residuals(orbit: OrbitResult, p: PowerParams,
                       reg_eps: float = odeflow.DEFAULT_REG_EPS,
                       rel_tol: float = 1e-11,
                       nodes: int = 2048) -> IdentityResiduals:
    """Relative residuals of the two period identities on a converged orbit.

    Quadrature: each integrand is smooth between consecutive transversal
    zeros of phi but only Hölder there (|phi|^(alpha+1) has unbounded
    derivatives at crossings for alpha < 0), so the period is split at the
    logged zero crossings and each segment integrated adaptively. A fixed
    composite-Simpson rule on `nodes` points is accurate only for alpha >= 0
    and is kept as the cross-check path (see tests).

    Residuals are normalized by the largest constituent term.
    """
    if not orbit.converged:
        raise ValueError("identity residuals require a converged orbit")
    if p.alpha <= -1.0:
        raise OutOfRange("identities require alpha > -1")
    a4, a3, a2, a1, a0 = odeflow.coeffs_p5(p.mu).coeffs
    sol = _orbit_dense(orbit, p, reg_eps, rel_tol)
    cuts = [0.0] + [float(t) for t in sol.t_events[0] if 1e-12 < t < orbit.period] \
        + [orbit.period]

    def seg_int(f) -> float:
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            val, _ = quad(f, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-11)
            total += val
        return total

    I0 = seg_int(lambda s: sol.sol(s)[0] ** 2)
    I1 = seg_int(lambda s: sol.sol(s)[1] ** 2)
    I2 = seg_int(lambda s: sol.sol(s)[2] ** 2)
    I3 = seg_int(lambda s: sol.sol(s)[3] ** 2)
    Ipw = seg_int(lambda s: abs(sol.sol(s)[0]) ** (p.alpha + 1.0))

    t1 = (a4 * I2, -a2 * I1, a0 * I0, p.lam * Ipw)
    t2 = (I3, -a3 * I2, a1 * I1)
    r1 = sum(t1) / max(abs(v) for v in t1)
    # constant orbits make every r2 term vanish (0 = 0 identically); floor
    # the normalization at machine resolution of the r1 scale
    denom2 = max(max(abs(v) for v in t2), np.finfo(float).eps * max(abs(v) for v in t1))
    r2 = sum(t2) / denom2
    return IdentityResiduals(r1=float(r1), r2=float(r2))


def identity_residuals_simpson(orbit: OrbitResult, p: PowerParams,
                               reg_eps: float = odeflow.DEFAULT_REG_EPS,
                               rel_tol: float = 1e-11,
                               nodes: int = 2048) -> IdentityResiduals:
    """Fixed-grid composite-Simpson variant (cross-check path; adequate for
    alpha >= 0 where the crossing kinks are mild)."""
    if nodes % 2 == 1:
        nodes += 1
    a4, a3, a2, a1, a0 = odeflow.coeffs_p5(p.mu).coeffs
    sol = _orbit_dense(orbit, p, reg_eps, rel_tol)
    ss = np.linspace(0.0, orbit.period, nodes + 1)
    Y = sol.sol(ss)
    w = np.ones(nodes + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    h = orbit.period / nodes

    def simp(vals):
        return float(h / 3.0 * np.dot(w, vals))

    I0 = simp(Y[0] ** 2)
    I1 = simp(Y[1] ** 2)
    I2 = simp(Y[2] ** 2)
    I3 = simp(Y[3] ** 2)
    Ipw = simp(np.abs(Y[0]) ** (p.alpha + 1.0))
    t1 = (a4 * I2, -a2 * I1, a0 * I0, p.lam * Ipw)
    t2 = (I3, -a3 * I2, a1 * I1)
    return IdentityResiduals(r1=float(sum(t1) / max(abs(v) for v in t1)),
                             r2=float(sum(t2) / max(abs(v) for v in t2)))


def epsilon_identity_residual(orbit: OrbitResult, p: PowerParams,
                              reg_eps: float = odeflow.DEFAULT_REG_EPS,
                              rel_tol: float = 1e-11) -> float:
    """Diagnostic-only residual of the third period identity (orbit equation
    multiplied by phi''):

        -a4 I(phi''') + a2 I(phi'') - a0 I(phi')
            = lam * alpha * int |phi|^(alpha-1) (phi')^2.

    The right-hand integral converges only for alpha > 0, so this identity
    never enters interval logic; OutOfRange below.
    """
    if p.alpha <= 0.0:
        raise OutOfRange("epsilon identity is meaningful for alpha > 0 only")
    a4, a3, a2, a1, a0 = odeflow.coeffs_p5(p.mu).coeffs
    sol = _orbit_dense(orbit, p, reg_eps, rel_tol)
    cuts = [0.0] + [float(t) for t in sol.t_events[0] if 1e-12 < t < orbit.period] \
        + [orbit.period]

    def seg_int(f) -> float:
        # |phi|^(alpha-1) blows up at the segment ends; quadpack still
        # delivers diagnostic accuracy but warns about roundoff
        total = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                val, _ = quad(f, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-10)
                total += val
        return total

    I1 = seg_int(lambda s: sol.sol(s)[1] ** 2)
    I2 = seg_int(lambda s: sol.sol(s)[2] ** 2)
    I3 = seg_int(lambda s: sol.sol(s)[3] ** 2)
    Irhs = seg_int(lambda s: abs(sol.sol(s)[0]) ** (p.alpha - 1.0) * sol.sol(s)[1] ** 2)
    terms = (-a4 * I3, a2 * I2, -a0 * I1, -p.lam * p.alpha * Irhs)
    return float(sum(terms) / max(abs(v) for v in terms))


class AbsorbingBound(NamedTuple):
    value: float
    in_hypothesis: bool  # alpha in [0, 1), where the bound is proved


def absorbing_bound(alpha: float) -> AbsorbingBound:
    """Absorbing-set radius C* = (5!)^(-1/(1-alpha)).

    Proved for alpha in [0, 1); below 0 the value is still returned with
    in_hypothesis=False (heuristic use in sweeps). alpha >= 1 is undefined
    (the exponent diverges): OutOfRange.
    """
    if alpha >= 1.0:
        raise OutOfRange("absorbing bound undefined for alpha >= 1")
    return AbsorbingBound(value=120.0 ** (-1.0 / (1.0 - alpha)),
                          in_hypothesis=alpha >= 0.0)


def export_interval_report_json(reports, path: str) -> None:
    data = [r.to_dict() for r in reports]
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
