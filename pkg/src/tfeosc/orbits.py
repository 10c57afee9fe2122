"""Periodic oscillatory components: detection, Newton shooting, Floquet
stability, and heteroclinic bifurcation location by parameter continuation.

A periodic oscillatory component phi*(s) of the rescaled system encodes the
sign-changing structure of the solution near its interface. Orbits are
anchored on the section {phi' = 0, phi'' < 0} (an orbit maximum). The
shooting unknowns are the remaining state components plus the period T,
solved by a damped Newton iteration whose Jacobian comes from integrating
the regularized variational system alongside the state.

Guards learned the hard way (all exercised in tests):
* constant equilibria solve the shooting equations for every T, so a
  converged point must exhibit a non-constant phi range over its period;
* Newton steps are trust-regioned around the seed, else the iteration
  tunnels to equilibria or to spurious multi-loop orbits;
* continuation accepts a step only when the period lands near its secant
  prediction, which keeps the march on one branch.

Near a heteroclinic bifurcation the period diverges like
T ~ A - (1/nu) ln(m_h - m). Orbits stable as s -> +inf can be continued
until T exceeds a hard threshold; strongly unstable orbits lose shooting
conditioning first (their leading multiplier grows like e^(Lambda T) and
overwhelms double precision near T ~ 10), so the locator also fits the
period law on the converged tail and extrapolates m_h.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import least_squares

from . import m1exact, odeflow
from .errors import BracketInvalid, NewtonDiverged, NoSettling
from .params import PowerParams, derive, equilibrium_product

DEFAULT_SHOOT_TOL = 1e-9
DEFAULT_REL_TOL = 1e-11
PERIOD_THRESHOLD = 50.0
STEP_FLOOR = 1e-4
TRUST_RADIUS = 0.7
BRANCH_WINDOW = 0.35
MIN_RANGE_REL = 0.5  # non-constancy: (max-min)/max|phi| over one period


@dataclass
class OrbitResult:
    section_state: tuple[float, ...]
    period: float
    amplitude: float
    floquet: tuple[complex, ...]
    converged: bool
    method: str               # "relaxation" | "shooting"
    residual: float
    mu: float
    alpha: float
    lam: int
    order: int = 5


@dataclass
class BifurcationResult:
    n: float
    lam: int
    m_h: float
    bracket: tuple[float, float]
    period_at_bracket: float
    diagnostics: str
    sweep: list[tuple] = field(default_factory=list)  # (par, period, amplitude, max_mult)


# ---------------------------------------------------------------------------
# shooting core
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _System:
    """One rescaled oscillatory system instance (order 3 or 5)."""

    mu: float
    alpha: float
    lam: int
    order: int
    reg_eps: float

    def rhs(self) -> Callable:
        return odeflow.make_phi_rhs(self.mu, self.alpha, self.lam, self.reg_eps, self.order)

    def rhs_aug(self) -> Callable:
        return odeflow.make_phi_rhs_aug(self.mu, self.alpha, self.lam, self.reg_eps, self.order)


@dataclass
class _ShootOutcome:
    state: np.ndarray
    period: float
    monodromy: np.ndarray | None
    range_rel: float
    converged: bool
    residual: float


def _newton_shoot(sys: _System, x0: Sequence[float], T0: float,
                  tol: float = DEFAULT_SHOOT_TOL, itmax: int = 16,
                  rel_tol: float = DEFAULT_REL_TOL,
                  trust: float = TRUST_RADIUS) -> _ShootOutcome:
    """Damped Newton on (free state components, T) with phi'(0) = 0 pinned.

    Returns a non-converged outcome instead of raising; callers decide how
    failure enters their control flow.
    """
    n = sys.order
    free = [j for j in range(n) if j != 1]
    rhs = sys.rhs()
    rhs_aug = sys.rhs_aug()
    x = np.asarray(x0, float).copy()
    x[1] = 0.0
    T = float(T0)
    seed = x.copy()
    seed_scale = max(float(np.linalg.norm(seed)), 1e-12)
    eye = np.eye(n)
    residual = np.inf
    best_residual = np.inf
    for it in range(itmax):
        z0 = np.concatenate([x, eye.ravel()])
        sol = solve_ivp(rhs_aug, (0.0, T), z0, method="RK45",
                        rtol=rel_tol, atol=rel_tol * 1e-2,
                        t_eval=np.linspace(0.0, T, 33))
        if not sol.success:
            return _ShootOutcome(x, T, None, 0.0, False, residual)
        zT = sol.y[:, -1]
        xT = zT[:n]
        M = zT[n:].reshape(n, n)
        R = xT - x
        residual = float(np.linalg.norm(R))
        if not math.isfinite(residual):
            return _ShootOutcome(x, T, M, 0.0, False, residual)
        best_residual = min(best_residual, residual)
        if it >= 4 and residual > 20.0 * best_residual:
            return _ShootOutcome(x, T, M, 0.0, False, residual)  # diverging
        scale = max(float(np.linalg.norm(x)), 1e-12)
        if residual < tol * scale:
            phis = sol.y[0, :]
            rng = float((phis.max() - phis.min()) / max(np.abs(phis).max(), 1e-300))
            return _ShootOutcome(x, T, M, rng, rng > MIN_RANGE_REL, residual)
        J = np.empty((n, n))
        MI = M - eye
        for jj, cc in enumerate(free):
            J[:, jj] = MI[:, cc]
        J[:, n - 1] = rhs(0.0, xT)
        try:
            d = np.linalg.solve(J, -R)
        except np.linalg.LinAlgError:
            return _ShootOutcome(x, T, M, 0.0, False, residual)
        dT = d[n - 1]
        fac = 1.0
        if abs(dT) > 0.25 * T:
            fac = min(fac, 0.25 * T / abs(dT))
        ndx = float(np.linalg.norm(d[: n - 1]))
        if ndx > 0.3 * scale:
            fac = min(fac, 0.3 * scale / ndx)
        for jj, cc in enumerate(free):
            x[cc] += fac * d[jj]
        T += fac * dT
        if (np.linalg.norm(x - seed) > trust * seed_scale
                or T <= 0.0 or not math.isfinite(T)):
            return _ShootOutcome(x, T, M, 0.0, False, residual)
    return _ShootOutcome(x, T, None, 0.0, False, residual)


def _amplitude(sys: _System, state: Sequence[float], T: float,
               rel_tol: float = DEFAULT_REL_TOL) -> float:
    sol = solve_ivp(sys.rhs(), (0.0, T), np.asarray(state, float), method="RK45",
                    rtol=rel_tol, atol=rel_tol * 1e-2, t_eval=np.linspace(0.0, T, 512))
    return float(np.abs(sol.y[0]).max())


def _result_from_outcome(sys: _System, out: _ShootOutcome, method: str) -> OrbitResult:
    mults = tuple(np.linalg.eigvals(out.monodromy)) if out.monodromy is not None else ()
    amp = _amplitude(sys, out.state, out.period) if out.converged else float("nan")
    if out.converged and sys.order == 5 and 0.0 <= sys.alpha < 1.0:
        # absorbing-set invariant (proved for alpha in [0,1)): a "converged"
        # object outside the absorbing ball is spurious
        bound = 120.0 ** (-1.0 / (1.0 - sys.alpha)) + 0.01
        if amp > bound:
            raise NewtonDiverged(
                f"converged object violates the absorbing bound: amplitude "
                f"{amp:.4e} > {bound:.4e} at alpha={sys.alpha}")
    return OrbitResult(
        section_state=tuple(float(v) for v in out.state),
        period=float(out.period),
        amplitude=amp,
        floquet=mults,
        converged=bool(out.converged),
        method=method,
        residual=out.residual,
        mu=sys.mu, alpha=sys.alpha, lam=sys.lam, order=sys.order,
    )


def _system_for(p: PowerParams, reg_eps: float) -> _System:
    return _System(mu=p.mu, alpha=p.alpha, lam=p.lam, order=5, reg_eps=reg_eps)


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

def seed_from_exact(lam: int, n_pieces: int = 24) -> tuple[np.ndarray, float]:
    """Section state and period of the alpha = 0 orbit, from the closed-form
    piecewise profile (ratio G1 for lam = +1, G2 for lam = -1)."""
    g1, g2 = m1exact.find_matching_ratios()
    prof = m1exact.build_profile(g1 if lam == +1 else g2, lam, n_pieces)
    _, state = prof.anchor()
    return state, prof.period()


def detect_relaxation(p: PowerParams, s_max: float = 300.0, tol: float = 1e-6,
                      reg_eps: float = odeflow.DEFAULT_REG_EPS,
                      rel_tol: float = DEFAULT_REL_TOL,
                      settle_count: int = 3) -> OrbitResult:
    """Forward-integrate from generic data and wait for the extrema to settle.

    Convergence: the last `settle_count` maxima amplitudes and maximum-to-
    maximum gaps agree to tol relative. The settled maximum seeds one
    shooting polish. Orbits unstable as s -> +inf (lam = -1) do not settle:
    NoSettling.
    """
    sys = _system_for(p, reg_eps)
    c_star = math.inf
    if p.alpha < 1.0:
        c_star = (1.0 / 120.0) ** (1.0 / (1.0 - p.alpha))
    start = np.zeros(5)
    start[0] = 0.5 * c_star if math.isfinite(c_star) else 0.01
    traj = odeflow.integrate(sys.rhs(), 0.0, s_max, start,
                             abs_tol=rel_tol * 1e-2, rel_tol=rel_tol)
    maxima = [(e.t, e.state) for e in traj.events
              if e.kind == "extremum" and e.state[2] < 0.0]
    if len(maxima) < settle_count + 1:
        raise NoSettling(f"only {len(maxima)} maxima within s_max={s_max}")
    ts = np.array([t for t, _ in maxima])
    amps = np.array([abs(st[0]) for _, st in maxima])
    gaps = np.diff(ts)
    a_tail = amps[-settle_count:]
    g_tail = gaps[-settle_count:]
    settled = (np.ptp(a_tail) <= tol * max(abs(a_tail[-1]), 1e-300)
               and np.ptp(g_tail) <= tol * abs(g_tail[-1]))
    if not settled:
        raise NoSettling(
            f"extrema not settled after s={s_max}: amplitude spread "
            f"{np.ptp(a_tail):.3e}, gap spread {np.ptp(g_tail):.3e}"
        )
    out = _newton_shoot(sys, maxima[-1][1], float(g_tail[-1]), rel_tol=rel_tol)
    if not out.converged:
        raise NoSettling("settled extrema did not polish into a periodic orbit")
    return _result_from_outcome(sys, out, "relaxation")


def detect_shooting(p: PowerParams, seed, tol: float = DEFAULT_SHOOT_TOL,
                    reg_eps: float = odeflow.DEFAULT_REG_EPS,
                    rel_tol: float = DEFAULT_REL_TOL) -> OrbitResult:
    """Newton shooting from a seed: an OrbitResult, a (state, period) pair,
    or the string "exact" for the closed-form alpha = 0 profile seed."""
    sys = _system_for(p, reg_eps)
    if seed == "exact":
        state, T = seed_from_exact(p.lam)
    elif isinstance(seed, OrbitResult):
        state, T = np.array(seed.section_state), seed.period
    else:
        state, T = np.asarray(seed[0], float), float(seed[1])
    out = _newton_shoot(sys, state, T, tol=tol, rel_tol=rel_tol)
    if not out.converged:
        raise NewtonDiverged(
            f"shooting failed at (m={p.m}, n={p.n}, lam={p.lam:+d}): "
            f"residual {out.residual:.3e}, period {out.period:.4f}, "
            f"range_rel {out.range_rel:.3f}"
        )
    return _result_from_outcome(sys, out, "shooting")


def monodromy(orbit: OrbitResult, p: PowerParams,
              reg_eps: float = odeflow.DEFAULT_REG_EPS,
              rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Floquet multipliers: eigenvalues of the variational flow over one
    period along the orbit (regularized potential derivative)."""
    sys = _system_for(p, reg_eps)
    n = sys.order
    z0 = np.concatenate([np.asarray(orbit.section_state, float), np.eye(n).ravel()])
    sol = solve_ivp(sys.rhs_aug(), (0.0, orbit.period), z0, method="RK45",
                    rtol=rel_tol, atol=rel_tol * 1e-2)
    M = sol.y[n:, -1].reshape(n, n)
    return np.linalg.eigvals(M)


# ---------------------------------------------------------------------------
# continuation and bifurcation location
# ---------------------------------------------------------------------------

def _fit_period_law(ms: np.ndarray, Ts: np.ndarray, par_hi: float) -> tuple[float, float, float]:
    """Least-squares fit of T = A - (1/nu) ln(m_h - m); returns (m_h, 1/nu, rms)."""
    m_last = ms[-1]

    def res(q):
        A, invnu, mh = q
        return A - invnu * np.log(np.maximum(mh - ms, 1e-12)) - Ts

    guess = (0.0, 2.0, m_last + 0.5 * (Ts[-1] - Ts[0]) / max(Ts[-1], 1.0) * (ms[-1] - ms[0]) + 1e-3)
    sol = least_squares(res, guess, bounds=([-100.0, 0.05, m_last + 1e-9],
                                            [100.0, 100.0, max(par_hi, m_last + 1.0)]))
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    return float(sol.x[2]), float(sol.x[1]), rms


@dataclass
class _March:
    """State of a one-parameter continuation march."""

    pars: list[float]
    periods: list[float]
    states: list[np.ndarray]
    amplitudes: list[float]
    max_mults: list[float]
    log: list[str]


def _march_orbit_branch(make_sys: Callable[[float], _System], par0: float,
                        state0: np.ndarray, T0: float, par_hi: float,
                        step0: float, period_threshold: float,
                        tol: float, rel_tol: float, step_floor: float,
                        max_halvings: int = 4,
                        mult_cap: float = 3e5) -> tuple[_March, str, float]:
    """March the orbit branch in the parameter until the period diverges or
    shooting dies. Returns (march, reason, first_bad_par); reason is
    "threshold" | "newton" | "end".

    mult_cap ends the march once the leading multiplier exceeds it: beyond
    ~1e6 the shooting Jacobian has lost half of double precision and further
    crawling only burns time before the inevitable Newton death (unstable
    branches are then located by the period-law fit)."""
    sys0 = make_sys(par0)
    out = _newton_shoot(sys0, state0, T0, tol=tol, rel_tol=rel_tol)
    if not out.converged:
        raise BracketInvalid(f"no certified orbit at the bracket start {par0}")
    mm = float(np.abs(np.linalg.eigvals(out.monodromy)).max())
    march = _March([par0], [out.period], [out.state.copy()],
                   [_amplitude(sys0, out.state, out.period)], [mm],
                   [f"start par={par0:.6f} T={out.period:.6f}"])
    step = step0
    halvings = 0
    while True:
        par_g = march.pars[-1]
        if par_g + step > par_hi:
            step = par_hi - par_g
            if step < step_floor:
                return march, "end", par_hi
        par_try = par_g + step
        if len(march.pars) >= 2:
            w = (par_try - march.pars[-1]) / (march.pars[-1] - march.pars[-2])
            T_pred = march.periods[-1] + w * (march.periods[-1] - march.periods[-2])
            x_pred = march.states[-1] + w * (march.states[-1] - march.states[-2])
        else:
            T_pred, x_pred = march.periods[-1], march.states[-1]
        if T_pred <= 0:
            T_pred = march.periods[-1]
        sys_t = make_sys(par_try)
        out = _newton_shoot(sys_t, x_pred, T_pred, tol=tol, rel_tol=rel_tol)
        on_branch = out.converged and abs(out.period / T_pred - 1.0) < BRANCH_WINDOW
        if on_branch and out.period >= period_threshold:
            march.log.append(f"par={par_try:.6f} period {out.period:.2f} over threshold")
            return march, "threshold", par_try
        if on_branch:
            mm = float(np.abs(np.linalg.eigvals(out.monodromy)).max())
            march.pars.append(par_try)
            march.periods.append(out.period)
            march.states.append(out.state.copy())
            march.amplitudes.append(_amplitude(sys_t, out.state, out.period))
            march.max_mults.append(mm)
            march.log.append(f"par={par_try:.6f} T={out.period:.6f} mult={mm:.3e}")
            if mm > mult_cap:
                march.log.append(
                    f"par={par_try:.6f} leading multiplier {mm:.2e} past cap "
                    f"{mult_cap:.0e}; conditioning exhausted")
                return march, "newton", par_try
            halvings = 0
            if step < step0:
                step = min(step * 1.6, step0)
        else:
            step *= 0.5
            halvings += 1
            march.log.append(f"par={par_try:.6f} rejected (converged={out.converged}, "
                             f"T={out.period:.4f} vs pred {T_pred:.4f}); step -> {step:.2e}")
            if halvings > max_halvings and step < step_floor:
                return march, "newton", par_try
    # unreachable


def _locate_from_march(march: _March, reason: str, first_bad: float, par_hi: float,
                       make_sys: Callable[[float], _System], tol_m: float,
                       period_threshold: float, tol: float, rel_tol: float
                       ) -> tuple[float, tuple[float, float], str]:
    """Turn a terminated march into (value, bracket, extra diagnostics)."""
    if reason == "threshold":
        lo, hi = march.pars[-1], first_bad
        x_seed, T_seed = march.states[-1].copy(), march.periods[-1]
        while hi - lo > tol_m:
            mid = 0.5 * (lo + hi)
            out = _newton_shoot(make_sys(mid), x_seed, T_seed, tol=tol, rel_tol=rel_tol)
            if out.converged and out.period < period_threshold:
                lo, x_seed, T_seed = mid, out.state.copy(), out.period
            else:
                hi = mid
        return 0.5 * (lo + hi), (lo, hi), (
            f"threshold bisection: period exceeded {period_threshold} inside "
            f"[{lo:.6f}, {hi:.6f}]")
    if reason == "newton":
        ms = np.array(march.pars)
        Ts = np.array(march.periods)
        t_floor = max(5.0, 0.5 * Ts[-1])
        mask = Ts >= t_floor
        if mask.sum() >= 6:
            mh, invnu, rms = _fit_period_law(ms[mask], Ts[mask], par_hi)
            hi = min(par_hi, mh + max(tol_m, mh - ms[-1]))
            note = (f"shooting conditioning died at T={Ts[-1]:.2f} "
                    f"(leading multiplier ~{march.max_mults[-1]:.1e}); "
                    f"period-law fit on {int(mask.sum())} tail points: "
                    f"1/nu={invnu:.3f}, rms={rms:.1e}")
            return mh, (float(ms[-1]), hi), note
        return (0.5 * (march.pars[-1] + first_bad),
                (march.pars[-1], first_bad),
                "newton death with too few tail points for the period-law fit")
    raise BracketInvalid(
        f"orbit persists at the upper bracket end {par_hi}: no bifurcation inside")


def locate_bifurcation(n: float, lam: int, bracket: tuple[float, float],
                       tol_m: float = 2e-3, step0: float = 0.05,
                       period_threshold: float = PERIOD_THRESHOLD,
                       tol: float = DEFAULT_SHOOT_TOL,
                       rel_tol: float = DEFAULT_REL_TOL,
                       reg_eps: float = odeflow.DEFAULT_REG_EPS) -> BifurcationResult:
    """Continuation in m at fixed n toward the heteroclinic end of the branch.

    The branch is seeded at m = bracket[0]: directly from the closed-form
    alpha = 0 profile when bracket[0] == 1, otherwise by a silent march from
    m = 1 (so bracket[0] >= 1 is required). The bifurcation is declared
    where the period exceeds period_threshold (bisected to tol_m), or, when
    shooting conditioning dies first (unstable orbits), at the period-law
    extrapolation fitted on the converged tail. BracketInvalid if no orbit
    exists at bracket[0] or the orbit survives to bracket[1].
    """
    m_lo, m_hi = bracket

    def make_sys(m: float) -> _System:
        p = derive(m, n, lam)
        return _system_for(p, reg_eps)

    state0, T0 = seed_from_exact(lam)
    if abs(m_lo - 1.0) > 1e-12:
        pre, pre_reason, _ = _march_orbit_branch(
            make_sys, 1.0, state0, T0, m_lo, step0, math.inf, tol, rel_tol,
            STEP_FLOOR, mult_cap=math.inf)
        if pre_reason != "end" or abs(pre.pars[-1] - m_lo) > 1e-9:
            raise BracketInvalid(f"could not continue the orbit from m=1 to m_lo={m_lo}")
        state0, T0 = pre.states[-1], pre.periods[-1]

    march, reason, first_bad = _march_orbit_branch(
        make_sys, m_lo, state0, T0, m_hi, step0, period_threshold,
        tol, rel_tol, STEP_FLOOR)
    m_h, brk, note = _locate_from_march(march, reason, first_bad, m_hi, make_sys,
                                        tol_m, period_threshold, tol, rel_tol)
    mu_h = 5.0 * (n + 1.0) / (m_h + n)
    eq = equilibrium_product(mu_h)
    eq_note = ""
    if (lam == -1 and eq > 0.0) or (lam == +1 and eq < 0.0):
        phi_eq = abs(1.0 / eq) ** (mu_h / 5.0)
        eq_note = (f"; orbit amplitude {march.amplitudes[-1]:.4e} vs equilibrium "
                   f"{phi_eq:.4e} at the last converged point (heteroclinic target)")
    diag = (f"{note}; periods grew {march.periods[0]:.4f} -> {march.periods[-1]:.4f} "
            f"monotonically={bool(np.all(np.diff(march.periods) > 0))}{eq_note}")
    sweep = [(m, n, lam, T, a, mm, True) for m, T, a, mm in
             zip(march.pars, march.periods, march.amplitudes, march.max_mults)]
    return BifurcationResult(n=n, lam=lam, m_h=m_h, bracket=brk,
                             period_at_bracket=march.periods[-1],
                             diagnostics=diag, sweep=sweep)


# ---------------------------------------------------------------------------
# third-order analogue (fourth-order thin film equation)
# ---------------------------------------------------------------------------

def tfe4_mu_of_n(n: float) -> float:
    """Envelope power of the third-order interface system: mu = 3/n.

    This is the mapping that reproduces the analytic nonexistence bound
    n_+ = 3/(1 + 1/sqrt(3)) = 9/(3 + sqrt(3)) from the largest root of the
    first-order coefficient 3 mu^2 - 6 mu + 2.
    """
    return 3.0 / n


def tfe4_relaxation_orbit(n: float, s_max: float = 200.0, tol: float = 1e-6,
                          reg_eps: float = odeflow.DEFAULT_REG_EPS,
                          rel_tol: float = DEFAULT_REL_TOL) -> tuple[_System, _ShootOutcome]:
    """Settled forward orbit of the third-order system at parameter n."""
    sys = _System(mu=tfe4_mu_of_n(n), alpha=1.0 - n, lam=+1, order=3, reg_eps=reg_eps)
    start = np.array([0.003, 0.0, 0.0])
    traj = odeflow.integrate(sys.rhs(), 0.0, s_max, start,
                             abs_tol=rel_tol * 1e-2, rel_tol=rel_tol)
    maxima = [(e.t, e.state) for e in traj.events
              if e.kind == "extremum" and e.state[2] < 0.0]
    if len(maxima) < 4:
        raise NoSettling("third-order system produced too few maxima")
    gaps = np.diff([t for t, _ in maxima])
    out = _newton_shoot(sys, maxima[-1][1], float(gaps[-1]), rel_tol=rel_tol)
    if not out.converged:
        raise NoSettling("third-order relaxation did not polish into an orbit")
    return sys, out


def tfe4_bifurcation(bracket: tuple[float, float] = (1.0, 1.95),
                     tol: float = 2e-3, step0: float = 0.05,
                     period_threshold: float = 40.0,
                     shoot_tol: float = DEFAULT_SHOOT_TOL,
                     rel_tol: float = DEFAULT_REL_TOL,
                     reg_eps: float = odeflow.DEFAULT_REG_EPS) -> BifurcationResult:
    """Heteroclinic value of the third-order analogue, swept in its own n.

    Branch seeded by relaxation at bracket[0] (the orbit is forward-stable),
    then the same continuation machinery as locate_bifurcation.
    """
    n_lo, n_hi = bracket

    def make_sys(nv: float) -> _System:
        return _System(mu=tfe4_mu_of_n(nv), alpha=1.0 - nv, lam=+1, order=3,
                       reg_eps=reg_eps)

    _, out0 = tfe4_relaxation_orbit(n_lo, rel_tol=rel_tol, reg_eps=reg_eps)
    march, reason, first_bad = _march_orbit_branch(
        make_sys, n_lo, out0.state, out0.period, n_hi, step0, period_threshold,
        shoot_tol, rel_tol, STEP_FLOOR)
    n_h, brk, note = _locate_from_march(march, reason, first_bad, n_hi, make_sys,
                                        tol, period_threshold, shoot_tol, rel_tol)
    diag = (f"third-order sweep in its native parameter (mu = 3/n); {note}; "
            f"periods {march.periods[0]:.4f} -> {march.periods[-1]:.4f}")
    sweep = [(nv, float("nan"), +1, T, a, mm, True) for nv, T, a, mm in
             zip(march.pars, march.periods, march.amplitudes, march.max_mults)]
    return BifurcationResult(n=n_h, lam=+1, m_h=n_h, bracket=brk,
                             period_at_bracket=march.periods[-1],
                             diagnostics=diag, sweep=sweep)


def sweep_rows(result: BifurcationResult) -> tuple[list[str], list[list]]:
    header = ["m", "n", "lambda", "period", "amplitude",
              "max_multiplier_modulus", "converged"]
    rows = [[float(m), float(nn), lam, float(T), float(a), float(mm), int(conv)]
            for m, nn, lam, T, a, mm, conv in result.sweep]
    return header, rows


def export_sweep_csv(result: BifurcationResult, path: str,
                     float_fmt: str = "%.17g") -> None:
    """CSV columns (m, n, lambda, period, amplitude, max_multiplier_modulus,
    converged) over the continuation trail."""
    header, rows = sweep_rows(result)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([float_fmt % v if isinstance(v, float) else v for v in row])
