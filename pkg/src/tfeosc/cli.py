"""Command-line surface: reproducible experiments over the library.

Commands: m1, orbit, bifurcate, tfe4, intervals, params, positive,
identities. Global flags (--abs-tol, --rel-tol, --reg-eps, --out, --format)
may also come from a JSON config file (--config); explicit flags override
file values. Every JSON summary embeds the effective configuration, and CSV
floats carry 17 significant digits so identical configs reproduce files
bit-for-bit.

Exit codes: 0 success, 2 matching/root-count failure, 3 no orbit,
4 invalid continuation bracket, 5 parameters out of range, 1 other errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import identities, m1exact, odeflow, orbits, params
from .errors import (BracketInvalid, MatchingFailure, NewtonDiverged,
                     NoConvergence, NoPositiveSolution, NoSettling, OutOfRange,
                     RootCountMismatch, TfeoscError)

FLOAT_FMT = "%.17g"

EXIT_CODES = (
    ((MatchingFailure, RootCountMismatch), 2),
    ((NoSettling, NewtonDiverged), 3),
    ((BracketInvalid,), 4),
    ((OutOfRange, NoPositiveSolution, NoConvergence), 5),
)

GLOBAL_DEFAULTS = {
    "abs_tol": odeflow.DEFAULT_ABS_TOL,
    "rel_tol": odeflow.DEFAULT_REL_TOL,
    "reg_eps": odeflow.DEFAULT_REG_EPS,
    "out": "tfeosc_out",
    "format": "csv",
}


def _merge_config(args: argparse.Namespace) -> dict:
    """Effective run config: defaults < config file < explicit flags."""
    cfg = dict(GLOBAL_DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for k in GLOBAL_DEFAULTS:
            if k in file_cfg:
                cfg[k] = file_cfg[k]
    for k in GLOBAL_DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    if cfg["abs_tol"] <= 0 or cfg["rel_tol"] <= 0:
        raise OutOfRange("tolerances must be positive")
    return cfg


def _write_json(path: str, payload: dict, cfg: dict) -> None:
    payload = dict(payload)
    payload["config"] = {k: cfg[k] for k in sorted(cfg)}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=float)


def _orbit_payload(orb: orbits.OrbitResult) -> dict:
    return {
        "section_state": list(orb.section_state),
        "period": orb.period,
        "amplitude": orb.amplitude,
        "floquet_moduli": sorted((abs(m) for m in orb.floquet), reverse=True),
        "converged": orb.converged,
        "method": orb.method,
        "residual": orb.residual,
        "mu": orb.mu, "alpha": orb.alpha, "lambda": orb.lam,
    }


def _lam(value: str) -> int:
    v = int(value)
    if v not in (+1, -1):
        raise argparse.ArgumentTypeError("lambda must be +1 or -1")
    return v


def _write_table(stem: str, header: list[str], rows: list[list], cfg: dict) -> str:
    """Tabular payload as .csv (17-significant-digit floats) or .json rows,
    per the --format flag."""
    if cfg["format"] == "json":
        path = stem + "_table.json"
        data = [dict(zip(header, row)) for row in rows]
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, default=float)
        return path
    path = stem + ".csv"
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(FLOAT_FMT % v if isinstance(v, float) else str(v)
                              for v in row) + "\n")
    return path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_m1(args, cfg) -> int:
    g1, g2 = m1exact.find_matching_ratios()
    G = g1 if args.lam == +1 else g2
    prof = m1exact.build_profile(G, args.lam, n_pieces=args.pieces)
    lo, hi = prof.s_domain()
    grid = np.linspace(max(lo, hi - 4.0 * prof.period()), hi, 1024)
    phi = m1exact.oscillatory_component(prof, grid)
    header, rows = m1exact.profile_rows(prof)
    table_path = _write_table(cfg["out"], header, rows, cfg)
    json_path = cfg["out"] + ".json"
    _write_json(json_path, {
        "G": prof.G,
        "y0": prof.y0,
        "lambda": prof.lam,
        "period": prof.period(),
        "amplitude": float(np.abs(phi).max()),
        "max_junction_jump": float(prof.junction_jumps().max(initial=0.0)),
        "n_pieces": prof.n_pieces,
    }, cfg)
    print(f"wrote {table_path}, {json_path}")
    return 0


def _detect_orbit(m: float, n: float, lam: int, cfg) -> tuple:
    """Orbit for (m, n, lam): relaxation on the stable side, exact-seeded or
    branch-continued shooting on the unstable side."""
    p = params.derive(m, n, lam)
    kw = dict(reg_eps=cfg["reg_eps"], rel_tol=cfg["rel_tol"])
    if lam == +1:
        return orbits.detect_relaxation(p, **kw), p
    if abs(m - 1.0) < 1e-12:
        return orbits.detect_shooting(p, "exact", **kw), p
    state, T = orbits.seed_from_exact(lam)
    march, reason, _ = orbits._march_orbit_branch(
        lambda mv: orbits._System(mu=5.0 * (n + 1.0) / (mv + n),
                                  alpha=(1.0 - mv) / (1.0 + n),
                                  lam=lam, order=5, reg_eps=cfg["reg_eps"]),
        1.0, state, T, m, 0.05, math.inf,
        orbits.DEFAULT_SHOOT_TOL, cfg["rel_tol"], orbits.STEP_FLOOR)
    if reason != "end" or abs(march.pars[-1] - m) > 1e-9:
        raise NewtonDiverged(f"could not continue the orbit from m=1 to m={m}")
    return orbits.detect_shooting(p, (march.states[-1], march.periods[-1]), **kw), p


def cmd_orbit(args, cfg) -> int:
    orb, p = _detect_orbit(args.m, args.n, args.lam, cfg)
    phi_sys = orbits._system_for(p, cfg["reg_eps"])
    traj = odeflow.integrate(phi_sys.rhs(), 0.0, orb.period, np.array(orb.section_state),
                             abs_tol=cfg["abs_tol"], rel_tol=cfg["rel_tol"])
    header, rows = odeflow.trajectory_rows(traj)
    table_path = _write_table(cfg["out"], header, rows, cfg)
    _write_json(cfg["out"] + ".json",
                {"m": args.m, "n": args.n, **_orbit_payload(orb)}, cfg)
    print(f"wrote {table_path}, {cfg['out']}.json")
    return 0


def cmd_bifurcate(args, cfg) -> int:
    res = orbits.locate_bifurcation(args.n, args.lam, tuple(args.bracket),
                                    tol_m=args.tol_m, rel_tol=cfg["rel_tol"],
                                    reg_eps=cfg["reg_eps"])
    header, rows = orbits.sweep_rows(res)
    table_path = _write_table(cfg["out"], header, rows, cfg)
    _write_json(cfg["out"] + ".json", {
        "n": res.n, "lambda": res.lam, "m_h": res.m_h,
        "bracket": list(res.bracket),
        "period_at_bracket": res.period_at_bracket,
        "diagnostics": res.diagnostics,
    }, cfg)
    print(f"m_h = {res.m_h:.6f}  bracket = [{res.bracket[0]:.6f}, {res.bracket[1]:.6f}]")
    print(f"wrote {table_path}, {cfg['out']}.json")
    return 0


def cmd_tfe4(args, cfg) -> int:
    res = orbits.tfe4_bifurcation(tuple(args.bracket), tol=args.tol_m,
                                  rel_tol=cfg["rel_tol"], reg_eps=cfg["reg_eps"])
    header, rows = orbits.sweep_rows(res)
    table_path = _write_table(cfg["out"], header, rows, cfg)
    _write_json(cfg["out"] + ".json", {
        "n_h": res.m_h, "bracket": list(res.bracket),
        "period_at_bracket": res.period_at_bracket,
        "n_plus": 9.0 / (3.0 + math.sqrt(3.0)),
        "diagnostics": res.diagnostics,
    }, cfg)
    print(f"n_h = {res.m_h:.6f}")
    print(f"wrote {table_path}, {cfg['out']}.json")
    return 0


def cmd_intervals(args, cfg) -> int:
    minus, plus = identities.nonexistence_intervals()
    hyp = identities.hyperbolicity_interval()
    path = cfg["out"] + ".json"
    payload = {
        "reports": [r.to_dict() for r in (minus, plus, hyp)],
        "tfe4_n_plus": 9.0 / (3.0 + math.sqrt(3.0)),
    }
    _write_json(path, payload, cfg)
    print(f"wrote {path}")
    return 0


def cmd_params(args, cfg) -> int:
    p = params.derive(args.m, args.n, args.lam)
    reg = params.classify_regularity(args.m, args.n)
    payload = {
        "m": p.m, "n": p.n, "lambda": p.lam,
        "alpha": p.alpha, "mu": p.mu, "beta": p.beta,
        "gamma_scale": p.gamma_scale,
        "cp_class": reg.cp_class, "fbp_gamma": reg.fbp_gamma,
        "fbp_valid": reg.fbp_valid,
    }
    try:
        payload["phi0"] = params.phi0(p)
    except NoPositiveSolution as exc:
        payload["phi0"] = None
        payload["phi0_note"] = str(exc)
    _write_json(cfg["out"] + ".json", payload, cfg)
    print(json.dumps({k: payload[k] for k in ("alpha", "mu", "beta", "cp_class")}))
    return 0


def cmd_positive(args, cfg) -> int:
    p = params.derive(args.m, args.n, -1)
    fp = params.fixed_point_positive(p, f_max=args.f_max, tol=args.tol)
    exact = (fp.f / params.phi0(p)) ** (1.0 / p.mu)
    sup_rel = float(np.max(np.abs(fp.y - exact) / exact))
    stride = max(1, len(fp.f) // 2000)
    rows = [[float(fv), float(yv), float(ev)] for fv, yv, ev in
            zip(fp.f[::stride], fp.y[::stride], exact[::stride])]
    _write_table(cfg["out"], ["f", "y", "y_explicit"], rows, cfg)
    _write_json(cfg["out"] + ".json", {
        "m": args.m, "n": args.n,
        "iterations": fp.iterations,
        "final_delta": fp.final_delta,
        "sup_rel_error_vs_explicit": sup_rel,
        "phi0": params.phi0(p),
    }, cfg)
    print(f"fixed point converged in {fp.iterations} iterations; "
          f"sup-rel error vs explicit inverse = {sup_rel:.3e}")
    return 0


def cmd_identities(args, cfg) -> int:
    orb, p = _detect_orbit(args.m, args.n, args.lam, cfg)
    res = identities.identity_residuals(orb, p, reg_eps=cfg["reg_eps"])
    _write_json(cfg["out"] + ".json", {
        "m": args.m, "n": args.n, "lambda": args.lam,
        "r1": res.r1, "r2": res.r2,
        **_orbit_payload(orb),
    }, cfg)
    print(f"r1 = {res.r1:.3e}  r2 = {res.r2:.3e}")
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tfeosc",
        description="Oscillatory interface structures of the degenerate "
                    "fifth-order thin-film ODE: exact profiles, periodic "
                    "orbits, bifurcation location.")
    ap.add_argument("--config", help="JSON file with global flag values")
    ap.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    ap.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    ap.add_argument("--reg-eps", dest="reg_eps", type=float, default=None)
    ap.add_argument("--out", default=None, help="output path stem")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("m1", help="exact piecewise profile at m=1")
    s.add_argument("--lambda", dest="lam", type=_lam, required=True)
    s.add_argument("--pieces", type=int, default=m1exact.DEFAULT_N_PIECES)
    s.set_defaults(func=cmd_m1)

    s = sub.add_parser("orbit", help="detect a periodic oscillatory component")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=_lam, required=True)
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("bifurcate", help="locate the heteroclinic value m_h(n)")
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=_lam, required=True)
    s.add_argument("--bracket", type=float, nargs=2, required=True)
    s.add_argument("--tol-m", dest="tol_m", type=float, default=2e-3)
    s.set_defaults(func=cmd_bifurcate)

    s = sub.add_parser("tfe4", help="third-order analogue heteroclinic value")
    s.add_argument("--bracket", type=float, nargs=2, default=(1.0, 1.95))
    s.add_argument("--tol-m", dest="tol_m", type=float, default=2e-3)
    s.set_defaults(func=cmd_tfe4)

    s = sub.add_parser("intervals", help="nonexistence and hyperbolicity intervals")
    s.set_defaults(func=cmd_intervals)

    s = sub.add_parser("params", help="derived exponents and regularity class")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=_lam, default=-1)
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("positive", help="positive-solution fixed point vs explicit inverse")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--f-max", dest="f_max", type=float, default=1.0)
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_positive)

    s = sub.add_parser("identities", help="integral-identity residuals on an orbit")
    s.add_argument("--m", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=_lam, required=True)
    s.set_defaults(func=cmd_identities)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        return args.func(args, cfg)
    except TfeoscError as exc:
        for classes, code in EXIT_CODES:
            if isinstance(exc, classes):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
