import json
import math
import time
from types import SimpleNamespace

import numpy as np
import pytest

from tfeosc import m1exact, odeflow
from tfeosc.errors import MatchingFailure
from tfeosc.polyroots import Polynomial

G1_REF = 0.178318    # reported to 6 digits
G2_REF = 0.7060378   # reported to 7 digits


@pytest.fixture(scope="module")
def ratios():
    return m1exact.find_matching_ratios()


@pytest.fixture(scope="module")
def prof_plus(ratios):
    return m1exact.build_profile(ratios[0], +1)


@pytest.fixture(scope="module")
def prof_minus(ratios):
    return m1exact.build_profile(ratios[1], -1)


def test_solve_abc_limits():
    a, b, c = m1exact.solve_abc(1e-14)
    assert np.allclose((a, b, c), (-1.0, 1.0, -1.0), atol=1e-12)
    assert m1exact.solve_abc(1.0)[2] == 1.5


def test_first_equation_residual_at_root(ratios):
    for G in ratios:
        assert abs(m1exact.first_equation_residual(G)) < 1e-10


def test_discriminant_exact_coefficients():
    # oracle: the same determinant expanded independently with numpy convolutions
    def det(mat):
        n = len(mat)
        if n == 1:
            return mat[0][0]
        acc = np.zeros(1)
        for i in range(n):
            minor = [r[1:] for j, r in enumerate(mat) if j != i]
            t = np.convolve(mat[i][0], det(minor))
            m = max(len(acc), len(t))
            acc, t = np.pad(acc, (0, m - len(acc))), np.pad(t, (0, m - len(t)))
            acc = acc + t if i % 2 == 0 else acc - t
        return acc

    M = [[np.array([1., 0, 0, 0, -1]), np.array([0., 0, 0, 0, 1]),
          np.array([0., 0, 0, 0, -1]), np.array([0., 0, 0, 0, -1])],
         [np.array([1., 0, 0, 1]), np.array([1., 0, 0, -2]),
          np.array([0., 0, 0, 3]), np.array([0., 0, 0, 4])],
         [np.array([0.]), np.array([1., 0, 1]), np.array([1., 0, -3]),
          np.array([0., 0, -6])],
         [np.array([0.]), np.array([0.]), np.array([1., 1]), np.array([-1., 4])]]
    ref = det(M)
    D = m1exact.discriminant()
    assert np.array_equal(np.array(D.coeffs), ref)


def test_discriminant_endpoint_values():
    # hand cofactor expansion of the constant matrices at G = 0 and G = 1
    D = m1exact.discriminant()
    assert D(0.0) == -1.0
    assert D(1.0) == -16.0


def test_discriminant_equals_scaled_residual():
    # after eliminating (a, b, c), the first-equation residual times the
    # reduced determinant d = (1+G^3)(1+G^2)(1+G) reproduces D up to sign
    D = m1exact.discriminant()
    Gs = np.linspace(0.05, 0.95, 19)
    d = (1 + Gs ** 3) * (1 + Gs ** 2) * (1 + Gs)
    res = np.array([m1exact.first_equation_residual(G) for G in Gs])
    ratio = D(Gs) / (res * d)
    assert np.allclose(ratio, ratio[0], rtol=1e-9)
    assert abs(abs(ratio[0]) - 1.0) < 1e-9


def test_matching_ratios(ratios):
    t0 = time.time()
    g1, g2 = m1exact.find_matching_ratios()
    assert time.time() - t0 < 1.0
    assert abs(g1 - G1_REF) < 1e-5
    assert abs(g2 - G2_REF) < 1e-6
    F = m1exact.positivity_selector()
    assert F(g1) > 0.0 > F(g2)


def test_sign_change_across_g1(ratios):
    D = m1exact.discriminant()
    g1 = ratios[0]
    assert np.sign(D(g1 - 0.01)) != np.sign(D(g1 + 0.01))


def test_profile_junctions(prof_plus, prof_minus):
    assert prof_plus.junction_jumps().max() < 1e-9
    assert prof_minus.junction_jumps().max() < 1e-9


def test_profile_interface_geometric_series(prof_plus):
    G = prof_plus.G
    assert prof_plus.y0 == G / (1.0 - G)
    assert abs(prof_plus.y0 - 0.21701) < 1e-5
    # partial sums of the junction sequence converge to y0
    b_last = prof_plus.junctions[-1]
    assert abs(b_last + G ** prof_plus.n_pieces / (1 - G) - prof_plus.y0) < 1e-15


def test_profile_sign_structure(prof_plus, prof_minus):
    assert prof_plus.hump.bracket_roots_in_base() == 0
    assert prof_minus.hump.bracket_roots_in_base() == 0
    # positivity condition: a < 0 iff 1 + b - c > 0
    h = prof_plus.hump
    assert h.a < 0.0 and 1.0 + h.b - h.c > 0.0
    h2 = prof_minus.hump
    assert h2.a > 0.0 and 1.0 + h2.b - h2.c < 0.0


def test_piecewise_ode_residual(prof_plus, prof_minus):
    for prof in (prof_plus, prof_minus):
        for k in range(6):
            left, right = prof.piece_interval(k)
            mid = 0.5 * (left + right)
            assert prof.residual_quintic_coeff(k) == pytest.approx(
                prof.lam * np.sign(prof.value(mid)), abs=1e-12)


def test_rescaling_closure(prof_plus):
    # gamma^5 f0(y/gamma + D) satisfies the same piecewise equation
    gamma, shift = 1.7, 0.03
    for y in np.linspace(-1.3, 0.2, 41):
        arg = y / gamma + shift
        if not (-0.999 < arg < prof_plus.y0 - 1e-3):
            continue
        val = gamma ** 5 * prof_plus.value(arg)
        d5 = gamma ** 5 * prof_plus.value(arg, order=5) / gamma ** 5
        if abs(val) < 1e-12:
            continue
        assert d5 == pytest.approx(prof_plus.lam * 120.0 * np.sign(val), abs=1e-9)


def test_build_profile_rejections(ratios):
    with pytest.raises(MatchingFailure):
        m1exact.build_profile(0.5, +1)
    with pytest.raises(MatchingFailure):
        m1exact.build_profile(ratios[0], -1)
    with pytest.raises(MatchingFailure):
        m1exact.build_profile(ratios[1], +1)


def test_single_piece_profile(ratios):
    prof = m1exact.build_profile(ratios[0], +1, n_pieces=1)
    assert prof.n_pieces == 1
    lo, hi = prof.s_domain()
    phi = m1exact.oscillatory_component(prof, np.linspace(lo + 0.05, hi, 64))
    assert np.all(np.isfinite(phi))


def test_oscillatory_component_antiperiodicity(prof_plus, prof_minus):
    for prof in (prof_plus, prof_minus):
        lo, hi = prof.s_domain()
        half = abs(math.log(prof.G))
        ss = np.linspace(lo + 2 * half, hi - half, 1200)
        phi = m1exact.oscillatory_component(prof, ss)
        amp = np.abs(m1exact.oscillatory_component(
            prof, np.linspace(hi - 2 * half, hi, 3000))).max()
        anti = np.abs(m1exact.oscillatory_component(prof, ss + math.log(prof.G)) + phi)
        per = np.abs(m1exact.oscillatory_component(prof, ss + 2 * math.log(prof.G)) - phi)
        assert anti.max() < 1e-8 * amp
        assert per.max() < 1e-8 * amp


def test_oscillatory_amplitude_bound(prof_plus):
    # absorbing bound at alpha = 0 is 1/5! for the unit-normalized system
    lo, hi = prof_plus.s_domain()
    amp = np.abs(m1exact.oscillatory_component(
        prof_plus, np.linspace(lo + 1, hi, 4000))).max()
    assert amp <= 1.0 / 120.0 + 1e-12


def test_anchor_states(prof_plus, prof_minus):
    s1, st1 = prof_plus.anchor()
    assert st1[1] == pytest.approx(0.0, abs=1e-13)
    assert st1[2] < 0.0
    assert st1[0] == pytest.approx(0.0027856800, abs=1e-9)
    s2, st2 = prof_minus.anchor()
    assert st2[0] == pytest.approx(1.56431939e-05, abs=1e-12)
    assert prof_plus.period() == pytest.approx(3.448373514253756, rel=1e-12)
    assert prof_minus.period() == pytest.approx(0.6961732253397132, rel=1e-12)


def test_phi_state_consistent_with_flow(prof_plus):
    # cross-module oracle: advancing the oscillatory state with the dynamical
    # system reproduces the exact profile's state downstream
    s0, st0 = prof_plus.anchor()
    ds = 0.37
    rhs = odeflow.make_phi_rhs(5.0, 0.0, +1, reg_eps=1e-12)
    traj = odeflow.integrate(rhs, 0.0, ds, st0, abs_tol=1e-13, rel_tol=1e-12,
                             record_events=False)
    target = prof_plus.phi_state(s0 + ds)
    assert np.allclose(traj.states[:, -1], target, rtol=1e-8, atol=1e-12)


def test_maxima_ratio_invariance(prof_plus, prof_minus):
    for prof in (prof_plus, prof_minus):
        lim, ratios_, ys = m1exact.maxima_ratio_limit(prof)
        assert np.max(np.abs(ratios_ / ratios_[0] - 1.0)) < 1e-9
        # absolute maxima chain: y_{k+1} = (y_k + 1) G
        G = prof.G
        rec = np.abs(ys[1:] - (ys[:-1] + 1.0) * G)
        assert rec.max() < 1e-12
        # closed form y_k = y0 + G^(k-1) (y_1 - y0)
        closed = prof.y0 + G ** np.arange(len(ys)) * (ys[0] - prof.y0)
        assert np.max(np.abs(closed - ys)) < 1e-12


def test_maxima_ratio_zero_profile():
    fake = SimpleNamespace(hump=SimpleNamespace(quintic=Polynomial.of(0.0)))
    lim, ratios_, ys = m1exact.maxima_ratio_limit(fake)
    assert lim == 0.0 and not ratios_.any()


def test_transversal_zeros(prof_plus, prof_minus):
    for prof in (prof_plus, prof_minus):
        assert all(s > 0.0 for s in prof.interior_zero_slopes())


def test_export_roundtrip(tmp_path, prof_plus):
    csv_path = tmp_path / "prof.csv"
    json_path = tmp_path / "prof.json"
    m1exact.export_profile(prof_plus, str(csv_path), str(json_path))
    header = json.loads(json_path.read_text())
    assert header["G"] == prof_plus.G
    assert header["y0"] == prof_plus.y0
    assert header["lambda"] == +1
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == prof_plus.n_pieces + 1
    # piece 2 coefficients are G^10 * base in the local chart
    row = lines[3].split(",")
    k = int(row[0])
    base = prof_plus.hump.quintic.coeffs
    got = [float(v) for v in row[3:9]]
    assert np.allclose(got, np.array(base) * prof_plus.G ** (5 * k), rtol=1e-15)
