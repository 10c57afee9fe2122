import math

import pytest

from tfeosc import identities, orbits, params
from tfeosc.errors import OutOfRange


def test_nonexistence_minus_interval():
    minus, _ = identities.nonexistence_intervals()
    lo, hi = minus.mu_interval
    assert lo == 2.5
    assert abs(hi - 2.5439) < 1e-4
    # reported root pair of the first-order coefficient
    roots = dict()
    for name, val in minus.bounding_roots:
        roots.setdefault(name, []).append(val)
    assert abs(roots["a1"][0] - 1.45608) < 1e-4
    assert abs(roots["a1"][1] - 2.5439) < 1e-4
    a_lo, a_hi = minus.alpha_interval
    assert a_lo == -1.0
    assert abs(a_hi - (-0.9655)) < 1e-4


def test_nonexistence_plus_interval():
    _, plus = identities.nonexistence_intervals()
    lo, hi = plus.mu_interval
    assert lo == 2.5
    assert abs(hi - (2.0 + math.sqrt(6.0) / 2.0)) < 1e-12
    assert abs(hi - 3.22474) < 1e-5
    assert abs(plus.alpha_interval[1] - (-0.5505)) < 1e-4


def test_alpha_of_mu_mapping():
    # alpha = (mu-5)/mu at mu = 2.619 is about -0.909
    assert abs((2.619 - 5.0) / 2.619 - (-0.909)) < 5e-4


def test_alpha_mu_interval_consistency():
    # both interval endpoints carry the same alpha = (mu-5)/mu mapping
    for report in (*identities.nonexistence_intervals(),
                   identities.hyperbolicity_interval()):
        for mu, alpha in zip(report.mu_interval, report.alpha_interval):
            assert abs(alpha - (mu - 5.0) / mu) < 1e-12


def test_hyperbolicity_interval():
    hyp = identities.hyperbolicity_interval()
    lo, hi = hyp.mu_interval
    assert abs(lo - 2.5439) < 1e-4
    assert hi == pytest.approx(3.0, abs=1e-12)
    # contains the stated range
    assert lo <= 2.544 and hi >= 3.0
    # boundary values of the coefficients
    a0 = lambda mu: mu * (mu - 1) * (mu - 2) * (mu - 3) * (mu - 4)
    assert a0(3.0) == 0.0
    assert 5.0 * (2.5 - 2.0) == 2.5  # a4(2.5) > 0


def test_interval_export(tmp_path):
    minus, plus = identities.nonexistence_intervals()
    path = tmp_path / "iv.json"
    identities.export_interval_report_json([minus, plus], str(path))
    import json
    data = json.loads(path.read_text())
    assert data[0]["kind"] == "nonexistence_minus"
    assert data[1]["mu_hi"] == plus.mu_interval[1]


def test_identity_residuals_on_orbits(orbit_plus, orbit_minus):
    for orb, p in (orbit_plus, orbit_minus):
        res = identities.identity_residuals(orb, p)
        assert abs(res.r1) < 1e-6
        assert abs(res.r2) < 1e-6


def test_identity_residuals_on_equilibrium():
    # constant state phi0: r2 vanishes identically; r1 balances a0 phi0 = phi0^alpha
    p = params.derive(1.0, 0.0, -1)
    phi0 = params.phi0(p)
    orb = orbits.OrbitResult(
        section_state=(phi0, 0.0, 0.0, 0.0, 0.0), period=1.0, amplitude=phi0,
        floquet=(), converged=True, method="shooting", residual=0.0,
        mu=p.mu, alpha=p.alpha, lam=p.lam)
    res = identities.identity_residuals(orb, p)
    assert abs(res.r1) < 1e-12
    assert res.r2 == 0.0 or abs(res.r2) < 1e-12


def test_split_quadrature_beats_fixed_simpson(orbit_plus):
    # the |phi|^(alpha+1) kink at crossings limits the fixed grid; the
    # crossing-split adaptive path is the primary (design deviation, measured)
    orb, p = orbit_plus
    split = identities.identity_residuals(orb, p)
    simp = identities.identity_residuals_simpson(orb, p)
    assert abs(split.r1) < 1e-9
    assert abs(split.r1) <= abs(simp.r1)
    assert abs(simp.r1) < 1e-5  # simpson drifts but stays in the ballpark


def test_epsilon_identity_diagnostic():
    # requires alpha > 0: use the stable orbit at m = 0.9 (alpha = 0.1)
    p = params.derive(0.9, 0.0, +1)
    orb = orbits.detect_relaxation(p, s_max=220.0)
    res = identities.epsilon_identity_residual(orb, p)
    assert abs(res) < 1e-4
    with pytest.raises(OutOfRange):
        identities.epsilon_identity_residual(orb, params.derive(1.0, 0.0, +1))


def test_absorbing_bound():
    b0 = identities.absorbing_bound(0.0)
    assert b0.value == 1.0 / 120.0 and b0.in_hypothesis
    bh = identities.absorbing_bound(0.5)
    assert bh.value == pytest.approx(120.0 ** -2, rel=1e-14)
    assert identities.absorbing_bound(0.999).value < 1e-300 or \
        identities.absorbing_bound(0.999).value < 1e-5
    neg = identities.absorbing_bound(-0.5)
    assert not neg.in_hypothesis and neg.value > 0
    with pytest.raises(OutOfRange):
        identities.absorbing_bound(1.0)


def test_no_orbit_accepted_inside_nonexistence(orbit_plus, orbit_minus):
    # consistency lock: converged orbits sit outside their lambda's interval
    minus, plus = identities.nonexistence_intervals()
    for orb, p in (orbit_plus, orbit_minus):
        iv = minus if p.lam == -1 else plus
        assert not (iv.mu_interval[0] < orb.mu <= iv.mu_interval[1])
