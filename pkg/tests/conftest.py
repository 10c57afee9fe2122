import pytest

from tfeosc import orbits, params


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: continuation/bifurcation runs taking minutes")


@pytest.fixture(scope="session")
def orbit_plus():
    """Converged (m=1, n=0, lam=+1) orbit from the exact seed."""
    p = params.derive(1.0, 0.0, +1)
    return orbits.detect_shooting(p, "exact"), p


@pytest.fixture(scope="session")
def orbit_minus():
    """Converged (m=1, n=0, lam=-1) orbit from the exact seed."""
    p = params.derive(1.0, 0.0, -1)
    return orbits.detect_shooting(p, "exact"), p


@pytest.fixture(scope="session")
def relaxed_plus():
    """Relaxation-detected (m=1, n=0, lam=+1) orbit."""
    p = params.derive(1.0, 0.0, +1)
    return orbits.detect_relaxation(p, s_max=220.0), p
