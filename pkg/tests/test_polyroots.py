import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfeosc.errors import UnresolvedCluster
from tfeosc.polyroots import Polynomial, det4, isolate_real_roots, poly_arith

P = Polynomial.of


def test_difference_of_squares():
    p = poly_arith(P(1.0, 1.0), P(1.0, -1.0), "mul")
    assert p.coeffs == (1.0, 0.0, -1.0)


def test_add_identity():
    p = P(3.0, 0.0, 2.0)
    assert poly_arith(p, P(0.0), "add").coeffs == p.coeffs


def test_horner_at_quadratic_root():
    # roots of 3G^2 - 10G + 3 are 1/3 and 3 by the quadratic formula
    F = P(3.0, -10.0, 3.0)
    assert abs(F(1.0 / 3.0)) < 1e-15
    assert F(3.0) == 0.0


def test_degree_bookkeeping():
    p = poly_arith(P(1.0, 2.0), P(1.0, -2.0), "add")  # x terms cancel
    assert p.degree == 0 and p.coeffs == (2.0,)
    q = poly_arith(P(0.0, 1.0), P(0.0, 1.0), "mul")
    assert q.degree == 2


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=5),
       st.lists(st.floats(-5, 5), min_size=1, max_size=5),
       st.floats(-2, 2))
@settings(max_examples=200, deadline=None)
def test_arith_pointwise(ca, cb, x):
    p, q = Polynomial(tuple(ca)), Polynomial(tuple(cb))
    assert math.isclose((p * q)(x), p(x) * q(x), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose((p + q)(x), p(x) + q(x), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose((p - q)(x), p(x) - q(x), rel_tol=1e-9, abs_tol=1e-9)


def test_affine_arg():
    p = P(1.0, -2.0, 0.5, 3.0)
    for x in (-1.3, 0.0, 0.7):
        assert math.isclose(p.affine_arg(2.0, -0.5)(x), p(2.0 * x - 0.5),
                            rel_tol=1e-14, abs_tol=1e-14)


# -- root isolation ---------------------------------------------------------

def test_no_real_roots():
    assert len(isolate_real_roots(P(1.0, 0.0, 1.0), -10.0, 10.0)) == 0


def test_a1_coefficient_roots():
    # reported approximations 1.45608... and 2.5439...
    a1 = P(24.0, -100.0, 105.0, -40.0, 5.0)
    roots = isolate_real_roots(a1, 1.0, 3.0, 1e-13)
    assert len(roots) == 2
    lo, hi = roots.values
    assert abs(lo - 1.45608) < 1e-4
    assert abs(hi - 2.5439) < 1e-4
    for r in roots:
        assert r.flag == "simple"
        assert r.bracket[0] <= r.value <= r.bracket[1]


def test_a2_factor_root_exact_form():
    # (mu-2)(2mu^2-8mu+5)/1 has largest root 2 + sqrt(6)/2 by the quadratic formula
    p = poly_arith(P(-2.0, 1.0), P(5.0, -8.0, 2.0), "mul")
    roots = isolate_real_roots(p, 3.0, 4.0, 1e-14)
    assert len(roots) == 1
    assert abs(roots.values[0] - (2.0 + math.sqrt(6.0) / 2.0)) < 1e-12


def test_planted_roots_recovered():
    # >= 100 random polynomials with known separated simple roots
    rng = np.random.default_rng(20260808)
    for _ in range(150):
        k = rng.integers(1, 6)
        while True:
            roots = np.sort(rng.uniform(-0.95, 0.95, size=k))
            if k == 1 or np.diff(roots).min() > 0.04:
                break
        c = np.array([rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        found = isolate_real_roots(Polynomial(tuple(c)), -1.0, 1.0, 1e-13)
        assert len(found) == k
        assert np.allclose(found.values, roots, atol=1e-9)


def test_double_root_raises():
    # (x - 0.3)^2 (x + 0.5): double root cannot be certified
    p = poly_arith(poly_arith(P(-0.3, 1.0), P(-0.3, 1.0), "mul"), P(0.5, 1.0), "mul")
    with pytest.raises(UnresolvedCluster):
        isolate_real_roots(p, -1.0, 1.0)


def test_root_exactly_at_endpoint_excluded():
    # x(1-x^2) has roots only at {-1, 0, 1}; on (0, 1) the open interval is empty
    p = P(0.0, 1.0, 0.0, -1.0)
    assert len(isolate_real_roots(p, 0.0, 1.0)) == 0
    # and the interior root is still found on a wider interval
    assert len(isolate_real_roots(p, -0.5, 0.5)) == 1


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        isolate_real_roots(P(0.0), 0.0, 1.0)


# -- determinants --------------------------------------------------------------

def test_det4_identity():
    eye = [[P(1.0) if i == j else P(0.0) for j in range(4)] for i in range(4)]
    assert det4(eye).coeffs == (1.0,)


def test_det4_constants_vs_numpy():
    rng = np.random.default_rng(7)
    for _ in range(25):
        A = rng.normal(size=(4, 4))
        d = det4([[float(v) for v in row] for row in A])
        ref = np.linalg.det(A)
        assert abs(d(0.0) - ref) < 1e-12 * max(1.0, abs(ref))


def test_det4_polynomial_entries_pointwise():
    rng = np.random.default_rng(11)
    mat = [[Polynomial(tuple(rng.normal(size=rng.integers(1, 4))))
            for _ in range(4)] for _ in range(4)]
    D = det4(mat)
    for x in (-0.7, 0.2, 1.3):
        num = np.array([[e(x) for e in row] for row in mat])
        assert math.isclose(D(x), float(np.linalg.det(num)),
                            rel_tol=1e-10, abs_tol=1e-10)
