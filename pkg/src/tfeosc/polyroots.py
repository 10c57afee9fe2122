"""Dense univariate polynomial arithmetic and certified real-root isolation.

Everything downstream that claims "this polynomial has exactly two roots in
(0, 1), here they are" rests on this module. The certificate is a derivative
chain: critical points of p are isolated recursively, so p is strictly
monotone between consecutive nodes and a sign change brackets exactly one
simple root. No sampled sign claims.

Coefficients are stored lowest-degree first. All arithmetic is plain float;
the instances handled here have degree <= 10 on unit-scale intervals, well
inside double precision (reported reference digits are <= 9 significant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnresolvedCluster

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial c0 + c1 x + ... + cn x^n, trailing zeros trimmed."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0.0:
            c = c[:-1]
        if not c:
            c = (0.0,)
        object.__setattr__(self, "coeffs", c)

    # -- construction -----------------------------------------------------

    @staticmethod
    def of(*coeffs: float) -> "Polynomial":
        return Polynomial(tuple(coeffs))

    @staticmethod
    def constant(v: float) -> "Polynomial":
        return Polynomial((v,))

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x):
        """Horner evaluation; supports scalars and numpy arrays."""
        r = 0.0 * np.asarray(x, dtype=float) if np.ndim(x) else 0.0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def eval_with_error(self, x: float) -> tuple[float, float]:
        """Value and a running bound on the evaluation roundoff.

        The bound is the standard Horner estimate eps * sum |c_k| |x|^k
        inflated by 2*(degree+1); used to certify signs.
        """
        v = self(x)
        mag = 0.0
        ax = abs(x)
        for c in reversed(self.coeffs):
            mag = mag * ax + abs(c)
        return v, 2.0 * (self.degree + 1) * _EPS * mag

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, q: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(q.coeffs))
        out = [0.0] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(q.coeffs):
            out[i] += c
        return Polynomial(tuple(out))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, q: "Polynomial") -> "Polynomial":
        return self + (-q)

    def __mul__(self, q) -> "Polynomial":
        if isinstance(q, (int, float)):
            return Polynomial(tuple(c * q for c in self.coeffs))
        out = [0.0] * (len(self.coeffs) + len(q.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            for j, b in enumerate(q.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def deriv(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def affine_arg(self, a: float, b: float) -> "Polynomial":
        """Composition p(a*x + b), exact in coefficient arithmetic."""
        res = Polynomial((0.0,))
        lin = Polynomial((b, a))
        for c in reversed(self.coeffs):
            res = res * lin + Polynomial((c,))
        return res


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """Spec surface for +, -, *; degree bookkeeping handled by Polynomial."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class RootInfo:
    value: float
    flag: str  # "simple" | "suspect"
    bracket: tuple[float, float]


@dataclass
class RootList:
    roots: list[RootInfo] = field(default_factory=list)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.roots]


def _certified_sign(p: Polynomial, x: float) -> int:
    """Sign of p(x) with roundoff certificate; raises if ambiguous."""
    v, err = p.eval_with_error(x)
    if abs(v) <= err:
        raise UnresolvedCluster(
            f"cannot certify sign of polynomial at x={x!r}: |p|={abs(v):.3e} <= err={err:.3e}"
        )
    return 1 if v > 0 else -1


def _one_sided_sign(p: Polynomial, x: float, inward: int) -> int:
    """Sign of p just inside an interval endpoint x (inward = +1 from lo,
    -1 from hi).

    Needed when p(x) is exactly zero (a root sits on the endpoint; open
    intervals exclude it): the first nonzero Taylor coefficient at x sets
    the sign of p(x + inward*eps). Ambiguous nonzero values still raise.
    """
    q = p
    for k in range(p.degree + 1):
        v, err = q.eval_with_error(x)
        if v == 0.0:
            q = q.deriv()
            continue
        if abs(v) <= err:
            raise UnresolvedCluster(
                f"cannot certify one-sided sign at x={x!r} (order {k}): "
                f"|p|={abs(v):.3e} <= err={err:.3e}"
            )
        s = 1 if v > 0 else -1
        return s if inward == +1 or k % 2 == 0 else -s
    raise ValueError("polynomial vanishes to all orders; zero polynomial")


def _refine(p: Polynomial, lo: float, hi: float, s_lo: int, tol: float) -> RootInfo:
    """Bisection to a tight bracket, then Newton polish.

    Precondition: sign change across [lo, hi] with p monotone there, so the
    bracket keeps exactly one root at every stage.
    """
    a, b = lo, hi
    for _ in range(200):  # to machine bracket; cheap at degree <= 10, beats any tol
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        vm = p(m)
        if vm == 0.0:
            a = b = m
            break
        if (1 if vm > 0 else -1) == s_lo:
            a = m
        else:
            b = m
    x = 0.5 * (a + b)
    dp = p.deriv()
    for _ in range(4):
        d = dp(x)
        if d == 0.0:
            break
        x_new = x - p(x) / d
        if not (lo <= x_new <= hi):
            break
        x = x_new
    v, err = p.eval_with_error(x)
    flag = "simple" if abs(v) <= 8.0 * max(err, 1e-300) else "suspect"
    return RootInfo(value=x, flag=flag, bracket=(a, b))


def isolate_real_roots(p: Polynomial, lo: float, hi: float, tol: float = 1e-13) -> RootList:
    """All simple real roots of p in the open interval (lo, hi), certified.

    Certification: the critical points of p inside (lo, hi) are isolated
    recursively (derivative chain), p is strictly monotone between
    consecutive nodes, and each sign change contributes exactly one root.
    A root sitting exactly on a node (a multiple root, or a root of both p
    and p') cannot be certified and raises UnresolvedCluster.

    Roots at the endpoints lo, hi are excluded by construction.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if not (hi > lo):
        raise ValueError("need hi > lo")
    if p.degree == 0:
        return RootList([])

    if p.degree == 1:
        c0, c1 = p.coeffs
        x = -c0 / c1
        if lo < x < hi:
            return RootList([RootInfo(x, "simple", (max(lo, math.nextafter(x, lo)),
                                                    min(hi, math.nextafter(x, hi))))])
        return RootList([])

    crit = isolate_real_roots(p.deriv(), lo, hi, tol)
    nodes = [lo] + sorted(crit.values) + [hi]

    out: list[RootInfo] = []
    signs = [_one_sided_sign(p, nodes[0], +1)]
    for x in nodes[1:-1]:
        v, err = p.eval_with_error(x)
        if abs(v) <= err:
            raise UnresolvedCluster(
                f"possible multiple root near x={x!r}: critical value {v:.3e} below "
                f"certification threshold {err:.3e}"
            )
        signs.append(1 if v > 0 else -1)
    signs.append(_one_sided_sign(p, nodes[-1], -1))

    for i in range(len(nodes) - 1):
        if signs[i] != signs[i + 1]:
            out.append(_refine(p, nodes[i], nodes[i + 1], signs[i], tol))
    return RootList(out)


def _det(rows: list[list[Polynomial]]) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = Polynomial((0.0,))
    for i in range(n):
        piv = rows[i][0]
        if piv.is_zero:
            continue
        minor = [r[1:] for j, r in enumerate(rows) if j != i]
        term = piv * _det(minor)
        acc = acc + term if i % 2 == 0 else acc - term
    return acc


def det4(mat) -> Polynomial:
    """Exact cofactor-expansion determinant of a 4x4 grid of Polynomials.

    Entries may also be plain numbers; they are promoted to constants.
    """
    rows = []
    for r in mat:
        row = [e if isinstance(e, Polynomial) else Polynomial.constant(e) for e in r]
        rows.append(row)
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("det4 expects a 4x4 grid")
    return _det(rows)
