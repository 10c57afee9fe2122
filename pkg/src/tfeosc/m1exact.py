"""Exact piecewise-polynomial oscillatory profiles at m = 1 (alpha = 0).

At m = 1 the interface ODE is piecewise linear, f^(5) = +-5! sign f after a
convenience rescaling of the wave speed, and an oscillatory profile with a
right-hand interface can be assembled in closed form: a base quintic hump

    f0(y) = y (y+1) (a + b y + c y^2 + y^3)   on (-1, 0),

extended to y > 0 by the self-referential scaling rule
f0(y) = -G^5 f0(y/G - 1). C^4 matching at the junctions reduces to a linear
system in (a, b, c) driven by the ratio G; consistency of its first equation
is the vanishing of a degree-10 determinant D(G), whose two roots in (0, 1)
select the two signs:

    G1 = 0.178318...  (base hump positive; profile solves f^(5) = +5! sign f)
    G2 = 0.7060378... (base hump negative; profile solves f^(5) = -5! sign f)

The positivity selector is F(G) = 3G^2 - 10G + 3 > 0, satisfied by G1 only.

Pieces are stored in local charts: piece k lives on [b_{k-1}, b_k] with
b_k = G (1-G^k)/(1-G) and equals (-1)^k G^{5k} f0(u) at u = (y-b_k)/G^k
in [-1, 0]. This keeps every evaluation cancellation-free down to the
interface accumulation point y0 = G/(1-G); the oscillatory component is
anti-periodic, phi*(s + ln G) = -phi*(s), hence periodic with 2|ln G|.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import odeflow
from .errors import MatchingFailure, RootCountMismatch
from .polyroots import Polynomial, det4, isolate_real_roots

FACT5 = 120.0
DEFAULT_N_PIECES = 40
JUNCTION_TOL = 1e-9


# ---------------------------------------------------------------------------
# the matching system
# ---------------------------------------------------------------------------

def solve_abc(G: float) -> tuple[float, float, float]:
    """Unique (a, b, c) from the triangular last three matching equations.

    The reduced determinant (1+G^3)(1+G^2)(1+G) never vanishes on (0, 1).
    """
    c = (4.0 * G - 1.0) / (1.0 + G)
    b = (-6.0 * G * G - (1.0 - 3.0 * G * G) * c) / (1.0 + G * G)
    a = (4.0 * G ** 3 - (1.0 - 2.0 * G ** 3) * b - 3.0 * G ** 3 * c) / (1.0 + G ** 3)
    return a, b, c


def first_equation_residual(G: float) -> float:
    """Residual of the remaining matching equation at (a,b,c) = solve_abc(G);
    vanishes exactly at the admissible ratios."""
    a, b, c = solve_abc(G)
    return (1.0 - G ** 4) * a + G ** 4 * b - G ** 4 * c + G ** 4


def matching_matrix() -> list[list[Polynomial]]:
    """The 4x4 grid (in G) whose determinant gates solvability of the full
    matching system: columns weight (a, b, c, 1)."""
    P = Polynomial
    return [
        [P.of(1, 0, 0, 0, -1), P.of(0, 0, 0, 0, 1), P.of(0, 0, 0, 0, -1), P.of(0, 0, 0, 0, -1)],
        [P.of(1, 0, 0, 1), P.of(1, 0, 0, -2), P.of(0, 0, 0, 3), P.of(0, 0, 0, 4)],
        [P.of(0), P.of(1, 0, 1), P.of(1, 0, -3), P.of(0, 0, -6)],
        [P.of(0), P.of(0), P.of(1, 1), P.of(-1, 4)],
    ]


@lru_cache(maxsize=1)
def discriminant() -> Polynomial:
    """D(G): exact degree-10 determinant of the matching matrix."""
    return det4(matching_matrix())


def positivity_selector() -> Polynomial:
    """F(G) = 3G^2 - 10G + 3; F > 0 iff the base hump is positive (a < 0)."""
    return Polynomial.of(3.0, -10.0, 3.0)


def find_matching_ratios(tol: float = 1e-14) -> tuple[float, float]:
    """The two certified roots of D on (0, 1): (G1, G2), G1 < G2.

    G1 satisfies the positivity selector (positive base hump), G2 fails it
    (negative base hump). Raises RootCountMismatch if the certified count
    in (0, 1) differs from two.
    """
    roots = isolate_real_roots(discriminant(), 0.0, 1.0, tol)
    if len(roots) != 2:
        raise RootCountMismatch(
            f"expected exactly 2 matching ratios in (0,1), certified {len(roots)}"
        )
    g1, g2 = sorted(roots.values)
    F = positivity_selector()
    if not (F(g1) > 0.0 and F(g2) < 0.0):
        raise RootCountMismatch("positivity selector does not separate the two ratios")
    return g1, g2


# ---------------------------------------------------------------------------
# profile assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HumpPolynomial:
    """Cubic bracket coefficients of the base hump y(y+1)(a + by + cy^2 + y^3)."""

    a: float
    b: float
    c: float

    @property
    def bracket(self) -> Polynomial:
        return Polynomial.of(self.a, self.b, self.c, 1.0)

    @property
    def quintic(self) -> Polynomial:
        return Polynomial.of(0.0, 1.0, 1.0) * self.bracket

    def bracket_roots_in_base(self) -> int:
        """Certified count of bracket roots in (-1, 0); 0 means the hump is
        single-signed there."""
        return len(isolate_real_roots(self.bracket, -1.0, 0.0))


@dataclass
class PiecewiseProfile:
    """Profile f0 with a right-hand interface at y0 = G/(1-G).

    Piece k (k = 0..n_pieces-1) covers [b_{k-1}, b_k] (b_{-1} = -1) and is
    (-1)^k G^{5k} p0(u) in the local chart u = (y - b_k)/G^k in [-1, 0].
    The stored quintic solves f^(5) = lam * 5! * sign f piecewise.
    """

    G: float
    lam: int
    n_pieces: int
    hump: HumpPolynomial

    def __post_init__(self):
        self.y0 = self.G / (1.0 - self.G)
        self.log_G = math.log(self.G)
        self.junctions = [self.G * (1.0 - self.G ** k) / (1.0 - self.G)
                          for k in range(self.n_pieces)]
        p = self.hump.quintic
        self._derivs = [p]
        for _ in range(5):
            self._derivs.append(self._derivs[-1].deriv())

    # -- bookkeeping ---------------------------------------------------------

    def piece_scale(self, k: int) -> float:
        return (-1.0) ** k * self.G ** (5 * k)

    def piece_interval(self, k: int) -> tuple[float, float]:
        left = -1.0 if k == 0 else self.junctions[k - 1]
        return left, self.junctions[k]

    @property
    def pieces(self) -> list[tuple[tuple[float, float], Polynomial]]:
        return [(self.piece_interval(k), self.piece_scale(k) * self.hump.quintic)
                for k in range(self.n_pieces)]

    def piece_of_y(self, y: float) -> int:
        if y <= 0.0:
            return 0
        k = int(np.searchsorted(self.junctions, y))
        return min(k, self.n_pieces - 1)

    def piece_of_s(self, s: float) -> int:
        """Piece index from s = ln(y0 - y); stable arbitrarily close to y0."""
        t = (s + math.log1p(-self.G)) / self.log_G
        return min(max(int(math.ceil(t)) - 1, 0), self.n_pieces - 1)

    # -- evaluation ------------------------------------------------------------

    def value(self, y: float, order: int = 0) -> float:
        """f0^(order)(y) through the local chart of the containing piece."""
        k = self.piece_of_y(y)
        u = (y - self.junctions[k]) / self.G ** k
        return (self.piece_scale(k) * self._derivs[order](u)
                / self.G ** (k * order))

    def junction_jumps(self) -> np.ndarray:
        """|jump| of derivative orders 0..4 at junctions b_0..b_{n-2}.

        Exact local formula: the jump of order j at junction k is
        (-1)^k G^{k(5-j)} [p0^(j)(0) + G^(5-j) p0^(j)(-1)], so one bracket
        per order controls the whole chain.
        """
        out = np.empty((self.n_pieces - 1, 5))
        for j in range(5):
            br = self._derivs[j](0.0) + self.G ** (5 - j) * self._derivs[j](-1.0)
            for k in range(self.n_pieces - 1):
                out[k, j] = abs(br) * self.G ** (k * (5 - j))
        return out

    def residual_quintic_coeff(self, k: int) -> float:
        """f^(5) on piece k divided by 5!; equals lam * sign(f) there."""
        return self.piece_scale(k) * self._derivs[5].coeffs[0] / (
            self.G ** (5 * k) * FACT5)

    def interior_zero_slopes(self) -> list[float]:
        """|f0'| at every interior zero (the junctions); all transversal."""
        out = [abs(self.value(-1.0 + 0.0, order=1))]
        for k in range(self.n_pieces - 1):
            out.append(abs(self.value(self.junctions[k], order=1)))
        return out

    # -- oscillatory component ---------------------------------------------------

    def phi_star(self, s) -> np.ndarray:
        """phi*(s) with f0(y) = (y0-y)^5 phi*(ln(y0-y)), normalized so that
        phi* solves the unit-coefficient system L5(phi) = -lam sign phi.

        Stable at any depth: with w = (y0-y)/G^k computed as exp(s - k ln G),
        phi* = (-1)^k p0(u) w^(-5) / 5!, u = y0 - w.
        """
        s_arr = np.atleast_1d(np.asarray(s, float))
        out = np.empty_like(s_arr)
        for i, si in enumerate(s_arr):
            k = self.piece_of_s(si)
            w = math.exp(si - k * self.log_G)
            u = self.y0 - w
            out[i] = (-1.0) ** k * self._derivs[0](u) * w ** -5 / FACT5
        return out if np.ndim(s) else out[0]

    def phi_state(self, s: float) -> np.ndarray:
        """Oscillatory-system state (phi, phi', ..., phi^(4)) at s.

        Derivatives of the reflected, normalized profile g(y) = f0(y0-y)/5!
        at y = e^s convert through the chart transform; the G^{5k} piece
        scale cancels the y^{j-5} weights exactly, so every factor is O(1).
        """
        k = self.piece_of_s(s)
        w = math.exp(s - k * self.log_G)
        u = self.y0 - w
        scaled = np.empty(5)
        for j in range(5):
            scaled[j] = ((-1.0) ** (j + k) * self._derivs[j](u)
                         * w ** (j - 5) / FACT5)
        return odeflow.phi_from_physical(scaled, 5.0)

    def s_domain(self) -> tuple[float, float]:
        """Range of s = ln(y0-y) covered by the stored pieces."""
        return (self.n_pieces * self.log_G - math.log1p(-self.G),
                math.log(self.y0 + 1.0))

    def period(self) -> float:
        return 2.0 * abs(self.log_G)

    def anchor(self) -> tuple[float, np.ndarray]:
        """(s*, state) at a maximum of phi* (phi' = 0, phi'' < 0).

        Extrema of phi* solve 5 p0(u) + (y0 - u) p0'(u) = 0 in the local
        chart; the piece scaling drops out, so one certified isolation
        serves every piece. Candidates over one period (two adjacent
        pieces, alternating sign) are compared for the maximum.
        """
        cond = Polynomial.of(self.y0, -1.0) * self._derivs[1] + 5.0 * self._derivs[0]
        best = None
        for k in (1, 2):  # one full period, away from the s-domain edge
            for r in isolate_real_roots(cond, -1.0, 0.0):
                u = r.value
                s = k * self.log_G + math.log(self.y0 - u)
                st = self.phi_state(s)
                if st[2] < 0.0 and (best is None or st[0] > best[1][0]):
                    best = (s, st)
        if best is None:
            raise MatchingFailure("no interior maximum of phi* found")
        return best


def build_profile(G: float, lam: int, n_pieces: int = DEFAULT_N_PIECES,
                  junction_tol: float = JUNCTION_TOL) -> PiecewiseProfile:
    """Assemble and certify the profile at ratio G for the requested sign.

    Checks, in order: junction jumps of orders 0..4 below junction_tol
    (fails for any G that is not a root of D); the bracket cubic has no
    roots in (-1, 0) (single-signed humps); the base-hump sign matches lam
    (positive base for lam = +1, negative for lam = -1).
    """
    if not (0.0 < G < 1.0):
        raise MatchingFailure(f"ratio must lie in (0,1), got {G}")
    if lam not in (+1, -1):
        raise MatchingFailure(f"lam must be +1 or -1, got {lam!r}")
    if n_pieces < 1:
        raise MatchingFailure("profile needs at least one piece")
    a, b, c = solve_abc(G)
    prof = PiecewiseProfile(G=G, lam=lam, n_pieces=n_pieces,
                            hump=HumpPolynomial(a, b, c))
    jumps = prof.junction_jumps()
    if n_pieces == 1:
        # single hump: no junctions, but the matching bracket must still close
        jumps = np.array([[abs(first_equation_residual(G))]])
    if float(jumps.max()) > junction_tol:
        raise MatchingFailure(
            f"junction jumps up to {jumps.max():.3e} exceed {junction_tol:.1e}; "
            f"G={G!r} is not a matching ratio"
        )
    if prof.hump.bracket_roots_in_base() != 0:
        raise MatchingFailure("bracket cubic changes sign inside the base interval")
    base_sign = 1.0 if prof.value(-0.5) > 0.0 else -1.0
    if base_sign != lam:
        raise MatchingFailure(
            f"base hump sign {base_sign:+.0f} inconsistent with lam={lam:+d}; "
            "use G1 with lam=+1 and G2 with lam=-1"
        )
    return prof


def oscillatory_component(profile: PiecewiseProfile, s_grid) -> np.ndarray:
    """Samples of phi* on s_grid (delegates to the profile's stable path)."""
    s_arr = np.asarray(s_grid, float)
    lo, hi = profile.s_domain()
    if np.any(s_arr < lo) or np.any(s_arr > hi):
        raise ValueError(f"s_grid outside stored support [{lo:.3f}, {hi:.3f}]")
    return profile.phi_star(s_arr)


def maxima_ratio_limit(profile: PiecewiseProfile, n_terms: int = 12
                       ) -> tuple[float, np.ndarray, np.ndarray]:
    """Limit of |f(y_k)| / (y0 - y_k)^5 over per-piece absolute maxima.

    Returns (limit, ratios, y_points). The scaling construction makes the
    ratio invariant piece to piece; deviations certify the assembled chain.
    The maxima obey y_{k+1} = (y_k + 1) G.
    """
    if profile.hump.quintic.is_zero:
        return 0.0, np.zeros(n_terms), np.zeros(n_terms)
    if profile.n_pieces < n_terms:
        raise ValueError("profile too short for the requested number of terms")
    crit = isolate_real_roots(profile._derivs[1], -1.0, 0.0)
    if not len(crit):
        raise MatchingFailure("base hump has no interior extremum")
    u1 = max(crit.values, key=lambda u: abs(profile._derivs[0](u)))
    ratios = np.empty(n_terms)
    ys = np.empty(n_terms)
    for k in range(n_terms):
        fk = abs(profile.piece_scale(k) * profile._derivs[0](u1))
        zk = profile.G ** k * (profile.y0 - u1)   # y0 - y_k, cancellation-free
        ratios[k] = fk / zk ** 5
        ys[k] = profile.junctions[k] + profile.G ** k * u1
    return float(ratios[-1]), ratios, ys


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def profile_rows(profile: PiecewiseProfile) -> tuple[list[str], list[list]]:
    """(header, rows): piece_index, y_left, y_right, c0..c5 in the local chart."""
    header = ["piece_index", "y_left", "y_right", "c0", "c1", "c2", "c3", "c4", "c5"]
    rows = []
    for k, ((left, right), poly) in enumerate(profile.pieces):
        cs = list(poly.coeffs) + [0.0] * (6 - len(poly.coeffs))
        rows.append([k, float(left), float(right)] + [float(c) for c in cs[:6]])
    return header, rows


def export_profile(profile: PiecewiseProfile, csv_path: str, json_path: str,
                   float_fmt: str = "%.17g") -> None:
    """CSV rows (piece_index, y_left, y_right, c0..c5 in the local chart);
    JSON header carries G, y0, lam, n_pieces, period."""
    header, rows = profile_rows(profile)
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([float_fmt % v if isinstance(v, float) else v for v in row])
    header = {
        "G": profile.G,
        "y0": profile.y0,
        "lambda": profile.lam,
        "n_pieces": profile.n_pieces,
        "period": profile.period(),
        "hump": {"a": profile.hump.a, "b": profile.hump.b, "c": profile.hump.c},
    }
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=2)
