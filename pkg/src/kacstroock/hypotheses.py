"""Closed-form and quadrature evaluation of the convergence hypotheses.

All double integrals run over the triangle ``2s/eps^2 <= x <= y <= 2t/eps^2``
and are scaled by ``eps**2``. For a Levy driver the kernels are
``|phi_{X_y - X_x}(u)| = exp(-(y - x) a(u))`` and
``phi_{X_x - X_y}(u) = exp(-(x - y) psi(u))``, which integrate in closed form.
The quadrature route only needs ``increment_cf(u, x0, x1) = E exp(iu(X_x1 - X_x0))``,
so it also applies to drivers with non-stationary independent increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import DegenerateTheta
from .levy import LevyTriplet, levy_exponent

IncrementCF = Callable[[float, float, float], complex]

QUAD_EPSREL = 1e-9


class Which(str, Enum):
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    HBAR = "HBarCross"


class Mode(str, Enum):
    CLOSED = "closed"
    QUADRATURE = "quadrature"
    BOTH = "both"


@dataclass(frozen=True)
class HypothesisReport:
    which: Which
    theta: float
    s: float
    t: float
    epsilon: float
    closed_form_value: float | None
    quadrature_value: float | None
    limit_gap: float
    bound_constant: float | None
    bound: float | None
    theta_h: float | None = None
    c1: int | None = None

    @property
    def value(self) -> float:
        return self.closed_form_value if self.closed_form_value is not None else self.quadrature_value

    @property
    def relative_discrepancy(self) -> float | None:
        if self.closed_form_value is None or self.quadrature_value is None:
            return None
        scale = abs(self.closed_form_value)
        diff = abs(self.closed_form_value - self.quadrature_value)
        return diff / scale if scale > 0 else diff

    def to_row(self) -> dict:
        return {
            "which": self.which.value,
            "theta": self.theta,
            "theta_h": self.theta_h,
            "c1": self.c1,
            "s": self.s,
            "t": self.t,
            "epsilon": self.epsilon,
            "closed_form": self.closed_form_value,
            "quadrature": self.quadrature_value,
            "limit_gap": self.limit_gap,
            "bound": self.bound,
        }


def levy_increment_cf(triplet: LevyTriplet) -> IncrementCF:
    """``E exp(iu(X_x1 - X_x0)) = exp(-(x1 - x0) psi(u))`` with psi cached per u."""

    @lru_cache(maxsize=64)
    def psi(u):
        return levy_exponent(u, triplet).psi

    def cf(u, x0, x1):
        return np.exp(-(x1 - x0) * psi(u))

    return cf


def _triangle(f: Callable[[float, float], float], lo: float, hi: float) -> float:
    """``int_lo^hi int_lo^y f(x, y) dx dy`` by nested adaptive quadrature on the lag."""

    def inner(y):
        return integrate.quad(lambda r: f(y - r, y), 0.0, y - lo, epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)[0]

    return integrate.quad(inner, lo, hi, epsabs=0.0, epsrel=QUAD_EPSREL, limit=200)[0]


def _window(s, t, epsilon):
    if not 0 <= s <= t:
        raise ValueError(f"need 0 <= s <= t, got s={s}, t={t}")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    lo, hi = 2 * s / epsilon**2, 2 * t / epsilon**2
    return lo, hi, hi - lo


def _positive_a(u, triplet, label):
    a = levy_exponent(u, triplet).a_part
    if not a > triplet.default_tolerance:
        raise DegenerateTheta(f"{label}={a:.3g} <= tol")
    return a


def _h1_closed(a: float, L: float) -> float:
    # int_0^L int_0^y exp(-(y-x)a) dx dy
    return (a * L + math.expm1(-a * L)) / (a * a)


def _decay_product_closed(a1: float, a2: float, L: float) -> float:
    """``int_0^L int_0^y exp(-(y-x) a1) exp(-x a2) dx dy``."""
    g = lambda a: -math.expm1(-a * L) / a
    if abs(a1 - a2) <= 1e-6 * max(a1, a2):
        a = 0.5 * (a1 + a2)
        return -math.expm1(-a * L) / a**2 - L * math.exp(-a * L) / a
    return (g(a2) - g(a1)) / (a1 - a2)


def _resolve_cf(triplet, increment_cf):
    if increment_cf is not None:
        return increment_cf
    if triplet is None:
        raise ValueError("need a triplet or an increment_cf")
    return levy_increment_cf(triplet)


def h1_value(theta: float, triplet: LevyTriplet | None, s: float, t: float, epsilon: float,
             mode: str = "closed", increment_cf: IncrementCF | None = None) -> HypothesisReport:
    """Tightness kernel ``eps^2 int int |phi_{X_y - X_x}(theta)| dx dy`` and its bound ``K(theta)(t - s)``."""
    mode = Mode(mode)
    lo, hi, L = _window(s, t, epsilon)
    closed = quad = K = bound = None
    if mode is not Mode.QUADRATURE:
        a = _positive_a(theta, triplet, "a(theta)")
        closed = epsilon**2 * _h1_closed(a, L)
        K = 2.0 / a
        bound = K * (t - s)
    if mode is not Mode.CLOSED:
        cf = _resolve_cf(triplet, increment_cf)
        quad = epsilon**2 * _triangle(lambda x, y: abs(cf(theta, x, y)), lo, hi) if L > 0 else 0.0
    value = closed if closed is not None else quad
    gap = max(0.0, value - bound) if bound is not None else 0.0
    return HypothesisReport(Which.H1, theta, s, t, epsilon, closed, quad, gap, K, bound)


def h2_value(theta: float, triplet: LevyTriplet | None, s: float, t: float, epsilon: float,
             mode: str = "closed", increment_cf: IncrementCF | None = None,
             c_theta: float | None = None) -> HypothesisReport:
    """``eps^2 c^2 int int [phi(theta) + phi(-theta)]``, whose limit must be ``2(t - s)``.

    In closed form the value splits into ``2(t - s)`` (an algebraic identity
    once ``c^2 = |psi|^2 / (2a)``) plus the boundary term
    ``-2 eps^2 c^2 Re[(1 - exp(-psi L)) / psi^2]``; ``limit_gap`` is the
    modulus of the boundary term. ``c_theta`` overrides the Levy normaliser
    (a candidate for non-Levy drivers).
    """
    mode = Mode(mode)
    lo, hi, L = _window(s, t, epsilon)
    closed = quad = None
    if c_theta is None:
        ev = levy_exponent(theta, triplet)
        c_theta = ev.normalization(triplet.default_tolerance)
    c2 = c_theta**2
    if mode is not Mode.QUADRATURE:
        ev = levy_exponent(theta, triplet)
        if not ev.a_part > triplet.default_tolerance:
            raise DegenerateTheta(f"a(theta)={ev.a_part:.3g} <= tol")
        psi = ev.psi
        boundary = -2.0 * epsilon**2 * c2 * ((1.0 - np.exp(-psi * L)) / psi**2).real
        closed = 2.0 * (t - s) + boundary if L > 0 else 0.0
        gap = abs(boundary) if L > 0 else 0.0
    if mode is not Mode.CLOSED:
        cf = _resolve_cf(triplet, increment_cf)
        # phi_Z(-u) = conj(phi_Z(u)) for real Z, so the bracket is 2 Re phi_Z(u)
        quad = epsilon**2 * c2 * _triangle(lambda y, x: 2.0 * cf(theta, y, x).real, lo, hi) if L > 0 else 0.0
        if closed is None:
            gap = abs(quad - 2.0 * (t - s))
    return HypothesisReport(Which.H2, theta, s, t, epsilon, closed, quad, gap, c2, 2.0 * (t - s))


def _product_hypothesis(which, theta, shift, triplet, s, t, epsilon, mode, increment_cf,
                        theta_h=None, c1=None, labels=("a(theta)", "a(2*theta)")):
    mode = Mode(mode)
    lo, hi, L = _window(s, t, epsilon)
    closed = quad = K = bound = None
    if mode is not Mode.QUADRATURE:
        a1 = _positive_a(theta, triplet, labels[0])
        a2 = _positive_a(shift, triplet, labels[1])
        closed = epsilon**2 * _decay_product_closed(a1, a2, L) if L > 0 else 0.0
        K = 1.0 / (a1 * a2)
        bound = epsilon**2 * K
    if mode is not Mode.CLOSED:
        cf = _resolve_cf(triplet, increment_cf)
        f = lambda x, y: abs(cf(theta, x, y)) * abs(cf(shift, lo, x))
        quad = epsilon**2 * _triangle(f, lo, hi) if L > 0 else 0.0
    value = closed if closed is not None else quad
    return HypothesisReport(which, theta, s, t, epsilon, closed, quad, abs(value), K, bound, theta_h, c1)


def h3_value(theta: float, triplet: LevyTriplet | None, s: float, t: float, epsilon: float,
             mode: str = "closed", increment_cf: IncrementCF | None = None) -> HypothesisReport:
    """Martingale kernel ``|phi(theta)| |phi(2 theta)|``; bound ``eps^2 / (a(theta) a(2 theta))``."""
    return _product_hypothesis(Which.H3, theta, 2 * theta, triplet, s, t, epsilon, mode, increment_cf)


def hbar_cross_value(theta_j: float, theta_h: float, c1: int, triplet: LevyTriplet | None,
                     s: float, t: float, epsilon: float, mode: str = "closed",
                     increment_cf: IncrementCF | None = None) -> HypothesisReport:
    """Cross-covariation kernel ``|phi(theta_j)| |phi(theta_j + c1 theta_h)|``."""
    if c1 not in (-1, 1):
        raise ValueError("c1 must be -1 or +1")
    sign = "+" if c1 > 0 else "-"
    return _product_hypothesis(Which.HBAR, theta_j, theta_j + c1 * theta_h, triplet, s, t, epsilon,
                               mode, increment_cf, theta_h, c1,
                               labels=("a(theta_j)", f"a(theta_j{sign}theta_h)"))


def fit_gap_exponent(epsilons: Sequence[float], gaps: Sequence[float]) -> float:
    """Least-squares slope of log(gap) against log(eps).

    Gaps that underflow to exactly 0 decay faster than any power and are
    left out; with fewer than two positive gaps the exponent is ``inf``.
    """
    pts = [(math.log(e), math.log(g)) for e, g in zip(epsilons, gaps) if g > 0]
    if len(pts) < 2:
        return math.inf
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def h2_gap_exponent(theta: float, triplet: LevyTriplet, s: float, t: float,
                    epsilons: Sequence[float] = (0.4, 0.2, 0.1, 0.05)) -> float:
    gaps = [h2_value(theta, triplet, s, t, e).limit_gap for e in epsilons]
    return fit_gap_exponent(epsilons, gaps)


def hypothesis_scan(thetas: Sequence[float], triplet: LevyTriplet, epsilons: Sequence[float],
                    s: float = 0.0, t: float = 1.0, mode: str = "closed") -> list:
    """Reports for H1-H3 per theta and HBar for every ordered pair, over an eps ladder."""
    rows = []
    for eps in epsilons:
        for th in thetas:
            for fn in (h1_value, h2_value, h3_value):
                try:
                    rows.append(fn(th, triplet, s, t, eps, mode))
                except DegenerateTheta:
                    continue
        for j, tj in enumerate(thetas):
            for h, th in enumerate(thetas):
                if j == h:
                    continue
                for c1 in (1, -1):
                    try:
                        rows.append(hbar_cross_value(tj, th, c1, triplet, s, t, eps, mode))
                    except DegenerateTheta:
                        continue
    return rows
