"""Levy triplets, Levy exponents and admissibility of the frequency theta.

The exponent follows the Levy-Khinchine convention with truncation function
``1_{|x|<1}``::

    psi(u) = -i*drift*u + sigma**2*u**2/2 - int (exp(iux) - 1 - iux 1_{|x|<1}) eta(dx)

so that ``E exp(iu X_t) = exp(-t psi(u))``. ``a(u)`` and ``b(u)`` are its real
and imaginary parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate, special

from .errors import DegenerateTheta, InvalidTriplet, QuadratureFailure

CLOSED_FORM_TOL = 1e-12
QUADRATURE_TOL = 1e-8
QUAD_ABS_TOL = 1e-10


class Family(str, Enum):
    POISSON = "poisson"
    COMPOUND_POISSON = "compound_poisson"
    JUMP_DIFFUSION = "jump_diffusion"
    SYMMETRIC_STABLE = "symmetric_stable"
    CUSTOM = "custom"


@dataclass(frozen=True)
class LevyDensity:
    """Absolutely continuous part of a Levy measure.

    ``zero_exponent`` and ``tail_exponent`` declare the behaviour
    ``rho(x) = O(|x|**-zero_exponent)`` as ``x -> 0`` and
    ``rho(x) = O(|x|**-tail_exponent)`` as ``|x| -> inf``. A Levy measure
    needs ``zero_exponent < 3`` (x**2 integrable near 0) and
    ``tail_exponent > 1`` (finite mass away from 0).
    """

    func: Callable[[float], float]
    zero_exponent: float
    tail_exponent: float
    description: Mapping | None = None

    def __post_init__(self):
        if not self.zero_exponent < 3:
            raise InvalidTriplet(
                f"density zero_exponent {self.zero_exponent} >= 3: x^2 eta(dx) not integrable near 0"
            )
        if not self.tail_exponent > 1:
            raise InvalidTriplet(
                f"density tail_exponent {self.tail_exponent} <= 1: infinite mass away from 0"
            )

    def even(self, x):
        return self.func(x) + self.func(-x)

    def odd(self, x):
        return self.func(x) - self.func(-x)


@dataclass(frozen=True)
class _PowerLaw:
    # module-level so triplets stay picklable for worker processes
    coefficient: float
    index: float

    def __call__(self, x):
        return self.coefficient * abs(x) ** (-1.0 - self.index)


def power_law_density(coefficient: float, index: float) -> LevyDensity:
    """Symmetric density ``coefficient * |x|**(-1-index)``, 0 < index < 2."""
    if not 0 < index < 2:
        raise InvalidTriplet(f"power-law index must lie in (0, 2), got {index}")
    if not coefficient > 0:
        raise InvalidTriplet(f"power-law coefficient must be positive, got {coefficient}")
    return LevyDensity(
        _PowerLaw(float(coefficient), float(index)),
        zero_exponent=1.0 + index,
        tail_exponent=1.0 + index,
        description={"kind": "power_law", "coefficient": coefficient, "index": index},
    )


def stable_density_coefficient(alpha: float, scale: float) -> float:
    """Coefficient C with ``int (1 - cos ux) C|x|^(-1-alpha) dx = scale*|u|^alpha``."""
    if alpha == 1.0:
        half_integral = math.pi / 2
    else:
        # int_0^inf (1 - cos y) y^(-1-alpha) dy
        half_integral = special.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2) / alpha
    return scale / (2.0 * half_integral)


@dataclass(frozen=True)
class LevyMeasure:
    atoms: tuple = ()
    density: LevyDensity | None = None

    def __post_init__(self):
        cleaned = []
        for loc, mass in self.atoms:
            loc, mass = float(loc), float(mass)
            if loc == 0 or not math.isfinite(loc):
                raise InvalidTriplet(f"atom location must be finite and non-zero, got {loc}")
            if not (mass > 0 and math.isfinite(mass)):
                raise InvalidTriplet(f"atom mass must be positive, got {mass}")
            cleaned.append((loc, mass))
        object.__setattr__(self, "atoms", tuple(cleaned))

    @property
    def locations(self) -> np.ndarray:
        return np.array([x for x, _ in self.atoms], dtype=float)

    @property
    def masses(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms], dtype=float)

    @property
    def total_mass(self) -> float:
        if self.density is not None:
            return math.inf
        return float(self.masses.sum()) if self.atoms else 0.0

    @property
    def is_finite(self) -> bool:
        return self.density is None

    def small_jump_mean(self) -> float:
        """``int x 1_{|x|<1} eta(dx)`` over the atoms."""
        if not self.atoms:
            return 0.0
        x, m = self.locations, self.masses
        return float(np.sum(np.where(np.abs(x) < 1, x * m, 0.0)))

    def integrability(self) -> float:
        """``int min(x**2, 1) eta(dx)``; raises if not finite."""
        total = float(np.sum(np.minimum(self.locations**2, 1.0) * self.masses)) if self.atoms else 0.0
        if self.density is not None:
            d = self.density
            inner = _quad(lambda x: x * x * d.even(x), 0.0, 1.0)
            outer = _quad(lambda y: d.even(1.0 / y) / (y * y), 0.0, 1.0)
            total += inner + outer
        if not math.isfinite(total):
            raise InvalidTriplet("int min(x^2, 1) eta(dx) is not finite")
        return total


@dataclass(frozen=True)
class LevyTriplet:
    """Levy-Khinchine data (drift, sigma, eta) plus the family tag it came from.

    Use the family constructors (``poisson``, ``compound_poisson``,
    ``jump_diffusion``, ``brownian``, ``symmetric_stable``) rather than the
    raw initialiser; they derive the triplet from the tag parameters.
    """

    drift: float = 0.0
    sigma: float = 0.0
    measure: LevyMeasure = field(default_factory=LevyMeasure)
    family: Family = Family.CUSTOM
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.drift):
            raise InvalidTriplet("drift must be finite")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise InvalidTriplet(f"diffusion coefficient must be >= 0, got {self.sigma}")
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "params", dict(self.params))
        self.measure.integrability()
        if self.family is Family.SYMMETRIC_STABLE:
            alpha, scale = self.params.get("alpha"), self.params.get("scale")
            if alpha is None or scale is None or not 0 < alpha <= 2 or not scale > 0:
                raise InvalidTriplet("symmetric_stable needs 0 < alpha <= 2 and scale > 0")

    # -- family constructors -------------------------------------------------

    @classmethod
    def poisson(cls, rate: float = 1.0) -> "LevyTriplet":
        if not rate >= 0:
            raise InvalidTriplet(f"rate must be >= 0, got {rate}")
        atoms = ((1.0, rate),) if rate > 0 else ()
        return cls(0.0, 0.0, LevyMeasure(atoms), Family.POISSON, {"rate": float(rate)})

    @classmethod
    def compound_poisson(cls, rate: float, jumps: Sequence[float], probs: Sequence[float] | None = None):
        """Pure-jump compound Poisson process; ``probs`` defaults to uniform."""
        jumps, probs = _jump_law(jumps, probs)
        if not rate >= 0:
            raise InvalidTriplet(f"rate must be >= 0, got {rate}")
        measure = _atoms_from_law(rate, jumps, probs)
        params = {"rate": float(rate), "jumps": list(jumps), "probs": list(probs)}
        # truncation compensator: pure jumps means zero linear drift
        return cls(measure.small_jump_mean(), 0.0, measure, Family.COMPOUND_POISSON, params)

    @classmethod
    def jump_diffusion(
        cls,
        mu: float = 0.0,
        sigma: float = 0.0,
        rate: float = 0.0,
        jumps: Sequence[float] = (),
        probs: Sequence[float] | None = None,
    ) -> "LevyTriplet":
        """``mu*t + sigma*W_t`` plus an independent compound Poisson part."""
        if len(jumps):
            jumps, probs = _jump_law(jumps, probs)
        else:
            jumps, probs = (), ()
        if not rate >= 0:
            raise InvalidTriplet(f"rate must be >= 0, got {rate}")
        measure = _atoms_from_law(rate, jumps, probs) if jumps else LevyMeasure()
        params = {"mu": float(mu), "sigma": float(sigma), "rate": float(rate),
                  "jumps": list(jumps), "probs": list(probs)}
        return cls(mu + measure.small_jump_mean(), float(sigma), measure, Family.JUMP_DIFFUSION, params)

    @classmethod
    def brownian(cls, sigma: float = 1.0, mu: float = 0.0) -> "LevyTriplet":
        return cls.jump_diffusion(mu=mu, sigma=sigma)

    @classmethod
    def symmetric_stable(cls, alpha: float, scale: float = 1.0) -> "LevyTriplet":
        """Exponent ``scale*|u|**alpha``; alpha = 2 is Brownian with sigma**2 = 2*scale."""
        if not 0 < alpha <= 2:
            raise InvalidTriplet(f"alpha must lie in (0, 2], got {alpha}")
        if not scale > 0:
            raise InvalidTriplet(f"scale must be positive, got {scale}")
        params = {"alpha": float(alpha), "scale": float(scale)}
        if alpha == 2:
            return cls(0.0, math.sqrt(2 * scale), LevyMeasure(), Family.SYMMETRIC_STABLE, params)
        density = power_law_density(stable_density_coefficient(alpha, scale), alpha)
        return cls(0.0, 0.0, LevyMeasure((), density), Family.SYMMETRIC_STABLE, params)

    # -- derived quantities --------------------------------------------------

    def as_custom(self) -> "LevyTriplet":
        """Same (drift, sigma, eta) with the tag dropped, forcing generic evaluation."""
        return LevyTriplet(self.drift, self.sigma, self.measure, Family.CUSTOM, {})

    @property
    def linear_drift(self) -> float:
        """Drift of the path, i.e. the triplet drift minus the truncation compensator."""
        return self.drift - self.measure.small_jump_mean()

    @property
    def default_tolerance(self) -> float:
        if self.family is Family.CUSTOM and self.measure.density is not None:
            return QUADRATURE_TOL
        return CLOSED_FORM_TOL


def _jump_law(jumps, probs):
    jumps = tuple(float(x) for x in jumps)
    if not jumps:
        raise InvalidTriplet("jump law needs at least one jump size")
    if probs is None:
        probs = tuple(1.0 / len(jumps) for _ in jumps)
    probs = tuple(float(p) for p in probs)
    if len(probs) != len(jumps):
        raise InvalidTriplet("jumps and probs differ in length")
    if any(p <= 0 for p in probs) or not math.isclose(sum(probs), 1.0, rel_tol=1e-12):
        raise InvalidTriplet("jump probabilities must be positive and sum to 1")
    return jumps, probs


def _atoms_from_law(rate, jumps, probs) -> LevyMeasure:
    if rate == 0:
        return LevyMeasure()
    merged: dict[float, float] = {}
    for x, p in zip(jumps, probs):
        merged[x] = merged.get(x, 0.0) + rate * p
    return LevyMeasure(tuple(sorted(merged.items())))


# -- exponent ------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentValue:
    u: float
    a_part: float
    b_part: float

    @property
    def psi(self) -> complex:
        return complex(self.a_part, self.b_part)

    @property
    def modulus_squared(self) -> float:
        return self.a_part * self.a_part + self.b_part * self.b_part

    def char_function(self, t: float) -> complex:
        return np.exp(-t * self.psi)

    def normalization(self, tol: float = 0.0) -> float:
        if not self.a_part > tol:
            raise DegenerateTheta(f"a({self.u!r}) = {self.a_part!r} <= {tol!r}: c(u) undefined")
        return math.sqrt(self.modulus_squared / (2.0 * self.a_part))


def _quad(f, lo, hi, **kwargs) -> float:
    res = integrate.quad(f, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=1e-12, limit=500, full_output=1, **kwargs)
    value, abserr = res[0], res[1]
    if not math.isfinite(value) or abserr > max(1e-8, 1e-8 * abs(value)):
        msg = res[3] if len(res) > 3 else ""
        raise QuadratureFailure(f"quadrature on [{lo}, {hi}] did not converge (err {abserr:.3g}) {msg}")
    return value


def _density_exponent(u: float, d: LevyDensity) -> tuple[float, float]:
    """Quadrature of the density part of (a(u), b(u)) for u > 0.

    Splits at |x| = 1. The near-zero pieces use x**k factorisations weighted
    by the declared singularity; the |x| >= 1 tails use Fourier-weighted
    quadrature for the oscillating parts and x -> 1/x for the mass.
    """
    ze = d.zero_exponent

    def x_floor(x):
        # QAWS may sample the singular endpoint itself
        return x if x > 1e-30 else 1e-30

    def one_minus_cos_over_x2(x):
        h = 0.5 * u * x
        return 0.5 * u * u * (math.sin(h) / h) ** 2 if h != 0 else 0.5 * u * u

    def sin_minus_x_over_x3(x):
        z = u * x
        if abs(z) < 1e-2:
            z2 = z * z
            return u**3 * (-1.0 / 6 + z2 / 120 - z2 * z2 / 5040)
        return (math.sin(z) - z) / x**3

    # |x| < 1: integrand = smooth(x) * x**(k - ze), weight x**(k - ze) via QAWS
    a_inner = _quad(lambda x: one_minus_cos_over_x2(x) * d.even(x_floor(x)) * x_floor(x) ** ze, 0.0, 1.0,
                    weight="alg", wvar=(2.0 - ze, 0.0))
    b_inner = _quad(lambda x: sin_minus_x_over_x3(x) * d.odd(x_floor(x)) * x_floor(x) ** ze, 0.0, 1.0,
                    weight="alg", wvar=(3.0 - ze, 0.0))
    # |x| >= 1
    tail_mass = _quad(lambda y: d.even(1.0 / y) / (y * y), 0.0, 1.0)
    cos_tail = _quad(d.even, 1.0, math.inf, weight="cos", wvar=u)
    sin_tail = _quad(d.odd, 1.0, math.inf, weight="sin", wvar=u)
    a = a_inner + tail_mass - cos_tail
    b = -(b_inner + sin_tail)
    return a, b


def levy_exponent(u: float, triplet: LevyTriplet) -> ExponentValue:
    """Evaluate psi(u) = a(u) + i b(u) for the given triplet.

    Tagged families use closed forms; a density in a ``Custom`` triplet is
    integrated numerically.
    """
    u = float(u)
    if u == 0.0:
        return ExponentValue(0.0, 0.0, 0.0)
    if triplet.family is Family.SYMMETRIC_STABLE:
        alpha, scale = triplet.params["alpha"], triplet.params["scale"]
        return ExponentValue(u, scale * abs(u) ** alpha, 0.0)

    a = 0.5 * triplet.sigma**2 * u * u
    b = -triplet.drift * u
    m = triplet.measure
    if m.atoms:
        x, mass = m.locations, m.masses
        ux = u * x
        # 1 - cos(ux) = 2 sin^2(ux/2), exact zero at multiples of 2*pi/x
        a += float(np.sum(mass * 2.0 * np.sin(0.5 * ux) ** 2))
        b -= float(np.sum(mass * (np.sin(ux) - np.where(np.abs(x) < 1, ux, 0.0))))
    if m.density is not None:
        da, db = _density_exponent(abs(u), m.density)
        a += da
        b += db if u > 0 else -db
    return ExponentValue(u, a, b)


def char_function(u: float, t: float, triplet: LevyTriplet) -> complex:
    """``E exp(iu X_t) = exp(-t psi(u))``."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return 1 + 0j
    return complex(levy_exponent(u, triplet).char_function(t))


def normalization_constant(theta: float, triplet: LevyTriplet, tol: float | None = None) -> float:
    """``c(theta) = sqrt(|psi(theta)|**2 / (2 a(theta)))``."""
    tol = triplet.default_tolerance if tol is None else tol
    return levy_exponent(theta, triplet).normalization(tol)


# -- classification -------------------------------------------------------------


class ThetaClass(str, Enum):
    COMPLEX_ADMISSIBLE = "ComplexAdmissible"
    REAL_DEGENERATE = "RealDegenerate"
    NULL_DEGENERATE = "NullDegenerate"
    INADMISSIBLE = "Inadmissible"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Classification:
    kind: ThetaClass
    reason: str = ""

    def __str__(self):
        return f"{self.kind.value}({self.reason})" if self.reason else self.kind.value


def _imaginary_part_vanishes(theta: float, triplet: LevyTriplet, tol: float) -> bool:
    """True when sin(theta * X_s) == 0 for every reachable level X_s."""
    m = triplet.measure
    if triplet.sigma > 0 or m.density is not None:
        return False
    if triplet.family is Family.SYMMETRIC_STABLE:
        return False
    if abs(theta * triplet.linear_drift) > tol:
        return False
    if not m.atoms:
        return True
    # same scale as the a(2 theta) <= tol test, which sums 2 m sin^2(theta x)
    return bool(np.all(np.sin(theta * m.locations) ** 2 <= tol))


def classify_theta(theta: float, triplet: LevyTriplet, tol: float | None = None) -> Classification:
    tol = triplet.default_tolerance if tol is None else tol
    if not tol > 0:
        raise ValueError("tol must be positive")
    e1 = levy_exponent(theta, triplet)
    if math.sqrt(e1.modulus_squared) <= tol:
        return Classification(ThetaClass.NULL_DEGENERATE)
    a1 = e1.a_part
    a2 = levy_exponent(2 * theta, triplet).a_part
    if a1 > tol and a2 > tol:
        return Classification(ThetaClass.COMPLEX_ADMISSIBLE)
    if a1 > tol:
        if _imaginary_part_vanishes(theta, triplet, tol):
            return Classification(ThetaClass.REAL_DEGENERATE)
        return Classification(
            ThetaClass.INADMISSIBLE, f"a(2*theta)={a2:.3g} <= tol but Im x does not vanish identically"
        )
    return Classification(ThetaClass.INADMISSIBLE, f"a(theta)={a1:.3g} <= tol while psi(theta) != 0")


@dataclass
class AdmissibilityReport:
    thetas: list
    classes: list
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def admissible_vector(thetas: Sequence[float], triplet: LevyTriplet, tol: float | None = None) -> AdmissibilityReport:
    """Check every theta_j is ComplexAdmissible and a(theta_j +/- theta_h) > tol."""
    thetas = [float(t) for t in thetas]
    if not thetas:
        raise ValueError("thetas must be non-empty")
    tol = triplet.default_tolerance if tol is None else tol
    classes = [classify_theta(t, triplet, tol) for t in thetas]
    failures = []
    for j, cls in enumerate(classes):
        if cls.kind is not ThetaClass.COMPLEX_ADMISSIBLE:
            failures.append(f"theta_{j + 1}={thetas[j]!r} is {cls}")
    for j in range(len(thetas)):
        for h in range(j + 1, len(thetas)):
            for c1, sign in ((1, "+"), (-1, "-")):
                val = levy_exponent(thetas[j] + c1 * thetas[h], triplet).a_part
                if not val > tol:
                    shown = "0" if abs(val) <= tol else f"{val:.3g}"
                    failures.append(f"a(theta_{j + 1}{sign}theta_{h + 1})={shown}")
    return AdmissibilityReport(thetas, classes, failures)


# -- JSON -----------------------------------------------------------------------


def triplet_to_dict(triplet: LevyTriplet) -> dict:
    out = {
        "family": triplet.family.value,
        "params": dict(triplet.params),
        "drift": triplet.drift,
        "sigma": triplet.sigma,
        "atoms": [{"x": x, "mass": m} for x, m in triplet.measure.atoms],
    }
    d = triplet.measure.density
    if d is not None:
        if d.description is None:
            raise ValueError("density without a description cannot be serialised")
        out["density"] = dict(d.description)
    return out


def triplet_from_dict(doc: Mapping) -> LevyTriplet:
    family = Family(doc.get("family", "custom"))
    p = dict(doc.get("params", {}))
    try:
        if family is Family.POISSON:
            t = LevyTriplet.poisson(p.get("rate", 1.0))
        elif family is Family.COMPOUND_POISSON:
            t = LevyTriplet.compound_poisson(p["rate"], p["jumps"], p.get("probs"))
        elif family is Family.JUMP_DIFFUSION:
            t = LevyTriplet.jump_diffusion(p.get("mu", 0.0), p.get("sigma", 0.0), p.get("rate", 0.0),
                                           p.get("jumps", ()), p.get("probs"))
        elif family is Family.SYMMETRIC_STABLE:
            t = LevyTriplet.symmetric_stable(p["alpha"], p.get("scale", 1.0))
        else:
            density = None
            if doc.get("density"):
                dd = doc["density"]
                if dd.get("kind") != "power_law":
                    raise InvalidTriplet(f"unknown density kind {dd.get('kind')!r}")
                density = power_law_density(dd["coefficient"], dd["index"])
            atoms = tuple((a["x"], a["mass"]) for a in doc.get("atoms", ()))
            return LevyTriplet(float(doc.get("drift", 0.0)), float(doc.get("sigma", 0.0)),
                               LevyMeasure(atoms, density), Family.CUSTOM, {})
    except KeyError as exc:
        raise InvalidTriplet(f"{family.value} is missing parameter {exc.args[0]!r}") from None
    # explicit triplet fields, when given, must agree with the tag
    if "drift" in doc and not math.isclose(doc["drift"], t.drift, rel_tol=1e-12, abs_tol=1e-15):
        raise InvalidTriplet(f"drift {doc['drift']} inconsistent with {family.value} parameters")
    if "sigma" in doc and not math.isclose(doc["sigma"], t.sigma, rel_tol=1e-12, abs_tol=1e-15):
        raise InvalidTriplet(f"sigma {doc['sigma']} inconsistent with {family.value} parameters")
    if "atoms" in doc:
        given = sorted((float(a["x"]), float(a["mass"])) for a in doc["atoms"])
        derived = sorted(t.measure.atoms)
        if len(given) != len(derived) or any(
            not (math.isclose(g[0], d[0]) and math.isclose(g[1], d[1])) for g, d in zip(given, derived)
        ):
            raise InvalidTriplet(f"atoms inconsistent with {family.value} parameters")
    return t
