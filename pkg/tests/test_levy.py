import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from kacstroock.errors import DegenerateTheta, InvalidTriplet, QuadratureFailure
from kacstroock.levy import (
    LevyDensity,
    LevyMeasure,
    LevyTriplet,
    ThetaClass,
    admissible_vector,
    char_function,
    classify_theta,
    levy_exponent,
    normalization_constant,
    power_law_density,
    stable_density_coefficient,
    triplet_from_dict,
    triplet_to_dict,
)

FAMILIES = {
    "poisson": LevyTriplet.poisson(1.0),
    "brownian": LevyTriplet.brownian(1.0),
    "compound_symmetric": LevyTriplet.compound_poisson(1.0, [-1.0, 1.0], [0.5, 0.5]),
    "stable_1.5": LevyTriplet.symmetric_stable(1.5),
    "jump_diffusion": LevyTriplet.jump_diffusion(0.3, 0.7, 2.0, [-0.5, 1.5], [0.25, 0.75]),
}


def pmf_char_function(u, support, pmf):
    return np.sum(pmf * np.exp(1j * u * support))


# -- closed forms and independent oracles ---------------------------------------------


@pytest.mark.parametrize("u", [0.3, 1.0, math.pi / 2, 2.5, -1.7])
def test_poisson_exponent_closed_form(u):
    ev = levy_exponent(u, LevyTriplet.poisson(2.0))
    assert ev.a_part == pytest.approx(2 * (1 - math.cos(u)), abs=1e-15)
    assert ev.b_part == pytest.approx(-2 * math.sin(u), abs=1e-15)


@pytest.mark.parametrize("u", [0.4, 1.3, math.pi / 3, 2.9])
def test_poisson_char_function_matches_pmf_sum(u):
    # oracle: E exp(iuN_t) summed directly over the Poisson pmf
    t = 1.7
    k = np.arange(200)
    oracle = pmf_char_function(u, k, stats.poisson.pmf(k, t))
    assert abs(char_function(u, t, LevyTriplet.poisson(1.0)) - oracle) < 1e-12


@pytest.mark.parametrize("u", [0.4, 1.3, 2.9])
def test_symmetric_compound_matches_skellam(u):
    # jumps +-1 at rate 1/2 each: X_t is Skellam(t/2, t/2)
    t = 2.0
    k = np.arange(-80, 81)
    oracle = pmf_char_function(u, k, stats.skellam.pmf(k, t / 2, t / 2))
    got = char_function(u, t, FAMILIES["compound_symmetric"])
    assert abs(got - oracle) < 1e-12


def test_brownian_exponent():
    ev = levy_exponent(1.3, LevyTriplet.brownian(sigma=2.0, mu=0.5))
    assert ev.a_part == pytest.approx(0.5 * 4 * 1.3**2, rel=1e-15)
    assert ev.b_part == pytest.approx(-0.5 * 1.3, rel=1e-15)


def test_normalization_examples():
    assert normalization_constant(math.pi, LevyTriplet.poisson(1.0)) == pytest.approx(1.0, abs=1e-15)
    # a = 1, b = -1 at pi/2: c = sqrt(2 / 2) = 1
    assert normalization_constant(math.pi / 2, LevyTriplet.poisson(1.0)) == pytest.approx(1.0, abs=1e-15)
    # Brownian: psi = u^2/2 real, c = sqrt(a/2) = 1/2 at u=1
    assert normalization_constant(1.0, LevyTriplet.brownian()) == pytest.approx(0.5, abs=1e-15)


def test_normalization_refuses_degenerate():
    with pytest.raises(DegenerateTheta):
        normalization_constant(2 * math.pi, LevyTriplet.poisson(1.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 1.9])
@pytest.mark.parametrize("u", [0.2, 1.0, 3.0])
def test_density_quadrature_matches_stable_closed_form(alpha, u):
    stable = LevyTriplet.symmetric_stable(alpha, 1.3)
    generic = stable.as_custom()
    closed = levy_exponent(u, stable)
    quad = levy_exponent(u, generic)
    assert quad.a_part == pytest.approx(1.3 * u**alpha, rel=1e-8)
    assert closed.a_part == pytest.approx(1.3 * u**alpha, rel=1e-15)
    assert abs(quad.b_part) < 1e-8 * closed.a_part


def test_asymmetric_density_gives_odd_b():
    d = LevyDensity(lambda x: np.where(x > 0, 1.0, 0.3) * np.abs(x) ** -1.6, 1.6, 1.6)
    trip = LevyTriplet(0.0, 0.0, LevyMeasure((), d))
    plus, minus = levy_exponent(0.8, trip), levy_exponent(-0.8, trip)
    assert plus.b_part != 0
    assert minus.b_part == -plus.b_part
    assert minus.a_part == plus.a_part


def test_quadrature_failure_is_reported():
    # a density whose tail oscillates wildly defeats the oscillatory rule
    d = LevyDensity(lambda x: (2 + np.sin(1e6 * x)) * np.abs(x) ** -2.5, 2.5, 1.5)
    with pytest.raises(QuadratureFailure):
        levy_exponent(1.0, LevyTriplet(0.0, 0.0, LevyMeasure((), d)))


# -- properties -------------------------------------------------------------------------

us = st.floats(min_value=-20, max_value=20, allow_nan=False).filter(lambda u: abs(u) > 1e-6)


@given(u=us, name=st.sampled_from(sorted(FAMILIES)))
def test_a_nonnegative_even_b_odd(u, name):
    trip = FAMILIES[name]
    p, m = levy_exponent(u, trip), levy_exponent(-u, trip)
    assert p.a_part >= 0
    assert m.a_part == pytest.approx(p.a_part, rel=1e-12, abs=1e-15)
    assert m.b_part == pytest.approx(-p.b_part, rel=1e-12, abs=1e-15)


@given(name=st.sampled_from(sorted(FAMILIES)))
def test_psi_zero_at_origin(name):
    assert levy_exponent(0.0, FAMILIES[name]).psi == 0


@settings(max_examples=200)
@given(u=us, name=st.sampled_from(sorted(FAMILIES)))
def test_char_function_modulus_at_most_one(u, name):
    assert abs(char_function(u, 0.9, FAMILIES[name])) <= 1 + 1e-15


@settings(max_examples=300)
@given(u=us, name=st.sampled_from(sorted(FAMILIES)))
def test_normalization_identity_within_ulps(u, name):
    trip = FAMILIES[name]
    ev = levy_exponent(u, trip)
    if ev.a_part <= trip.default_tolerance:
        return
    c = ev.normalization()
    lhs, rhs = c * c * 2 * ev.a_part, ev.a_part**2 + ev.b_part**2
    assert abs(lhs - rhs) <= 4 * np.spacing(rhs)


# -- classification ------------------------------------------------------------------


@pytest.mark.parametrize(
    "trip,theta,kind",
    [
        (LevyTriplet.poisson(1.0), 2 * math.pi, ThetaClass.NULL_DEGENERATE),
        (LevyTriplet.poisson(1.0), math.pi, ThetaClass.REAL_DEGENERATE),
        (LevyTriplet.poisson(1.0), 3 * math.pi, ThetaClass.REAL_DEGENERATE),
        (LevyTriplet.poisson(1.0), 3.14159265, ThetaClass.REAL_DEGENERATE),
        (LevyTriplet.poisson(1.0), math.pi / 2, ThetaClass.COMPLEX_ADMISSIBLE),
        (LevyTriplet.brownian(), 1.0, ThetaClass.COMPLEX_ADMISSIBLE),
        (LevyTriplet.symmetric_stable(1.5), 1.0, ThetaClass.COMPLEX_ADMISSIBLE),
        (FAMILIES["compound_symmetric"], math.pi, ThetaClass.REAL_DEGENERATE),
        # pi-periodic jump part but a Gaussian part keeps a(2 theta) > 0
        (LevyTriplet.jump_diffusion(0.0, 0.5, 1.0, [1.0]), math.pi, ThetaClass.COMPLEX_ADMISSIBLE),
        # a(2 theta) = 0 but a drift makes the phase rotate
        (LevyTriplet.jump_diffusion(0.4, 0.0, 1.0, [1.0]), math.pi, ThetaClass.INADMISSIBLE),
    ],
)
def test_classify(trip, theta, kind):
    assert classify_theta(theta, trip).kind is kind


def test_classify_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        classify_theta(1.0, LevyTriplet.poisson(), tol=0.0)


def test_admissible_vector_names_difference():
    rep = admissible_vector([math.pi / 2, math.pi / 2], LevyTriplet.poisson())
    assert not rep.passed
    assert "a(theta_1-theta_2)=0" in rep.failures


def test_admissible_vector_passes():
    assert admissible_vector([math.pi / 2, math.pi / 3], LevyTriplet.poisson()).passed


# -- construction and JSON ---------------------------------------------------------------


@pytest.mark.parametrize(
    "build",
    [
        lambda: LevyTriplet.poisson(-1.0),
        lambda: LevyTriplet.brownian(sigma=-1.0),
        lambda: LevyTriplet.compound_poisson(1.0, [1.0, 2.0], [0.7, 0.7]),
        lambda: LevyTriplet.symmetric_stable(2.5),
        lambda: LevyMeasure(((0.0, 1.0),)),
        lambda: LevyMeasure(((1.0, -1.0),)),
        lambda: power_law_density(1.0, 2.0),
        lambda: LevyDensity(lambda x: x, 3.5, 2.0),
    ],
)
def test_invalid_triplets(build):
    with pytest.raises(InvalidTriplet):
        build()


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_json_round_trip(name):
    trip = FAMILIES[name]
    doc = json.loads(json.dumps(triplet_to_dict(trip)))
    back = triplet_from_dict(doc)
    for u in (0.3, 1.7):
        assert levy_exponent(u, back).psi == levy_exponent(u, trip).psi


def test_json_custom_density_round_trip():
    trip = LevyTriplet(0.1, 0.2, LevyMeasure(((2.0, 0.5),), power_law_density(0.4, 1.2)))
    back = triplet_from_dict(json.loads(json.dumps(triplet_to_dict(trip))))
    assert levy_exponent(1.1, back).psi == pytest.approx(levy_exponent(1.1, trip).psi, rel=1e-12)


def test_json_inconsistent_with_tag():
    doc = triplet_to_dict(LevyTriplet.poisson(1.0))
    doc["sigma"] = 1.0
    with pytest.raises(InvalidTriplet):
        triplet_from_dict(doc)


def test_stable_density_coefficient_alpha_one():
    # Cauchy: eta(dx) = (scale / pi) |x|^-2 dx
    assert stable_density_coefficient(1.0, 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
