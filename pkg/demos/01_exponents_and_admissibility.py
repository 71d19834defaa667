"""Characteristic exponents, the normaliser c(theta), and which frequencies are usable."""
# %%
import math

import numpy as np

from kacstroock import LevyTriplet, admissible_vector, classify_theta, levy_exponent

families = {
    "poisson": LevyTriplet.poisson(1.0),
    "brownian": LevyTriplet.brownian(1.0),
    "symmetric jumps": LevyTriplet.compound_poisson(1.0, [-1.0, 1.0]),
    "stable 1.5": LevyTriplet.symmetric_stable(1.5),
}

# %% a(u), b(u) and c(u) on a few frequencies
for name, trip in families.items():
    print(name)
    for u in (0.5, 1.0, math.pi / 2, math.pi):
        ev = levy_exponent(u, trip)
        print(f"  u={u:.4f}  a={ev.a_part:.6f}  b={ev.b_part:+.6f}  c={ev.normalization():.6f}")

# %% Poisson frequencies fall into four classes
poisson = families["poisson"]
for theta in (math.pi / 2, math.pi, 3 * math.pi, 2 * math.pi):
    print(f"theta={theta:.4f}: {classify_theta(theta, poisson)}")

# symmetric jumps have b = 0, yet a(2 theta) vanishes at pi/2 and the functional stays complex
print(classify_theta(math.pi / 2, families["symmetric jumps"]))

# %% vectors also need a(theta_j +/- theta_h) > 0
for pair in ((math.pi / 2, math.pi / 3), (math.pi / 2, math.pi / 2), (0.5, 0.5 + 2 * math.pi)):
    rep = admissible_vector(pair, poisson)
    print(np.round(pair, 4), "ok" if rep.passed else rep.failures)
