"""At theta = pi the Poisson functional is a scaled telegraph signal.

exp(i pi N_s) = (-1)^{N_s}, so x(t) is eps times the signed time spent in even
and odd states. The integrator must reproduce that sum exactly.
"""
# %%
import math

import numpy as np

from kacstroock import ExperimentConfig, LevyTriplet, build_approximation, sample_driver, simulate

cfg = ExperimentConfig(LevyTriplet.poisson(1.0), (math.pi,), epsilon=0.1, T=1.0, n_out=8, partition_cells=0)
path = sample_driver(cfg, 0)
x = build_approximation(cfg, 0)
print(f"{path.breakpoints.size - 1} jumps on [0, {path.horizon:g})")

# %% signed occupation time, gap by gap
edges = np.append(path.breakpoints, path.horizon)
signs = (-1.0) ** np.arange(edges.size - 1)
for t, re, im in zip(x.times, x.re, x.im):
    upper = 2 * t / cfg.epsilon**2
    occ = np.clip(np.minimum(edges[1:], upper) - edges[:-1], 0.0, None)
    print(f"t={t:.3f}  re={re:+.6f}  telegraph={cfg.epsilon * occ @ signs:+.6f}  im={im}")

# %% the limit is a real Brownian motion with variance 2t (rate 2 from the 2t/eps^2 clock)
ens = simulate(ExperimentConfig(LevyTriplet.poisson(1.0), (math.pi,), 0.05, replicas=4000, n_out=4), workers=2)
print("var Re x(1) =", ens.component(0)[:, -1].real.var(ddof=1))
