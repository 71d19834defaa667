"""Shrinking eps: the KS distance to the Gaussian limit falls, the tightness ratio stays near 6."""
# %%
from kacstroock import ladder_study, load_preset

lad = ladder_study(load_preset("poisson-pi-half"), epsilons=(0.4, 0.2, 0.1, 0.05), replicas=2000, workers=4)

# %%
for eps, med, ratios in zip(lad.epsilons, lad.median_ks, lad.tightness):
    print(f"eps={eps:<5} median KS={med:.4f}  tightness={ratios.round(2)}")
print("median KS non-increasing:", lad.ks_non_increasing())
slope, se = lad.tightness_trend()
print(f"tightness slope vs log(1/eps): {slope:+.3f} +- {se:.3f}")

# %% small eps costs more: horizon 2/eps^2 means ~2/eps^2 jumps per Poisson path
for eps in lad.epsilons:
    print(f"eps={eps}: about {2 / eps**2:.0f} jumps per replica")
