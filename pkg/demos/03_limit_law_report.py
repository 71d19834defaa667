"""Run the full battery of limit-law checks on a preset and show what each one measures."""
# %%
from dataclasses import replace

from kacstroock import load_preset, verify_limit

cfg = replace(load_preset("poisson-pi-half"), replicas=3000)
report = verify_limit(cfg, workers=4)

# %%
for c in report.checks:
    flag = "ok  " if c.verdict else "FAIL"
    print(f"{flag} {c.name:<28} est={c.estimate:+.4f}  target={c.target:+.4f}  tol={c.tolerance:.4f}")
print("overall:", "pass" if report.passed else "fail")

# %% variance grows linearly in t
for row in report.variance_profile[::40]:
    print(row)
