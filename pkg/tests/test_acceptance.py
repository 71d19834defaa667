"""End-to-end acceptance suite, one test per numbered criterion.

Each test records a ``criterion N: PASS|FAIL`` line, shown in the pytest terminal summary and
printed directly when this file is run as a script. Tolerances are the literal ones; statistics
are recomputed with numpy from raw ensembles rather than taken from the verification module.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from conftest import ACCEPTANCE_LINES
from kacstroock.approximation import ExperimentConfig, sample_driver, simulate
from kacstroock.config import load_preset
from kacstroock.hypotheses import h1_value, h2_gap_exponent, h2_value, h3_value, hbar_cross_value
from kacstroock.levy import LevyTriplet, ThetaClass, classify_theta, levy_exponent, normalization_constant
from kacstroock.verify import ladder_study

POISSON = LevyTriplet.poisson(1.0)
LADDER = (0.4, 0.2, 0.1, 0.05)


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def pi_half():
    return simulate(load_preset("poisson-pi-half"), workers=4)


@pytest.fixture(scope="module")
def ladder():
    return ladder_study(load_preset("poisson-pi-half"), epsilons=LADDER, replicas=5000, workers=4)


def test_criterion_01_stroock_equivalence():
    start = time.perf_counter()
    cfg = ExperimentConfig(POISSON, (math.pi,), 0.1, T=1.0, replicas=100, master_seed=2024)
    ens = simulate(cfg)
    c = normalization_constant(math.pi, POISSON)
    worst = 0.0
    upper = 2 * ens.times / cfg.epsilon**2
    for r in range(cfg.replicas):
        path = sample_driver(cfg, r)
        edges = np.append(path.breakpoints, path.horizon)
        signs = (-1.0) ** np.arange(edges.size - 1)
        # time spent in each inter-jump gap before each output time
        occupied = np.clip(np.minimum(edges[1:], upper[:, None]) - edges[:-1], 0.0, None)
        oracle = cfg.epsilon * occupied @ signs
        worst = max(worst, float(np.max(np.abs(ens.values[r, 0].real - oracle))))
    im_zero = bool(np.all(ens.values.imag == 0))
    elapsed = time.perf_counter() - start
    ok = c == 1.0 and worst <= 1e-12 and im_zero and elapsed < 1.0
    record(1, ok, f"c(pi)={c!r} max|diff|={worst:.2e} im==0:{im_zero} runtime={elapsed:.2f}s")


def test_criterion_02_normalization_identity():
    start = time.perf_counter()
    families = {
        "poisson": POISSON,
        "brownian": LevyTriplet.brownian(1.0),
        "compound-symmetric": LevyTriplet.compound_poisson(1.0, [-1.0, 1.0]),
        "stable-1.5": LevyTriplet.symmetric_stable(1.5),
    }
    worst, checked = 0.0, 0
    for trip in families.values():
        for k in range(1, 31):
            theta = k / 10
            if classify_theta(theta, trip).kind is not ThetaClass.COMPLEX_ADMISSIBLE:
                continue
            ev = levy_exponent(theta, trip)
            c = ev.normalization()
            rhs = ev.a_part**2 + ev.b_part**2
            worst = max(worst, abs(c * c * 2 * ev.a_part - rhs) / np.spacing(rhs))
            checked += 1
    elapsed = time.perf_counter() - start
    record(2, worst <= 4 and elapsed < 1.0, f"{checked} points, worst {worst:.0f} ulps, runtime={elapsed:.2f}s")


def test_criterion_03_limit_moments():
    start = time.perf_counter()
    ens = simulate(load_preset("poisson-pi-half"), workers=1)
    elapsed = time.perf_counter() - start
    z = ens.values[:, 0, -1]
    var_re, var_im = z.real.var(ddof=1), z.imag.var(ddof=1)
    cov = np.cov(z.real, z.imag)[0, 1]
    m4 = np.mean(np.abs(z) ** 4)
    ok = abs(var_re - 1) <= 0.06 and abs(var_im - 1) <= 0.06 and abs(cov) <= 0.05 and abs(m4 - 8) <= 0.5
    record(3, ok and elapsed < 120, f"var_re={var_re:.4f} var_im={var_im:.4f} cov={cov:+.4f} "
                                    f"E|x|^4={m4:.3f} single-thread runtime={elapsed:.1f}s")


def test_criterion_04_normality_trend(ladder):
    med = ladder.median_ks
    ok = ladder.ks_non_increasing() and med[-1] <= 0.025
    record(4, ok, "median KS " + " ".join(f"eps={e}:{m:.4f}" for e, m in zip(LADDER, med)))


def test_criterion_05_quadratic_variation(pi_half):
    grid = np.linspace(0.0, 1.0, 101)
    idx = np.searchsorted(pi_half.times, grid)
    assert np.allclose(pi_half.times[idx], grid, rtol=0, atol=1e-12)
    d = np.diff(pi_half.values[:, 0, idx], axis=1)
    qre = np.mean(np.sum(d.real**2, axis=1))
    qim = np.mean(np.sum(d.imag**2, axis=1))
    cross = np.mean(np.sum(d.real * d.imag, axis=1))
    ok = abs(qre - 1) <= 0.06 and abs(qim - 1) <= 0.06 and abs(cross) <= 0.05
    record(5, ok, f"sum dRe^2={qre:.4f} sum dIm^2={qim:.4f} cross={cross:+.4f}")


def test_criterion_06_tightness(ladder):
    # the ladder at the preset's own master seed; the other seeds are reported alongside
    r, se = ladder.tightness[:, 0], ladder.tightness_se[:, 0]
    slope, slope_se = ladder.tightness_trend(0)
    bounded = ladder.tightness_bounded(0)
    within = int(np.sum(ladder.tightness <= ladder.tightness_limit + 3 * ladder.tightness_se))
    detail = ("ratios " + " ".join(f"{v:.3f}+-{s:.3f}" for v, s in zip(r, se))
              + f" slope={slope:+.3f}+-{slope_se:.3f}; all seeds: {within}/{ladder.tightness.size} within bound")
    record(6, bounded and ladder.no_increasing_trend(0), detail)


def test_criterion_07_hypothesis_closed_forms():
    th, th2 = math.pi / 2, math.pi / 3
    reports = [fn(th, POISSON, 0.0, 1.0, 0.1, mode="both") for fn in (h1_value, h2_value, h3_value)]
    reports += [hbar_cross_value(th, th2, s, POISSON, 0.0, 1.0, 0.1, mode="both") for s in (1, -1)]
    worst = max(r.relative_discrepancy for r in reports)
    exponent = h2_gap_exponent(th, POISSON, 0.0, 1.0, LADDER)
    record(7, worst <= 0.01 and exponent >= 1.9, f"worst rel discrepancy={worst:.2e} H2 gap exponent={exponent:.3f}")


def test_criterion_08_multi_dimensional(pi_half):
    md = simulate(load_preset("md-poisson-2d"), workers=4)
    z = md.values[:, :, -1]
    parts = np.stack([z[:, 0].real, z[:, 0].imag, z[:, 1].real, z[:, 1].imag])
    cov = np.cov(parts)
    diag = np.diag(cov)
    off = cov[np.triu_indices(4, 1)]
    bitwise = np.array_equal(md.component(0), pi_half.component(0))
    ok = np.all(np.abs(diag - 1) <= 0.06) and np.all(np.abs(off) <= 0.06) and off.size == 6 and bitwise
    record(8, bool(ok), "diag " + " ".join(f"{v:.4f}" for v in diag) + " off max|.|="
           f"{np.max(np.abs(off)):.4f} component0 bitwise==1D:{bitwise}")


@pytest.fixture(scope="module")
def pi_ensemble():
    return simulate(load_preset("poisson-pi"), workers=4)


def test_criterion_09_real_degenerate(pi_ensemble):
    z = pi_ensemble.values[:, 0, -1]
    im_zero = bool(np.all(pi_ensemble.values.imag == 0))
    ks = stats.kstest(z.real, "norm").statistic
    record(9, im_zero and ks <= 0.025, f"im==0:{im_zero} KS vs N(0,1)={ks:.4f} var(Re x(1))={z.real.var(ddof=1):.4f}")


def test_real_degenerate_matches_variance_two(pi_ensemble):
    # companion to criterion 9: the limit of Re x(t) under the 2t/eps^2 time change has variance 2t
    ks = stats.kstest(pi_ensemble.values[:, 0, -1].real, "norm", args=(0, math.sqrt(2))).statistic
    print(f"real-degenerate KS vs N(0,2)={ks:.4f}")
    assert ks <= 0.025


def test_criterion_10_refusals():
    cli = [sys.executable, "-m", "kacstroock"]
    null = subprocess.run(cli + ["simulate", "--family", "poisson", "--theta", str(2 * math.pi), "--epsilon", "0.1",
                                 "--workers", "1"], capture_output=True, text=True)
    pair = subprocess.run(cli + ["simulate", "--preset", "md-poisson-2d", "--theta",
                                 f"{math.pi / 2},{math.pi / 2}", "--workers", "1"], capture_output=True, text=True)
    ok_null = null.returncode == 2 and "NullDegenerate" in null.stderr
    ok_pair = pair.returncode == 2 and "a(theta_1-theta_2)=0" in pair.stderr
    record(10, ok_null and ok_pair, f"2pi exit={null.returncode} ({null.stderr.strip()!r}); "
                                    f"pair exit={pair.returncode} ({pair.stderr.strip()!r})")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
