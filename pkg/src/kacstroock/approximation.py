"""Kac-Stroock type approximations of complex Brownian motion.

For a driver X and a frequency theta,

    x(t) = c(theta) * eps * int_0^{2t/eps^2} exp(i*theta*X_s) ds,

evaluated exactly for piecewise-constant driver paths.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import AdmissibilityFailure, DegenerateTheta, HorizonTooShort
from .levy import (
    Classification,
    LevyTriplet,
    ThetaClass,
    admissible_vector,
    classify_theta,
    levy_exponent,
    triplet_to_dict,
)
from .sampler import Exactness, PathSample, SamplerSeed, sample_path

DEFAULT_N_OUT = 256
DEFAULT_PARTITION_CELLS = 100


@dataclass(frozen=True)
class PathMeta:
    epsilon: float
    theta: float
    c_theta: float
    classification: Classification | None = None
    driver_exactness: Exactness | None = None
    component: int = 0

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "theta": self.theta,
            "c_theta": self.c_theta,
            "classification": None if self.classification is None else str(self.classification),
            "driver_exactness": None if self.driver_exactness is None else self.driver_exactness.value,
            "component": self.component,
        }


@dataclass(frozen=True, eq=False)
class ComplexPath:
    times: np.ndarray
    re: np.ndarray
    im: np.ndarray
    meta: PathMeta

    def __post_init__(self):
        for name in ("times", "re", "im"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def values(self) -> np.ndarray:
        return self.re + 1j * self.im

    def __eq__(self, other):
        if not isinstance(other, ComplexPath):
            return NotImplemented
        return (
            self.meta == other.meta
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.re, other.re)
            and np.array_equal(self.im, other.im)
        )

    def to_csv(self, path) -> Path:
        """Write columns t, re, im (plus component) and a JSON metadata sidecar."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re", "im", "component"])
            for t, r, i in zip(self.times, self.re, self.im):
                w.writerow([repr(float(t)), repr(float(r)), repr(float(i)), self.meta.component])
        path.with_suffix(".json").write_text(json.dumps(self.meta.to_dict(), sort_keys=True, indent=2))
        return path


def uniform_times(T: float, n: int) -> np.ndarray:
    return np.arange(n + 1, dtype=float) * (T / n)


def merge_times(*grids: np.ndarray, T: float = 1.0) -> np.ndarray:
    """Sorted union of time grids, collapsing points closer than 1e-12*T."""
    allt = np.sort(np.concatenate(grids))
    keep = np.concatenate([[True], np.diff(allt) > 1e-12 * max(T, 1.0)])
    return allt[keep]


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation experiment; ``thetas`` of length m >= 1 share one driver."""

    triplet: LevyTriplet
    thetas: tuple
    epsilon: float
    T: float = 1.0
    n_out: int = DEFAULT_N_OUT
    replicas: int = 1000
    master_seed: int = 0
    grid_step: float | None = None
    allow_degenerate: bool = False
    partition_cells: int = DEFAULT_PARTITION_CELLS
    name: str = ""
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        if not self.thetas:
            raise ValueError("thetas must be non-empty")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.T >= 0:
            raise ValueError("T must be >= 0")
        if self.n_out < 2:
            raise ValueError("n_out must be >= 2")
        if self.replicas < 0:
            raise ValueError("replicas must be >= 0")

    @property
    def m(self) -> int:
        return len(self.thetas)

    @property
    def horizon(self) -> float:
        return 2.0 * self.T / self.epsilon**2

    @property
    def step(self) -> float:
        if self.grid_step is not None:
            return self.grid_step
        return min(1e-3, self.epsilon**2 / 20)

    def output_times(self) -> np.ndarray:
        """Display grid t_k = kT/n_out merged with the QV partition grid."""
        if self.T == 0:
            return np.zeros(1)
        grids = [uniform_times(self.T, self.n_out)]
        if self.partition_cells:
            grids.append(uniform_times(self.T, self.partition_cells))
        return merge_times(*grids, T=self.T)

    def with_theta(self, theta: float) -> "ExperimentConfig":
        return replace(self, thetas=(theta,))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "triplet": triplet_to_dict(self.triplet),
            "thetas": list(self.thetas),
            "epsilon": self.epsilon,
            "T": self.T,
            "n_out": self.n_out,
            "replicas": self.replicas,
            "master_seed": self.master_seed,
            "grid_step": self.grid_step,
            "allow_degenerate": self.allow_degenerate,
            "partition_cells": self.partition_cells,
        }


# -- integration ----------------------------------------------------------------


def _integrate(path: PathSample, theta, c_theta, epsilon, out_times, real_only=False) -> tuple:
    out_times = np.asarray(out_times, dtype=float)
    upper = 2.0 * out_times / epsilon**2
    if upper.size and upper.max() > path.horizon * (1 + 1e-12):
        raise HorizonTooShort(f"path horizon {path.horizon} < 2*max(t)/eps^2 = {upper.max()}")
    upper = np.minimum(upper, path.horizon)
    b, v = path.breakpoints, path.values
    lengths = np.diff(np.append(b, path.horizon))
    re_phase = np.cos(theta * v)
    # running integral up to each breakpoint, one pass over the path
    re_cum = np.concatenate([[0.0], np.cumsum(lengths * re_phase)])
    k = np.searchsorted(b, upper, side="right") - 1
    tail = upper - b[k]
    scale = c_theta * epsilon
    re = scale * (re_cum[k] + tail * re_phase[k])
    if real_only:
        im = np.zeros_like(re)
    else:
        im_phase = np.sin(theta * v)
        im_cum = np.concatenate([[0.0], np.cumsum(lengths * im_phase)])
        im = scale * (im_cum[k] + tail * im_phase[k])
    return re, im


def integrate_exact(path: PathSample, theta: float, c_theta: float, epsilon: float, out_times,
                    real_only: bool = False) -> ComplexPath:
    """Exact integral for a jump path: sum of segment overlaps times exp(i theta v_k)."""
    if path.exactness is not Exactness.EXACT_JUMP:
        raise ValueError("integrate_exact needs an ExactJump path")
    re, im = _integrate(path, theta, c_theta, epsilon, out_times, real_only)
    return ComplexPath(out_times, re, im, PathMeta(epsilon, theta, c_theta, None, path.exactness))


def integrate_grid(path: PathSample, theta: float, c_theta: float, epsilon: float, out_times,
                   real_only: bool = False) -> ComplexPath:
    """Left-point rule on a grid path; the value is held over each cell.

    The discretisation error of the driver is O(step**0.5) in RMS for
    diffusive drivers; the integral of the held path itself is exact.
    """
    if path.exactness is not Exactness.GRID_APPROX:
        raise ValueError("integrate_grid needs a GridApprox path")
    re, im = _integrate(path, theta, c_theta, epsilon, out_times, real_only)
    return ComplexPath(out_times, re, im, PathMeta(epsilon, theta, c_theta, None, path.exactness))


# -- builds -------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaPlan:
    theta: float
    c_theta: float
    classification: Classification
    real_only: bool


def plan_theta(theta: float, triplet: LevyTriplet, allow_degenerate: bool = False) -> ThetaPlan:
    """Normalisation and classification for one frequency; refuses degenerate ones."""
    cls = classify_theta(theta, triplet)
    if cls.kind is ThetaClass.NULL_DEGENERATE:
        raise DegenerateTheta(f"theta={theta!r} is NullDegenerate: psi(theta)=0 so c(theta) is 0/0")
    ev = levy_exponent(theta, triplet)
    tol = triplet.default_tolerance
    if not ev.a_part > tol:
        raise DegenerateTheta(f"theta={theta!r}: a(theta)={ev.a_part:.3g} <= tol, c(theta) undefined")
    if cls.kind is ThetaClass.INADMISSIBLE and not allow_degenerate:
        raise DegenerateTheta(f"theta={theta!r} is {cls}")
    return ThetaPlan(float(theta), ev.normalization(tol), cls, cls.kind is ThetaClass.REAL_DEGENERATE)


def sample_driver(config: ExperimentConfig, replica_index: int) -> PathSample:
    return sample_path(config.triplet, config.horizon, SamplerSeed(config.master_seed, replica_index),
                       step=config.step)


def _component(path, plan: ThetaPlan, config: ExperimentConfig, times, j: int) -> ComplexPath:
    re, im = _integrate(path, plan.theta, plan.c_theta, config.epsilon, times, plan.real_only)
    meta = PathMeta(config.epsilon, plan.theta, plan.c_theta, plan.classification, path.exactness, j)
    return ComplexPath(times, re, im, meta)


def _zero_path(plan: ThetaPlan, config: ExperimentConfig, j: int) -> ComplexPath:
    meta = PathMeta(config.epsilon, plan.theta, plan.c_theta, plan.classification, None, j)
    return ComplexPath(np.zeros(1), np.zeros(1), np.zeros(1), meta)


def build_approximation(config: ExperimentConfig, replica_index: int = 0) -> ComplexPath:
    """One replica of the 1-D approximation for ``config.thetas[0]``."""
    if config.m != 1:
        raise ValueError("build_approximation expects a single theta; use build_approximation_md")
    plan = plan_theta(config.thetas[0], config.triplet, config.allow_degenerate)
    if config.T == 0:
        return _zero_path(plan, config, 0)
    path = sample_driver(config, replica_index)
    return _component(path, plan, config, config.output_times(), 0)


def check_vector(config: ExperimentConfig) -> list:
    """Plans for every theta; raises AdmissibilityFailure for m >= 2 unless overridden."""
    if config.m >= 2 and not config.allow_degenerate:
        report = admissible_vector(config.thetas, config.triplet)
        if not report.passed:
            raise AdmissibilityFailure(report.failures)
    return [plan_theta(t, config.triplet, config.allow_degenerate) for t in config.thetas]


def build_approximation_md(config: ExperimentConfig, replica_index: int = 0) -> list:
    """All m components integrated against ONE shared driver path."""
    plans = check_vector(config)
    if config.T == 0:
        return [_zero_path(p, config, j) for j, p in enumerate(plans)]
    path = sample_driver(config, replica_index)
    times = config.output_times()
    return [_component(path, p, config, times, j) for j, p in enumerate(plans)]


# -- ensembles ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Replica-ordered stack of approximations: ``values[r, j, k]`` = x_j(t_k) of replica r."""

    times: np.ndarray
    values: np.ndarray
    plans: tuple
    config: ExperimentConfig
    exactness: Exactness | None = None

    @property
    def n_replicas(self) -> int:
        return self.values.shape[0]

    def component(self, j: int = 0) -> np.ndarray:
        return self.values[:, j, :]

    def paths(self, j: int = 0) -> list:
        out = []
        for r in range(self.n_replicas):
            p = self.plans[j]
            meta = PathMeta(self.config.epsilon, p.theta, p.c_theta, p.classification, self.exactness, j)
            out.append(ComplexPath(self.times, self.values[r, j].real, self.values[r, j].imag, meta))
        return out


def _replica_block(args) -> tuple:
    config, plans, start, stop = args
    times = config.output_times()
    block = np.empty((stop - start, len(plans), times.size), dtype=complex)
    exactness = None
    for r in range(start, stop):
        path = sample_driver(config, r)
        exactness = path.exactness
        for j, p in enumerate(plans):
            re, im = _integrate(path, p.theta, p.c_theta, config.epsilon, times, p.real_only)
            block[r - start, j].real = re
            block[r - start, j].imag = im
    return block, exactness


def simulate(config: ExperimentConfig, workers: int = 1, replicas: int | None = None) -> Ensemble:
    """Run ``config.replicas`` replicas; output is independent of ``workers``."""
    n = config.replicas if replicas is None else replicas
    plans = tuple(check_vector(config))
    times = config.output_times()
    if config.T == 0 or n == 0:
        return Ensemble(times, np.zeros((n, config.m, times.size), dtype=complex), plans, config)
    if workers <= 1:
        values, exactness = _replica_block((config, plans, 0, n))
    else:
        chunk = max(1, math.ceil(n / (4 * workers)))
        jobs = [(config, plans, s, min(n, s + chunk)) for s in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replica_block, jobs))
        values = np.concatenate([b for b, _ in results], axis=0)
        exactness = results[0][1]
    return Ensemble(times, values, plans, config, exactness)
