"""Piecewise-constant realisations of a Levy driver on [0, horizon]."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import StepTooCoarse, UnsampleableFamily
from .levy import Family, LevyTriplet

DEFAULT_GRID_STEP = 1e-3


class Exactness(str, Enum):
    EXACT_JUMP = "ExactJump"
    GRID_APPROX = "GridApprox"


@dataclass(frozen=True)
class SamplerSeed:
    """Per-replica stream key.

    The pair is hashed by :class:`numpy.random.SeedSequence` (entropy =
    ``master_seed``, spawn key = ``(replica_index,)``), so distinct pairs
    give independent PCG64 streams.
    """

    master_seed: int
    replica_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.replica_index < 0:
            raise ValueError("replica_index must be >= 0")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.replica_index,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True, eq=False)
class PathSample:
    """X held at ``values[k]`` on ``[breakpoints[k], breakpoints[k+1])``; the
    last level extends to ``horizon``."""

    breakpoints: np.ndarray
    values: np.ndarray
    horizon: float
    exactness: Exactness
    step: float | None = None

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.shape != v.shape or b.ndim != 1 or b.size == 0:
            raise ValueError("breakpoints and values must be 1-D arrays of equal length")
        if b[0] != 0.0 or v[0] != 0.0:
            raise ValueError("path must start at X_0 = 0 at time 0")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if b[-1] > self.horizon:
            raise ValueError("breakpoints exceed the horizon")
        b.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, PathSample):
            return NotImplemented
        return (
            self.horizon == other.horizon
            and self.exactness == other.exactness
            and self.step == other.step
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    def __call__(self, s):
        """Evaluate X at time(s) ``s`` (right-continuous)."""
        idx = np.searchsorted(self.breakpoints, s, side="right") - 1
        return self.values[idx]

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "X"])
            for t, x in zip(self.breakpoints, self.values):
                w.writerow([repr(float(t)), repr(float(x))])
        return path


def _exponential_arrivals(rng: np.random.Generator, rate: float, horizon: float) -> np.ndarray:
    """Arrival times in (0, horizon) from exponential(rate) interarrivals."""
    if rate == 0 or horizon <= 0:
        return np.empty(0)
    mean = rate * horizon
    batch = int(mean + 6 * math.sqrt(mean) + 16)
    times = np.cumsum(rng.exponential(1.0 / rate, size=batch))
    while times[-1] < horizon:
        more = times[-1] + np.cumsum(rng.exponential(1.0 / rate, size=batch))
        times = np.concatenate([times, more])
    return times[: np.searchsorted(times, horizon, side="left")]


def _jump_sizes(rng, n, jumps, probs) -> np.ndarray:
    if n == 0:
        return np.empty(0)
    if len(jumps) == 1:
        return np.full(n, float(jumps[0]))
    return rng.choice(np.asarray(jumps, dtype=float), size=n, p=np.asarray(probs, dtype=float))


def _jump_law_of(triplet: LevyTriplet):
    """(rate, jump sizes, probabilities) of the finite-activity jump part."""
    m = triplet.measure
    if not m.atoms:
        return 0.0, (), ()
    rate = m.total_mass
    return rate, tuple(m.locations), tuple(m.masses / rate)


def sample_exact_jump(rate: float, jumps, probs, horizon: float, seed: SamplerSeed | np.random.Generator) -> PathSample:
    """Exact compound Poisson path: no discretisation error."""
    if rate < 0:
        raise ValueError("rate must be >= 0")
    rng = seed.generator() if isinstance(seed, SamplerSeed) else seed
    times = _exponential_arrivals(rng, rate, horizon)
    sizes = _jump_sizes(rng, times.size, jumps, probs)
    breakpoints = np.concatenate([[0.0], times])
    values = np.concatenate([[0.0], np.cumsum(sizes)])
    return PathSample(breakpoints, values, float(horizon), Exactness.EXACT_JUMP)


def symmetric_stable_variates(rng: np.random.Generator, alpha: float, size: int) -> np.ndarray:
    """Standard symmetric alpha-stable draws, ``E exp(iuZ) = exp(-|u|**alpha)``.

    Chambers-Mallows-Stuck with beta = 0: V ~ U(-pi/2, pi/2), W ~ Exp(1).
    """
    v = np.pi * (rng.random(size) - 0.5)
    w = -np.log1p(-rng.random(size))
    if alpha == 1.0:
        return np.tan(v)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))


def sample_grid(triplet: LevyTriplet, horizon: float, step: float, seed: SamplerSeed | np.random.Generator) -> PathSample:
    """Grid increments held at the left grid point, plus exact jump superposition.

    Gaussian increments ``N(mu*dt, sigma**2*dt)`` (``mu`` the linear drift),
    or symmetric stable increments of scale ``(scale*dt)**(1/alpha)`` for the
    stable family. Finite-activity jumps keep their exact times.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if step > horizon:
        raise StepTooCoarse(f"step {step} exceeds horizon {horizon}")
    rng = seed.generator() if isinstance(seed, SamplerSeed) else seed
    n_cells = max(1, math.ceil(horizon / step - 1e-9))
    grid = np.arange(n_cells, dtype=float) * step
    dt = np.diff(np.append(grid, horizon))[:-1]  # cells whose right end is observed

    if triplet.family is Family.SYMMETRIC_STABLE:
        alpha, scale = triplet.params["alpha"], triplet.params["scale"]
        incr = (scale * dt) ** (1.0 / alpha) * symmetric_stable_variates(rng, alpha, dt.size)
    else:
        mu, sigma = triplet.linear_drift, triplet.sigma
        incr = mu * dt
        if sigma > 0:
            incr = incr + sigma * np.sqrt(dt) * rng.standard_normal(dt.size)
    diffusive = np.concatenate([[0.0], np.cumsum(incr)])

    rate, jumps, probs = _jump_law_of(triplet)
    times = _exponential_arrivals(rng, rate, horizon)
    if times.size == 0:
        return PathSample(grid, diffusive, float(horizon), Exactness.GRID_APPROX, step)
    sizes = _jump_sizes(rng, times.size, jumps, probs)
    jump_level = np.concatenate([[0.0], np.cumsum(sizes)])
    breakpoints = np.union1d(grid, times)
    cell = np.searchsorted(grid, breakpoints, side="right") - 1
    njumps = np.searchsorted(times, breakpoints, side="right")
    values = diffusive[cell] + jump_level[njumps]
    return PathSample(breakpoints, values, float(horizon), Exactness.GRID_APPROX, step)


def sample_path(triplet: LevyTriplet, horizon: float, seed: SamplerSeed, step: float | None = None) -> PathSample:
    """Sample X on [0, horizon]; exact when X is a pure finite-activity jump process."""
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if triplet.measure.density is not None and triplet.family is not Family.SYMMETRIC_STABLE:
        raise UnsampleableFamily("infinite-activity density measures are not sampled")
    pure_jump = (
        triplet.family is not Family.SYMMETRIC_STABLE
        and triplet.sigma == 0
        and triplet.linear_drift == 0
    )
    if pure_jump:
        rate, jumps, probs = _jump_law_of(triplet)
        return sample_exact_jump(rate, jumps, probs, horizon, seed)
    return sample_grid(triplet, horizon, DEFAULT_GRID_STEP if step is None else step, seed)
