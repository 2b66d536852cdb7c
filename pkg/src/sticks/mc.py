"""Seeded Monte Carlo estimates of the polygon-avoidance probability.

Two samplers produce the sorted stick lengths U_(1) <= ... <= U_(n):

* ``uniform-sort``: n uniforms on [0, 1), sorted.
* ``exponential-sums``: U_(i) = (x_1 + ... + x_i) / (x_1 + ... + x_{n+1})
  for n+1 unit exponentials, drawn as -log(1 - u).

A draw counts as a success when every window of k consecutive order
statistics sums to at most the next one.

Random streams: worker ``w`` of a run seeded with ``seed`` draws from a Philox
counter-based generator keyed by ``SeedSequence(seed, spawn_key=(w,))``.  The
trials are split as evenly as possible with the first ``trials % workers``
workers taking one extra, and each worker consumes its stream in fixed-size
chunks, so a report depends only on (k, n, trials, seed, workers, sampler).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from statistics import NormalDist
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DomainError
from .kfib import check_order

SAMPLERS = ("uniform-sort", "exponential-sums")
CHUNK = 1 << 16
Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class StickSample:
    lengths: tuple[float, ...]
    sorted: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.sorted:
            object.__setattr__(self, "sorted", tuple(sorted(self.lengths)))

    @property
    def n(self) -> int:
        return len(self.lengths)


# -- conditions ------------------------------------------------------------

def window_condition_holds(sample: StickSample | Sequence[float], k: int) -> bool:
    """Every k consecutive order statistics sum to at most the next one.

    Vacuously true when there are at most k sticks.
    """
    s = sample.sorted if isinstance(sample, StickSample) else tuple(sample)
    return all(math.fsum(s[l:l + k]) <= s[l + k] for l in range(len(s) - k))


def no_subset_forms_polygon(lengths: Sequence[float], k: int) -> bool:
    """Brute force over all (k+1)-subsets: none has its largest side shorter
    than the sum of the other k."""
    for subset in combinations(lengths, k + 1):
        top = max(subset)
        rest = list(subset)
        rest.remove(top)
        if math.fsum(rest) > top:
            return False
    return True


def window_condition_batch(sorted_rows: np.ndarray, k: int) -> np.ndarray:
    """Row-wise :func:`window_condition_holds` for an (m, n) sorted array."""
    m, n = sorted_rows.shape
    if n <= k:
        return np.ones(m, dtype=bool)
    sums = sliding_window_view(sorted_rows, k, axis=1)[:, : n - k].sum(axis=-1)
    return np.all(sums <= sorted_rows[:, k:], axis=1)


def no_subset_forms_polygon_batch(rows: np.ndarray, k: int) -> np.ndarray:
    """Row-wise :func:`no_subset_forms_polygon` for an (m, n) array."""
    m, n = rows.shape
    ok = np.ones(m, dtype=bool)
    for idx in combinations(range(n), k + 1):
        sub = rows[:, idx]
        top = sub.max(axis=1)
        ok &= sub.sum(axis=1) - top <= top
    return ok


# -- samplers ----------------------------------------------------------------

def substream(seed: int, worker: int) -> np.random.Generator:
    """Independent generator for ``worker`` within a run seeded by ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(worker,))))


def draw_uniform_sorted(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    rows = rng.random((m, n))
    rows.sort(axis=1)
    return rows


def draw_exponential_sorted(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    x = -np.log1p(-rng.random((m, n + 1)))
    np.cumsum(x, axis=1, out=x)
    return x[:, :n] / x[:, n:]


_DRAWS = {"uniform-sort": draw_uniform_sorted, "exponential-sums": draw_exponential_sorted}


def sample_uniform_sorted(n: int, rng: np.random.Generator) -> StickSample:
    lengths = rng.random(n)
    return StickSample(tuple(lengths.tolist()), tuple(np.sort(lengths).tolist()))


def sample_exponential_representation(n: int, rng: np.random.Generator) -> StickSample:
    """Order statistics straight from normalized exponential partial sums.

    The unsorted draw is not recoverable, so ``lengths`` equals ``sorted``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1 (got {n})")
    s = tuple(draw_exponential_sorted(rng, 1, n)[0].tolist())
    return StickSample(s, s)


# -- estimation --------------------------------------------------------------

@dataclass(frozen=True)
class SimulationConfig:
    k: int
    n: int
    trials: int = 10**6
    seed: int = 0
    workers: int = 1
    sampler: str = "uniform-sort"

    def __post_init__(self):
        check_order(self.k)
        if self.n < 1:
            raise DomainError(f"n must be >= 1 (got {self.n})")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1 (got {self.trials})")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be in [0, 2**64) (got {self.seed})")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1 (got {self.workers})")
        if self.sampler not in SAMPLERS:
            raise DomainError(f"sampler must be one of {', '.join(SAMPLERS)} (got {self.sampler!r})")

    def worker_trials(self) -> list[int]:
        base, extra = divmod(self.trials, self.workers)
        return [base + (w < extra) for w in range(self.workers)]


@dataclass(frozen=True)
class Tally:
    successes: int = 0
    trials: int = 0

    def __add__(self, other: Tally) -> Tally:
        return Tally(self.successes + other.successes, self.trials + other.trials)


def run_worker(config: SimulationConfig, worker: int) -> Tally:
    trials = config.worker_trials()[worker]
    if config.n <= config.k:
        return Tally(trials, trials)
    rng = substream(config.seed, worker)
    draw = _DRAWS[config.sampler]
    successes = 0
    for start in range(0, trials, CHUNK):
        rows = draw(rng, min(CHUNK, trials - start), config.n)
        successes += int(np.count_nonzero(window_condition_batch(rows, config.k)))
    return Tally(successes, trials)


@dataclass(frozen=True)
class EstimateReport:
    config: SimulationConfig
    successes: int
    trials: int
    estimate: float
    stderr: float
    ci95: tuple[float, float]

    @classmethod
    def from_tally(cls, config: SimulationConfig, tally: Tally) -> EstimateReport:
        p = tally.successes / tally.trials
        se = math.sqrt(p * (1.0 - p) / tally.trials)
        ci = (max(0.0, p - Z95 * se), min(1.0, p + Z95 * se))
        return cls(config, tally.successes, tally.trials, p, se, ci)

    def to_dict(self) -> dict:
        c = self.config
        return {
            "k": c.k, "n": c.n, "trials": self.trials, "seed": c.seed,
            "workers": c.workers, "sampler": c.sampler, "successes": self.successes,
            "estimate": self.estimate, "stderr": self.stderr, "ci95": list(self.ci95),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> EstimateReport:
        config = SimulationConfig(d["k"], d["n"], d["trials"], d["seed"], d["workers"], d["sampler"])
        lo, hi = d["ci95"]
        return cls(config, d["successes"], d["trials"], float(d["estimate"]),
                   float(d["stderr"]), (float(lo), float(hi)))

    @classmethod
    def from_json(cls, text: str) -> EstimateReport:
        return cls.from_dict(json.loads(text))


def estimate(config: SimulationConfig) -> EstimateReport:
    """Run the configured trials and summarize them.

    Workers run on a thread pool (numpy releases the GIL in the hot loops);
    their tallies are merged by addition.
    """
    if config.workers == 1:
        tallies = [run_worker(config, 0)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            tallies = list(pool.map(lambda w: run_worker(config, w), range(config.workers)))
    return EstimateReport.from_tally(config, sum(tallies, Tally()))
