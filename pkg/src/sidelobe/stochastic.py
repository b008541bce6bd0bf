"""Seeded Monte Carlo over the uniform measure on B_n.

Trial t under seed s draws its signs from numpy's Philox4x64 with
``key = s`` and ``counter = [0, 0, 0, t]``: raw word w supplies elements
64w .. 64w+63, least significant bit first, a set bit meaning -1.  Since a
trial's signs depend only on (s, t), splitting the trial range across
workers cannot change the sample.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .bounds import BoundSpec, chernoff_tail, proposition1_bound, schmidt_interval
from .bounds import threshold as bound_threshold
from .errors import DomainError
from .exact import rademacher_tail_exact
from .seqcore import BinarySequence, psl_rows

UINT64 = 1 << 64


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= self.seed < UINT64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")

    def as_dict(self):
        # workers is deliberately omitted: it never changes results
        return {"n": self.n, "trials": self.trials, "seed": self.seed}


def trial_stream(seed: int, trial: int) -> np.random.Philox:
    return np.random.Philox(key=seed, counter=[0, 0, 0, trial])


def _tail_mask(words, n):
    rem = n % 64
    if rem:
        words[..., -1] &= np.uint64((1 << rem) - 1)
    return words


def sample_sequence(n: int, stream) -> BinarySequence:
    """Draw one uniform sequence of length n from a bit generator."""
    nw = (n + 63) // 64
    words = _tail_mask(np.asarray(stream.random_raw(nw), dtype=np.uint64), n)
    return BinarySequence(n, words)


def sample_words(n: int, seed: int, first: int, count: int) -> np.ndarray:
    """Packed words of trials first .. first+count-1, shape (count, nw)."""
    nw = (n + 63) // 64
    words = _kernels.philox_trial_words(np.uint64(seed), np.uint64(0), first, count, nw)
    return _tail_mask(words, n)


def _block_rows(n):
    return max(64, (1 << 21) // max(n, 1))


def _psl_range(args):
    n, seed, first, count = args
    out = np.empty(count, dtype=np.int64)
    step = _block_rows(n)
    for off in range(0, count, step):
        c = min(step, count - off)
        out[off:off + c] = psl_rows(sample_words(n, seed, first + off, c), n)
    return out


def _sum_range(args):
    k, seed, first, count = args
    return _kernels.rademacher_sums(sample_words(k, seed, first, count), k)


def _split(trials, workers):
    workers = min(workers, trials)
    edges = [trials * i // workers for i in range(workers + 1)]
    return [(edges[i], edges[i + 1] - edges[i]) for i in range(workers)]


def _map_trials(func, head, trials, workers):
    jobs = [head + (first, count) for first, count in _split(trials, workers)]
    if len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(func, jobs))
    else:
        parts = [func(jobs[0])]
    return np.concatenate(parts)


def psl_sample(config: SamplerConfig) -> np.ndarray:
    """PSL of every trial, indexed by trial number."""
    if config.n < 2:
        raise DomainError("PSL needs n >= 2")
    return _map_trials(_psl_range, (config.n, config.seed), config.trials, config.workers)


def wilson_interval(hits: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = hits / trials
    z2n = z * z / trials
    centre = (p + z2n / 2) / (1 + z2n)
    half = z * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials)) / (1 + z2n)
    # at p = 0 or 1 the matching endpoint is exact; don't let rounding move it
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class ExceedanceEstimate:
    config: SamplerConfig
    threshold: float
    hits: int
    proportion: float
    ci99: tuple[float, float]

    def as_dict(self):
        return {
            **self.config.as_dict(),
            "threshold": self.threshold,
            "hits": self.hits,
            "proportion": self.proportion,
            "ci99": list(self.ci99),
        }


def _estimate(config, threshold, sample):
    hits = int(np.count_nonzero(sample > threshold))
    return ExceedanceEstimate(config, float(threshold), hits, hits / config.trials,
                              wilson_interval(hits, config.trials))


def estimate_exceedance(config: SamplerConfig, threshold: float,
                        sample: Optional[np.ndarray] = None) -> ExceedanceEstimate:
    """Fraction of sampled sequences with PSL > threshold, with a 99% Wilson CI.

    ``sample`` reuses a PSL vector from psl_sample for the same config.
    """
    if not threshold > 0:
        raise DomainError("threshold must be positive")
    if sample is None:
        sample = psl_sample(config)
    return _estimate(config, threshold, sample)


@dataclass(frozen=True)
class Prop1Report:
    spec: BoundSpec
    estimate: ExceedanceEstimate
    bound: float

    @property
    def passed(self) -> bool:
        return self.estimate.ci99[0] <= self.bound

    def as_dict(self):
        return {
            "kind": self.spec.kind,
            "epsilon": self.spec.epsilon,
            "psi": self.spec.psi,
            "estimate": self.estimate.as_dict(),
            "bound": self.bound,
            "passed": self.passed,
        }


def verify_proposition1(config: SamplerConfig, spec: BoundSpec,
                        sample: Optional[np.ndarray] = None) -> Prop1Report:
    """One-sided check: PASS iff the lower 99% Wilson limit is <= the bound."""
    if spec.n != config.n:
        raise DomainError("spec.n must equal config.n")
    est = estimate_exceedance(config, bound_threshold(spec), sample)
    return Prop1Report(spec, est, proposition1_bound(spec))


@dataclass(frozen=True)
class PslHistogram:
    n: int
    trials: int
    seed: int
    counts: dict
    in_interval: dict = field(default_factory=dict)

    def rows(self):
        return sorted(self.counts.items())

    def to_csv(self) -> str:
        return "mu,count\n" + "".join(f"{mu},{c}\n" for mu, c in self.rows())


def psl_histogram(config: SamplerConfig, epsilons: Iterable[float] = (),
                  sample: Optional[np.ndarray] = None) -> PslHistogram:
    """Empirical PSL distribution, plus the fraction of the sample inside
    the concentration interval around sqrt(2 n log n) for each epsilon."""
    if sample is None:
        sample = psl_sample(config)
    values, freq = np.unique(sample, return_counts=True)
    counts = {int(v): int(f) for v, f in zip(values, freq)}
    inside = {}
    for eps in epsilons:
        lo, hi = schmidt_interval(config.n, eps)
        inside[float(eps)] = float(np.count_nonzero((sample >= lo) & (sample <= hi)) / config.trials)
    return PslHistogram(config.n, config.trials, config.seed, counts, inside)


@dataclass(frozen=True)
class ChernoffReport:
    k: int
    lam: float
    estimate: ExceedanceEstimate
    bound: float
    exact: Fraction

    @property
    def passed(self) -> bool:
        return self.estimate.ci99[0] <= self.bound

    def as_dict(self):
        return {
            "k": self.k,
            "lambda": self.lam,
            "trials": self.estimate.config.trials,
            "seed": self.estimate.config.seed,
            "hits": self.estimate.hits,
            "proportion": self.estimate.proportion,
            "ci99": list(self.estimate.ci99),
            "bound": self.bound,
            "exact": str(self.exact),
            "passed": self.passed,
        }


def rademacher_sum_sample(k: int, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Sums of k fair signs, one per trial, drawn from the same trial streams."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return _map_trials(_sum_range, (k, seed), trials, workers)


def chernoff_empirical(k: int, lam: float, trials: int, seed: int,
                       workers: int = 1) -> ChernoffReport:
    config = SamplerConfig(k, trials, seed, workers)
    sums = np.abs(rademacher_sum_sample(k, trials, seed, workers))
    est = _estimate(config, lam, sums)
    return ChernoffReport(k, float(lam), est, chernoff_tail(k, lam), rademacher_tail_exact(k, lam))
