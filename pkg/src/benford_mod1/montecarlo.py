"""Seeded sampling experiments for products of independent random variables.

Products are never formed: each trial adds log_B-mantissas of its factors
modulo 1, and the first digit is floor(B**y) of the circle sum y.

Randomness comes from numpy's counter-based Philox4x64 generator. Trials
are grouped into fixed blocks of ``BLOCK_TRIALS``; block b is generated from
key ``seed`` and counter (0, 0, b, 0), and trial t is row t % BLOCK_TRIALS of
its block. The draws of a trial therefore depend only on (seed, t, M), not on
the trial count or on how blocks are scheduled across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import stats

from . import convolution_engine as ce
from .benford import (
    DigitDistribution,
    Metric,
    _digit_edges,
    benford_digit_probabilities,
    digits_from_log_mantissa,
    digits_of,
    distance_to_benford,
)
from .density_core import DensitySequence, reduce_mod1
from .errors import ConfigError
from .families import Family, make_family

BLOCK_TRIALS = 4096
SEED_MASK = (1 << 64) - 1
REPORT_TRUNCATION = 2048


@dataclass(frozen=True)
class ExperimentConfig:
    """One sampling experiment.

    ``family`` is a family name (resolved with ``params`` for ``base``) or a
    ready DensitySequence. ``threads`` = None reads MOD1_THREADS; 0 means
    one worker per CPU.
    """

    base: float = 10
    factors: int = 1
    trials: int = 1000
    seed: int = 0
    family: Union[str, DensitySequence] = "uniform"
    params: str = ""
    truncation: int = ce.DEFAULT_N
    out: Optional[str] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.factors < 1:
            raise ConfigError("factor count must be >= 1")
        if not (self.base == math.e or (float(self.base).is_integer() and self.base >= 2)):
            raise ConfigError("base must be an integer >= 2 or e")
        if not 0 <= self.seed <= SEED_MASK:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def sequence(self) -> DensitySequence:
        if isinstance(self.family, DensitySequence):
            return self.family
        return make_family(self.family, self.params, self.base).sequence

    def resolved(self):
        """JSON-friendly dict of the configuration."""
        fam = self.family if isinstance(self.family, str) else (self.family.label or "<sequence>")
        return {
            "base": "euler" if self.base == math.e else int(self.base),
            "factors": self.factors,
            "trials": self.trials,
            "seed": self.seed,
            "family": fam,
            "params": self.params,
            "truncation": self.truncation,
            "out": self.out,
        }


def block_generator(seed, block):
    """The Philox generator of one trial block."""
    return np.random.Generator(np.random.Philox(key=seed & SEED_MASK, counter=[0, 0, block, 0]))


def _worker_count(threads):
    if threads is None:
        threads = int(os.environ.get("MOD1_THREADS", "0") or 0)
    return threads if threads > 0 else (os.cpu_count() or 1)


def _block_sums(seq, M, seed, block, rows):
    u = block_generator(seed, block).random((rows, M))
    y = np.zeros(rows)
    for m in range(1, M + 1):
        y = reduce_mod1(y + seq[m].sample(u[:, m - 1]))
    return np.atleast_1d(y)


def _map_blocks(cfg: ExperimentConfig, reducer):
    """Run every trial block, apply ``reducer`` to its circle sums, keep block order."""
    seq = cfg.sequence()
    n_blocks = -(-cfg.trials // BLOCK_TRIALS)

    def run(b):
        rows = min(BLOCK_TRIALS, cfg.trials - b * BLOCK_TRIALS)
        return reducer(_block_sums(seq, cfg.factors, cfg.seed, b, rows))

    workers = min(_worker_count(cfg.threads), n_blocks)
    if workers <= 1:
        return [run(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(n_blocks)))


def simulate_log_sums(cfg: ExperimentConfig) -> np.ndarray:
    """Circle values (sum of log_B mantissas mod 1) for every trial."""
    return np.concatenate(_map_blocks(cfg, lambda y: y))


def simulate_product_digits(cfg: ExperimentConfig) -> DigitDistribution:
    """Empirical first-digit distribution of X_1 * ... * X_M over the trials."""
    ndig = len(digits_of(cfg.base))

    def count(y):
        return np.bincount(digits_from_log_mantissa(y, cfg.base) - 1, minlength=ndig)

    counts = np.sum(_map_blocks(cfg, count), axis=0)
    return DigitDistribution.from_counts(cfg.base, counts)


@dataclass(frozen=True)
class SumHistogram:
    edges: np.ndarray
    counts: np.ndarray
    frequencies: np.ndarray
    l1_to_flat: float


def simulate_sum_mod1(cfg: ExperimentConfig, bins: int) -> SumHistogram:
    """Histogram of (Y_1 + ... + Y_M) mod 1 and its L1 distance to the flat density.

    The distance is the integral of |histogram density - 1|, i.e.
    sum_b |f_b - 1/bins|.
    """
    if bins < 2:
        raise ConfigError("bins must be >= 2")

    def count(y):
        idx = np.minimum((y * bins).astype(np.int64), bins - 1)
        return np.bincount(idx, minlength=bins)

    counts = np.sum(_map_blocks(cfg, count), axis=0)
    freqs = counts / cfg.trials
    return SumHistogram(np.linspace(0.0, 1.0, bins + 1), counts, freqs,
                        float(np.abs(freqs - 1.0 / bins).sum()))


def expected_empirical_l1(p_true, p_ref, trials):
    """Mean and standard deviation of sum_b |f_b - p_ref_b| when the f_b are
    frequencies of ``trials`` draws from ``p_true``.

    Each bin is treated as an independent normal with variance
    p(1-p)/trials; E|X| and Var|X| of a normal are used per bin.
    """
    p = np.clip(np.asarray(p_true, dtype=float), 0.0, 1.0)
    mu = p - np.asarray(p_ref, dtype=float)
    sigma = np.sqrt(p * (1.0 - p) / trials)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, mu / sigma, 0.0)
    mean_abs = np.where(sigma > 0,
                        sigma * np.sqrt(2 / np.pi) * np.exp(-0.5 * z ** 2) + mu * (1 - 2 * stats.norm.cdf(-z)),
                        np.abs(mu))
    var_abs = np.maximum(mu ** 2 + sigma ** 2 - mean_abs ** 2, 0.0)
    return float(mean_abs.sum()), float(math.sqrt(var_abs.sum()))


@dataclass(frozen=True)
class CrossCheckReport:
    """Empirical digits next to the spectral description of the same experiment."""

    empirical_l1: float
    predicted_l1: float
    standard_error: float
    spectral_l1: float
    fejer_bound: float
    verdict: ce.ConvergenceVerdict
    noise_floor_l1: float
    disagreement: bool
    spectral_nonconvergence: bool
    empirical_non_benford: bool
    rows: list = field(default_factory=list)

    def as_dict(self):
        out = {k: getattr(self, k) for k in (
            "empirical_l1", "predicted_l1", "standard_error", "spectral_l1", "fejer_bound",
            "noise_floor_l1", "disagreement", "spectral_nonconvergence", "empirical_non_benford")}
        out["verdict"] = self.verdict.as_dict()
        return out


def spectral_vs_empirical_report(cfg: ExperimentConfig, horizon=None) -> CrossCheckReport:
    """Compare simulated digits with what the coefficient products predict.

    The spectral side reconstructs the circle law of the M-fold sum with a
    Fejer mean, integrates it over the digit intervals, and turns that into
    the expected empirical L1 (sampling noise included). Disagreement is
    flagged beyond 3 standard errors. The verdict column runs over
    ``horizon`` factors (default: the experiment's M).
    """
    seq = cfg.sequence()
    N = cfg.truncation
    dd = simulate_product_digits(cfg)
    emp = distance_to_benford(dd, Metric.L1)

    cs = ce.sum_mod1_spectrum(seq, cfg.factors, N)
    spectral_l1, bound = ce.l1_distance_to_uniform(cs)
    # digit masses need a finer reconstruction than the verdict does
    fine = ce.sum_mod1_spectrum(seq, cfg.factors, max(N, REPORT_TRUNCATION)).spectrum
    edges = _digit_edges(cfg.base)
    p_pred = np.clip(ce.interval_masses(fine, edges), 0.0, None)
    p_pred = p_pred / p_pred.sum()
    benf = benford_digit_probabilities(cfg.base).probabilities
    pred_mean, pred_se = expected_empirical_l1(p_pred, benf, cfg.trials)
    noise_mean, noise_se = expected_empirical_l1(benf, benf, cfg.trials)

    verdict = ce.convergence_verdict(seq, N, horizon or cfg.factors)
    se = max(pred_se, 1.0 / cfg.trials)
    rows = [
        {"digit": int(j), "empirical": float(e), "spectral": float(p), "benford": float(b)}
        for j, e, p, b in zip(digits_of(cfg.base), dd.probabilities, p_pred, benf)
    ]
    return CrossCheckReport(
        empirical_l1=emp,
        predicted_l1=pred_mean,
        standard_error=se,
        spectral_l1=spectral_l1,
        fejer_bound=bound,
        verdict=verdict,
        noise_floor_l1=noise_mean,
        disagreement=abs(emp - pred_mean) > 3 * se,
        spectral_nonconvergence=verdict.state is ce.VerdictState.DIVERGES,
        empirical_non_benford=emp > noise_mean + 3 * max(noise_se, 1.0 / cfg.trials),
        rows=rows,
    )
