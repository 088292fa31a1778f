"""Mantissas, first-digit laws and distances to Benford's law in base B.

Bases are integers >= 2 or the real number e (``math.e``). For a real base
the first digits are 1..ceil(B)-1 and the last digit's interval is cut at B.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import quadrature
from .density_core import COEFFICIENT_TOL, CircleDensity
from .errors import DomainError, UsageError


class Metric(Enum):
    L1 = "l1"
    SUP = "sup"
    CHI_SQUARE = "chi_square"


def _check_base(B):
    if isinstance(B, (int, np.integer)):
        if B < 2:
            raise DomainError(f"base must be >= 2, got {B}")
    elif not (isinstance(B, float) and B > 1):
        raise DomainError(f"base must be an integer >= 2 or a real > 1, got {B!r}")


def digits_of(B):
    """First digits available in base B."""
    _check_base(B)
    return np.arange(1, math.ceil(B))


def log_base(x, B):
    """log_B x, using ln directly for base e."""
    x = np.asarray(x, dtype=float)
    return np.log(x) if B == math.e else np.log(x) / math.log(B)


@dataclass(frozen=True)
class DigitDistribution:
    """First-digit probabilities (or empirical frequencies) in base B.

    ``probabilities[j - 1]`` belongs to digit j. ``sample_count`` is set for
    empirical distributions and None for exact ones.
    """

    base: float
    probabilities: np.ndarray
    sample_count: Optional[int] = None
    counts: Optional[np.ndarray] = None

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        if p.shape != (len(digits_of(self.base)),):
            raise DomainError("one probability per first digit is required")

    @property
    def is_empirical(self):
        return self.sample_count is not None

    @classmethod
    def from_counts(cls, base, counts):
        counts = np.asarray(counts, dtype=np.int64)
        total = int(counts.sum())
        return cls(base, counts / total, sample_count=total, counts=counts)

    def __getitem__(self, digit):
        return float(self.probabilities[digit - 1])

    def as_dict(self):
        return {int(j): float(p) for j, p in zip(digits_of(self.base), self.probabilities)}


def mantissa(x, B):
    """M_B(x) in [1, B) with x = M_B(x) * B^k."""
    _check_base(B)
    if not x > 0:
        raise DomainError(f"mantissa needs x > 0, got {x!r}")
    k = math.floor(float(log_base(x, B)))
    m = _scale(float(x), B, -k)
    # one corrective step each way for floating-point misclassification near powers of B
    if m >= B:
        m /= B
    elif m < 1:
        m *= B
    return float(min(max(m, 1.0), np.nextafter(float(B), 0.0)))


def _scale(x, B, k):
    """x * B**k, correctly rounded for integer bases."""
    if isinstance(B, (int, np.integer)):
        return float(Fraction(x) * Fraction(int(B)) ** k)
    return x * math.exp(k * math.log(B))


def first_digit(x, B):
    return int(math.floor(mantissa(x, B)))


def benford_cdf(s, B):
    """P(mantissa <= s) = log_B s for s in [1, B]."""
    _check_base(B)
    if not 1 <= s <= B:
        raise DomainError(f"s must lie in [1, {B}], got {s!r}")
    if s == B:
        return 1.0
    return float(log_base(s, B))


def _digit_edges(B):
    """Circle coordinates log_B j for j = 1..ceil(B)-1, then 1."""
    js = digits_of(B).astype(float)
    return np.append(log_base(js, B), 1.0)


def benford_digit_probabilities(B) -> DigitDistribution:
    """Exact law: P(first digit j) = log_B(j + 1) - log_B(j)."""
    return DigitDistribution(B, np.diff(_digit_edges(B)))


def digit_distribution_from_circle_density(d: CircleDensity, B) -> DigitDistribution:
    """First-digit law when ``d`` is the density of log_B(mantissa) on [0, 1)."""
    edges = _digit_edges(B)
    if d.is_atomic:
        idx = np.searchsorted(edges, d.locations, side="right") - 1
        probs = np.bincount(idx, weights=d.weights, minlength=len(edges) - 1)
        return DigitDistribution(B, probs)
    pieces = np.union1d(edges, d.panel_edges())
    probs = np.empty(len(edges) - 1)
    for j in range(len(edges) - 1):
        inner = pieces[(pieces >= edges[j]) & (pieces <= edges[j + 1])]
        probs[j], _ = quadrature.integrate(d.evaluate, inner, tol=COEFFICIENT_TOL)
    return DigitDistribution(B, probs)


def distance_to_benford(dd: DigitDistribution, metric=Metric.L1) -> float:
    """L1, sup, or chi-square distance from ``dd`` to the Benford law.

    The chi-square statistic needs a sample count and is refused for exact
    distributions.
    """
    metric = Metric(metric)
    b = benford_digit_probabilities(dd.base).probabilities
    diff = dd.probabilities - b
    if metric is Metric.L1:
        return float(np.abs(diff).sum())
    if metric is Metric.SUP:
        return float(np.abs(diff).max())
    if not dd.is_empirical:
        raise UsageError("chi-square distance is only defined for empirical distributions")
    return float(dd.sample_count * np.sum(diff ** 2 / b))


def digits_from_log_mantissa(y, B):
    """Vectorised first digit floor(B**y) for circle values y in [0, 1)."""
    y = np.asarray(y, dtype=float)
    m = np.exp(y) if B == math.e else np.power(float(B), y)
    d = np.floor(m).astype(np.int64)
    return np.clip(d, 1, math.ceil(B) - 1)
