"""Spectra of sums modulo 1 and the finite-horizon convergence verdict.

The coefficient of a convolution is the product of coefficients, so the law
of Y_1 + ... + Y_M mod 1 is tracked through running products. Products are
accumulated as log-modulus plus phase: |coef|^10000 underflows long before
the questions asked here are settled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .density_core import DensitySequence, Spectrum, fejer_weights
from .errors import DomainError, ShapeError

DEFAULT_N = 64
DEFAULT_HORIZON = 10_000
DEFAULT_THRESHOLD = 1e-6
STABILITY_TOL = 1e-12


class VerdictState(Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ConvolvedSpectrum:
    factor_count: int
    spectrum: Spectrum
    # modulus_history[m - 1, n] = |partial product over factors 1..m| at frequency n >= 0
    modulus_history: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ConvergenceVerdict:
    state: VerdictState
    worst_n: int
    limiting_modulus_estimate: float
    l1_bound: float
    horizon: int = 0
    threshold: float = DEFAULT_THRESHOLD

    @property
    def converges(self):
        return self.state is VerdictState.CONVERGES

    def as_dict(self):
        return {
            "verdict": self.state.value,
            "worst_n": self.worst_n,
            "limiting_modulus_estimate": self.limiting_modulus_estimate,
            "l1_bound": self.l1_bound,
        }


def convolve_spectra(a: Spectrum, b: Spectrum) -> Spectrum:
    """Spectrum of the convolution: coefficientwise product."""
    if a.truncation != b.truncation:
        raise ShapeError(f"truncations differ: {a.truncation} vs {b.truncation}")
    return Spectrum(a.truncation, a.coefficients * b.coefficients)


def _log_products(table):
    """Running products of the rows of ``table`` as (log modulus, phase).

    Rows are factors, columns frequencies; the fold is left to right per
    column. Moduli are clipped to <= 1, which holds for every probability law
    and keeps the running modulus monotone under rounding.
    """
    mod = np.minimum(np.abs(table), 1.0)
    with np.errstate(divide="ignore"):
        logmod = np.cumsum(np.log(mod), axis=0)
    phase = np.cumsum(np.angle(table), axis=0)
    return logmod, np.mod(phase, 2 * np.pi)


def sum_mod1_spectrum(seq: DensitySequence, M: int, N: int, history=False) -> ConvolvedSpectrum:
    """Spectrum of the law of Y_1 + ... + Y_M mod 1, frequencies |n| <= N."""
    if M < 1:
        raise DomainError("factor count M must be >= 1")
    if N < 1:
        raise DomainError("truncation N must be >= 1")
    table = seq.table(M, np.arange(N + 1))
    logmod, phase = _log_products(table)
    last = np.exp(logmod[-1]) * np.exp(1j * phase[-1])
    last[0] = 1.0
    spec = Spectrum.from_nonnegative(last)
    hist = np.exp(logmod) if history else None
    return ConvolvedSpectrum(M, spec, hist)


def fejer_bound(s: Spectrum) -> float:
    """sum over 0 < |n| <= N of (1 - |n|/N) |coef(n)|."""
    w = fejer_weights(s.truncation) * np.abs(s.coefficients)
    w[s.truncation] = 0.0
    return float(w.sum())


def l1_distance_to_uniform(cs, grid_size=None):
    """Grid L1 distance between the Fejer reconstruction and 1, plus the bound.

    Accepts a ConvolvedSpectrum or a plain Spectrum. The periodic trapezoid
    rule on ``grid_size`` points (>= 2N + 1) is exact for the squared
    polynomial and accurate for its absolute value. Returns
    ``(distance, fejer_bound)``.
    """
    s = cs.spectrum if isinstance(cs, ConvolvedSpectrum) else cs
    N = s.truncation
    if grid_size is None:
        grid_size = max(4096, 16 * N)
    if grid_size < 2 * N + 1:
        raise DomainError(f"grid_size must be >= 2N+1 = {2 * N + 1}")
    values = fejer_grid(s, grid_size)
    return float(np.mean(np.abs(values - 1.0))), fejer_bound(s)


def fejer_grid(s: Spectrum, grid_size):
    """Fejer mean at x_k = k / grid_size via one inverse FFT."""
    N = s.truncation
    c = fejer_weights(N) * s.coefficients
    buf = np.zeros(grid_size, dtype=complex)
    idx = np.mod(s.ns, grid_size)
    np.add.at(buf, idx, c)
    values = np.fft.ifft(buf) * grid_size
    return values.real


def convergence_verdict(seq: DensitySequence, N=DEFAULT_N, horizon=DEFAULT_HORIZON,
                        threshold=DEFAULT_THRESHOLD) -> ConvergenceVerdict:
    """Finite-horizon test of whether every running coefficient product tends to 0.

    For each 1 <= n <= N the modulus of the product over factors 1..horizon
    is examined. Below ``threshold``: that frequency converged. Above it and
    unchanged (relative change < 1e-12) over the last horizon/10 factors:
    that frequency has a nonzero limit, and the sum cannot equidistribute.
    Anything else leaves the verdict indeterminate.
    """
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if not 0 < threshold < 1:
        raise DomainError("threshold must lie in (0, 1)")
    ns = np.arange(1, N + 1)
    table = seq.table(horizon, ns)
    logmod, phase = _log_products(table)
    final = np.exp(logmod[-1])
    window = max(1, horizon // 10)
    earlier = np.exp(logmod[-1 - window]) if horizon > window else np.ones_like(final)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel_change = np.where(final > 0, np.abs(earlier - final) / final, np.inf)

    below = final < threshold
    stable = (~below) & (rel_change < STABILITY_TOL)

    spec = Spectrum.from_nonnegative(np.concatenate([[1.0], final * np.exp(1j * phase[-1])]))
    bound = fejer_bound(spec)

    if stable.any():
        i = int(np.argmax(np.where(stable, final, -1.0)))
        state, worst = VerdictState.DIVERGES, int(ns[i])
    elif below.all():
        state, worst = VerdictState.CONVERGES, 0
    else:
        i = int(np.argmax(final))
        state, worst = VerdictState.INDETERMINATE, int(ns[i])
    return ConvergenceVerdict(state, worst, float(final.max()), bound, horizon, threshold)


def telescoping_floor_check(M: int) -> float:
    """Product over m = 1..M of (m^2 + 2m) / (m + 1)^2.

    Each factor is 1 - 1/(m+1)^2; the product is summed in log space.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    m = np.arange(1, M + 1, dtype=float)
    return math.exp(math.fsum(np.log1p(-1.0 / (m + 1.0) ** 2)))


def interval_masses(s: Spectrum, edges, fejer=True):
    """Mass of each interval [edges[k], edges[k+1]] under the Fejer mean of ``s``.

    Integrates term by term: the n-th term contributes
    coef(n) (e^{2 pi i n b} - e^{2 pi i n a}) / (2 pi i n). With
    ``fejer=False`` the plain partial Fourier sum is used instead.
    """
    edges = np.asarray(edges, dtype=float)
    ns = s.ns
    c = s.coefficients * (fejer_weights(s.truncation) if fejer else 1.0)
    safe = np.where(ns == 0, 1, ns)
    prim = np.exp(2j * np.pi * np.outer(edges, ns)) / (2j * np.pi * safe)
    prim[:, ns == 0] = edges[:, None]
    masses = np.diff(prim, axis=0) @ c
    return masses.real
