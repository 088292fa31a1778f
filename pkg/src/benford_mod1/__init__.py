"""Sums of independent random variables modulo 1 and Benford's law for products."""

__version__ = "0.1.0"

from .benford import (
    DigitDistribution,
    Metric,
    benford_cdf,
    benford_digit_probabilities,
    digit_distribution_from_circle_density,
    distance_to_benford,
    mantissa,
)
from .convolution_engine import (
    ConvergenceVerdict,
    ConvolvedSpectrum,
    VerdictState,
    convergence_verdict,
    convolve_spectra,
    l1_distance_to_uniform,
    sum_mod1_spectrum,
    telescoping_floor_check,
)
from .density_core import (
    CircleDensity,
    DensitySequence,
    Spectrum,
    fejer_mean,
    fourier_coefficient,
    reflect,
    spectrum,
)
