"""Named density families: boxes around 1/8 and the modified Pareto law.

Box densities ``phi_m`` have height m on the arc |x - 1/8| <= 1/(2m). ``m``
may be a Python int of any size (e.g. ``11**400``); all arithmetic goes
through ``1/m`` computed by exact integer division, so huge m never
overflows.

The modified Pareto density is alpha / (x ln(x)^(alpha+1)) on [e, inf); its
natural log is a standard Pareto variable on [1, inf) with index alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import quadrature
from .density_core import CircleDensity, DensitySequence, reduce_mod1
from .errors import DomainError, RangeError

BOX_CENTER = 0.125


def _inverse(m):
    """1/m without converting a huge int to float first."""
    if isinstance(m, int):
        return 1 / m  # int true division is correctly rounded, underflows to 0.0
    return 1.0 / float(m)


def sinc(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(t == 0.0, 1.0, np.sin(t) / np.where(t == 0.0, 1.0, t))
    return out


def box_spectrum_coefficient(m, n):
    """Closed-form coefficient of phi_m: exp(-2 pi i n / 8) * sinc(pi n / m).

    Valid for any m >= 1 (the arc then has length <= 1). ``n`` may be an
    integer array.
    """
    if m < 1:
        raise DomainError(f"box parameter m must be >= 1, got {m!r}")
    n = np.asarray(n)
    inv = _inverse(m)
    out = np.exp(-2j * np.pi * n * BOX_CENTER) * sinc(np.pi * n * inv)
    return complex(out) if out.ndim == 0 else out


def sample_box_log_mantissa(m, u):
    """Inverse-CDF draw from phi_m: (1/8 + (u - 1/2)/m) mod 1.

    When 1/m is below double resolution around 1/8 the result is exactly
    0.125; the jitter is then smaller than the spacing of doubles there.
    """
    u = np.asarray(u, dtype=float)
    out = reduce_mod1(BOX_CENTER + (u - 0.5) * _inverse(m))
    return out


def box_density(m, check=False) -> CircleDensity:
    """phi_m as a CircleDensity (with closed-form spectrum and sampler)."""
    if m < 1:
        raise DomainError(f"box parameter m must be >= 1, got {m!r}")
    inv = _inverse(m)
    half = 0.5 * inv
    height = float(m) if inv > 0 and m < 1e300 else math.inf

    def evaluate(x):
        d = np.abs(reduce_mod1(np.asarray(x, dtype=float) - BOX_CENTER + 0.5) - 0.5)
        return np.where(d <= half, height, 0.0)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        lo, hi = BOX_CENTER - half, BOX_CENTER + half
        # mass of [0, x] is the arc length of [lo, hi] intersected with [0, x] (mod 1)
        mass = np.zeros_like(x)
        for shift in (-1.0, 0.0, 1.0):
            a, b = lo + shift, hi + shift
            mass = mass + np.clip(np.minimum(x, b) - np.maximum(0.0, a), 0.0, None)
        return mass * height

    return CircleDensity.continuous(
        evaluate,
        analytic_coefficient=lambda ns: box_spectrum_coefficient(m, ns),
        breakpoints=(BOX_CENTER - half, BOX_CENTER + half) if half < 0.5 else (),
        sampler=lambda u: sample_box_log_mantissa(m, u),
        cdf=cdf,
        label=f"box({m})",
        check=check,
    )


def box_power_sequence(base=11) -> DensitySequence:
    """phi_{base^m} for m = 1, 2, ... (the non-identical counterexample)."""

    def table(ms, ns):
        ns = np.asarray(ns)
        out = np.empty((len(ms), len(ns)), dtype=complex)
        for i, m in enumerate(ms):
            out[i] = box_spectrum_coefficient(base ** int(m), ns)
        return out

    return DensitySequence(lambda m: box_density(base ** m), coefficient_table=table,
                           label=f"box({base}^m)")


def box_cycle_sequence(offset=3, modulus=5) -> DensitySequence:
    """phi_{offset + (m mod modulus)}: a mixed family with |coef(1)| bounded below 1."""
    widths = [offset + (m % modulus) for m in range(1, modulus + 1)]
    return DensitySequence.of([box_density(w) for w in widths], label=f"box({offset}+m mod {modulus})")


# --- modified Pareto ---------------------------------------------------------

def _check_alpha(alpha, minimum=0.0):
    if not alpha > minimum:
        raise DomainError(f"alpha must be > {minimum:g}, got {alpha!r}")


def pareto_density(alpha, x):
    """alpha / (x * ln(x)**(alpha + 1)) for x >= e, else 0."""
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = alpha / (x * np.log(x) ** (alpha + 1))
    out = np.where(x >= math.e, val, 0.0)
    return float(out) if out.ndim == 0 else out


def pareto_cdf(alpha, x):
    """1 - ln(x)^(-alpha) for x >= e."""
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 1.0 - np.log(x) ** (-alpha)
    out = np.where(x >= math.e, val, 0.0)
    return float(out) if out.ndim == 0 else out


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise DomainError("uniform input must lie in the open interval (0, 1)")
    return u


def pareto_log_sample(alpha, u):
    """ln X for the inverse-CDF draw X: (1 - u)^(-1/alpha)."""
    _check_alpha(alpha)
    u = _check_u(u)
    out = (-u + 1.0) ** (-1.0 / alpha)
    return float(out) if out.ndim == 0 else out


def sample_pareto(alpha, u):
    """Inverse-CDF draw exp((1 - u)^(-1/alpha)); overflows to inf for u near 1."""
    y = pareto_log_sample(alpha, u)
    with np.errstate(over="ignore"):
        out = np.exp(y)
    return float(out) if np.ndim(out) == 0 else out


def _base_log_factor(base):
    """c = ln(base); log_base(X) = ln(X) / c."""
    if base <= 1:
        raise DomainError("base must exceed 1")
    return 1.0 if base == math.e else math.log(base)


def sample_pareto_log_mantissa(alpha, u, base=math.e):
    """log_base of the mantissa of a modified-Pareto draw, in [0, 1)."""
    y = np.asarray(pareto_log_sample(alpha, u))
    c = _base_log_factor(base)
    return reduce_mod1(y / c if c != 1.0 else y)


def pareto_log_mantissa_density(alpha, base=math.e) -> CircleDensity:
    """Law of log_base(X) mod 1 for the modified Pareto X.

    With W = ln(X)/c (c = ln base), W has density alpha c^-alpha w^-(alpha+1)
    on [1/c, inf). Wrapping onto the circle gives a Hurwitz zeta value.
    """
    _check_alpha(alpha)
    c = _base_log_factor(base)
    start = 1.0 / c
    jump = reduce_mod1(start)
    scale = alpha * c ** (-alpha)

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        k0 = np.ceil(start - t)
        return scale * special.zeta(alpha + 1.0, t + k0)

    K = math.ceil(start)

    def cdf(t):
        # P(frac W <= t) = sum_k P(k <= W <= k + t); the k >= K terms telescope
        # into Hurwitz zeta values, k = K - 1 straddles the support edge.
        t = np.asarray(t, dtype=float)
        full = c ** (-alpha) * (special.zeta(alpha, K) - special.zeta(alpha, K + t))
        straddle = np.where(K - 1 + t >= start,
                            1.0 - (c * np.maximum(K - 1 + t, start)) ** (-alpha), 0.0)
        return full + straddle

    def sampler(u):
        u = np.asarray(u, dtype=float)
        u = np.where(u <= 0.0, np.nextafter(0.0, 1.0), u)
        return sample_pareto_log_mantissa(alpha, u, base)

    return CircleDensity.continuous(evaluate, breakpoints=(jump,), sampler=sampler,
                                    cdf=cdf if alpha > 1 else None,
                                    label=f"pareto_logmantissa(alpha={alpha:g},base={base:g})",
                                    check=False)


def pareto_mantissa_density(alpha, s, terms):
    """Density of the base-e mantissa at s in [1, e): partial sum and tail bound.

    value = alpha * sum_{m=1}^{terms} 1 / (s * (ln s + m)^(alpha+1)); the
    omitted tail is at most (ln s + terms)^(-alpha) / s by the integral test.
    """
    _check_alpha(alpha, 1.0)
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if not 1.0 <= s < math.e:
        raise DomainError("s must lie in [1, e)")
    L = math.log(s)
    m = np.arange(1, terms + 1, dtype=float)
    value = alpha * math.fsum(1.0 / (s * (L + m) ** (alpha + 1)))
    tail = (L + terms) ** (-alpha) / s
    return value, tail


def pareto_mantissa_cdf(alpha, s, terms):
    """Base-e mantissa CDF at s in [1, e]: partial sum and tail bound.

    value = sum_{m=1}^{terms} [m^-alpha - (m + ln s)^-alpha]; the omitted
    tail is at most ln(s) * terms^(-alpha).
    """
    _check_alpha(alpha, 1.0)
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if not 1.0 <= s <= math.e:
        raise DomainError("s must lie in [1, e]")
    L = 1.0 if s == math.e else math.log(s)
    m = np.arange(1, terms + 1, dtype=float)
    value = math.fsum(m ** (-alpha) - (m + L) ** (-alpha))
    tail = L * terms ** (-alpha)
    return value, tail


@dataclass(frozen=True)
class PositiveDensity:
    """A density on (0, inf) for the mantissa wraparound.

    ``support`` bounds where the density may be nonzero. ``log_density``,
    if given, is the density of log_base(X) as a function of (u, base); it
    avoids evaluating the density at astronomically large x.
    """

    pdf: Callable
    support: tuple = (0.0, math.inf)
    log_density: Optional[Callable] = None
    breakpoints: tuple = ()

    def density_of_log(self, u, base):
        u = np.asarray(u, dtype=float)
        if self.log_density is not None:
            return self.log_density(u, base)
        x = np.power(float(base), u)
        return self.pdf(x) * x * math.log(base)


def modified_pareto(alpha) -> PositiveDensity:
    _check_alpha(alpha)

    def log_density(u, base):
        c = _base_log_factor(base)
        y = c * np.asarray(u, dtype=float)  # ln x
        with np.errstate(divide="ignore", invalid="ignore"):
            val = c * alpha * y ** (-(alpha + 1))
        return np.where(y >= 1.0, val, 0.0)

    return PositiveDensity(lambda x: pareto_density(alpha, x), support=(math.e, math.inf),
                           log_density=log_density, breakpoints=(math.e,))


def mantissa_pushforward_cdf(f: PositiveDensity, s, B, m_range, mass_tol=1e-10):
    """P(mantissa in [1, s]) by summing per-decade integrals for m in [-R, R].

    Integration runs in the log coordinate u = log_B x, one panel set per
    decade [m, m + log_B s]. Returns ``(value, truncation_bound)``; the bound
    is the mass of the (normalised) ``f`` outside [B^-R, B^(R+1)] plus the
    quadrature error estimates. Raises RangeError if that outside mass
    exceeds ``mass_tol``.
    """
    if not 1.0 <= s <= B:
        raise DomainError(f"s must lie in [1, {B}]")
    if m_range < 0:
        raise DomainError("m_range must be >= 0")
    lnB = math.log(B)
    ls = math.log(s) / lnB
    m_lo, m_hi = -m_range, m_range
    if f.support[0] > 0:
        m_lo = max(m_lo, math.floor(math.log(f.support[0]) / lnB))
    if math.isfinite(f.support[1]):
        m_hi = min(m_hi, math.ceil(math.log(f.support[1]) / lnB))
    if m_hi < m_lo:
        return 0.0, 1.0
    decades = np.arange(m_lo, m_hi + 1, dtype=float)
    cuts = np.array(sorted(math.log(x) / lnB for x in f.breakpoints if x > 0))
    g = lambda u: f.density_of_log(u, B)
    budget = 40 * decades.size + 200_000

    a, b = _split(decades, decades + 1.0, cuts)
    inside, err_in = quadrature.integrate_intervals(g, a, b, tol=mass_tol / 10, max_panels=budget)
    outside = max(0.0, 1.0 - float(inside))
    if outside > mass_tol:
        raise RangeError(f"mass {outside:.3g} lies outside B^[{m_lo}, {m_hi + 1}]; increase m_range")

    a, b = _split(decades, decades + ls, cuts)
    value, err = quadrature.integrate_intervals(g, a, b, tol=mass_tol / 10, max_panels=budget)
    return float(value), outside + float(err) + float(err_in)


def _split(a, b, cuts):
    """Split each interval [a_i, b_i] at the cut points falling inside it."""
    if cuts.size == 0:
        return a, b
    pts = np.concatenate([a, b, cuts])
    pts = np.unique(pts)
    lo, hi = pts[:-1], pts[1:]
    mid = 0.5 * (lo + hi)
    # keep sub-intervals whose midpoint lies in one of the original intervals
    idx = np.searchsorted(a, mid, side="right") - 1
    ok = (idx >= 0) & (mid < b[np.clip(idx, 0, None)])
    return lo[ok], hi[ok]
