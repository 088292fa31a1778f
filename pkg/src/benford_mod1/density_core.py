"""Probability densities on the circle [0, 1) and their Fourier data.

Conventions: the n-th coefficient is the integral of g(x) exp(-2 pi i n x)
over [0, 1); every location is reduced to [0, 1) by ``x - floor(x)`` so the
representative of 1.0 is 0.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import quadrature
from .errors import ConsistencyError, DomainError, HypothesisViolation, QuadratureError

COEFFICIENT_TOL = 1e-10
SYMMETRY_TOL = 1e-8
ATOM_WEIGHT_TOL = 1e-12


def reduce_mod1(x):
    """Reduce real locations to [0, 1)."""
    if isinstance(x, Fraction):
        return x - math.floor(x)
    y = np.asarray(x, dtype=float)
    r = y - np.floor(y)
    # x - floor(x) can round up to exactly 1.0 for tiny negative x
    r = np.where(r >= 1.0, 0.0, r)
    return float(r) if r.ndim == 0 else r


class Kind(Enum):
    CONTINUOUS = "continuous"
    ATOMIC = "atomic"


@dataclass(frozen=True, eq=False)
class CircleDensity:
    """A probability law on [0, 1): either a density or finitely many atoms.

    Use the ``continuous`` / ``atomic`` constructors rather than the raw
    initializer; they validate the invariants.

    ``breakpoints`` lists the discontinuities of a piecewise density in
    [0, 1); quadrature splits there. ``sampler`` maps uniforms in [0, 1) to
    draws from the law (inverse CDF), ``cdf`` is the distribution function on
    [0, 1].
    """

    kind: Kind
    evaluate: Optional[Callable] = None
    analytic_coefficient: Optional[Callable] = None
    atoms: tuple = ()
    breakpoints: tuple = ()
    sampler: Optional[Callable] = None
    cdf: Optional[Callable] = None
    label: str = ""

    @classmethod
    def continuous(cls, evaluate, *, analytic_coefficient=None, breakpoints=(),
                   sampler=None, cdf=None, label="", check=True):
        bps = tuple(sorted({reduce_mod1(b) for b in breakpoints}))
        d = cls(Kind.CONTINUOUS, evaluate=evaluate, analytic_coefficient=analytic_coefficient,
                breakpoints=bps, sampler=sampler, cdf=cdf, label=label)
        if check:
            mass = d.total_mass()
            if abs(mass - 1.0) > 1e-8:
                raise DomainError(f"density integrates to {mass!r}, not 1")
        return d

    @classmethod
    def atomic(cls, atoms, *, label=""):
        """Build a point-mass law from ``(location, weight)`` pairs.

        Locations may be floats or Fractions; weights must be strictly
        positive and sum to 1. Coincident locations are merged.
        """
        merged = {}
        for loc, w in atoms:
            if not w > 0:
                raise DomainError(f"atom weight must be strictly positive, got {w!r}")
            key = reduce_mod1(loc if isinstance(loc, Fraction) else float(loc))
            merged[key] = merged.get(key, 0) + w
        if not merged:
            raise DomainError("an atomic law needs at least one atom")
        total = math.fsum(float(w) for w in merged.values())
        if abs(total - 1.0) > ATOM_WEIGHT_TOL:
            raise DomainError(f"atom weights sum to {total!r}, not 1")
        items = tuple(sorted(merged.items(), key=lambda kv: float(kv[0])))
        return cls(Kind.ATOMIC, atoms=items, label=label)

    @classmethod
    def from_rationals(cls, atoms, *, label=""):
        """Atomic law with exact rational locations, ``(p, q, weight)`` triples."""
        return cls.atomic([(Fraction(p, q), w) for p, q, w in atoms], label=label)

    @property
    def is_atomic(self):
        return self.kind is Kind.ATOMIC

    @property
    def locations(self):
        return np.array([float(a) for a, _ in self.atoms])

    @property
    def weights(self):
        return np.array([float(w) for _, w in self.atoms])

    def panel_edges(self, extra=0):
        """Quadrature breakpoints on [0, 1], at least ``extra`` panels."""
        edges = np.union1d([0.0, 1.0], np.asarray(self.breakpoints, dtype=float))
        if extra > 1:
            edges = np.union1d(edges, np.linspace(0.0, 1.0, extra + 1))
        return edges

    def total_mass(self):
        if self.is_atomic:
            return math.fsum(self.weights)
        value, _ = quadrature.integrate(self.evaluate, self.panel_edges(), tol=COEFFICIENT_TOL)
        return float(value)

    def sample(self, u):
        """Map uniforms ``u`` in [0, 1) to draws from this law."""
        u = np.asarray(u, dtype=float)
        if self.is_atomic:
            cum = np.cumsum(self.weights)
            cum[-1] = 1.0
            idx = np.searchsorted(cum, u, side="right")
            return self.locations[np.minimum(idx, len(cum) - 1)]
        if self.sampler is None:
            raise DomainError(f"density {self.label or '<anonymous>'} has no sampler")
        return self.sampler(u)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients for n = -N..N, stored at index n + N."""

    truncation: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if self.truncation < 1:
            raise DomainError("truncation must be >= 1")
        if c.shape != (2 * self.truncation + 1,):
            raise ValueError(f"expected {2 * self.truncation + 1} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_nonnegative(cls, values):
        """Build from n = 0..N, filling negative n by conjugate symmetry."""
        v = np.asarray(values, dtype=complex)
        full = np.concatenate([np.conj(v[:0:-1]), v])
        return cls(len(v) - 1, full)

    @property
    def ns(self):
        return np.arange(-self.truncation, self.truncation + 1)

    def __getitem__(self, n):
        if abs(n) > self.truncation:
            raise IndexError(f"|n|={abs(n)} exceeds truncation {self.truncation}")
        return complex(self.coefficients[n + self.truncation])

    def nonnegative(self):
        return self.coefficients[self.truncation:]

    def moduli(self):
        return np.abs(self.coefficients)


@dataclass(frozen=True)
class DensitySequence:
    """Factor list g_1, g_2, ... for a sum (or product) experiment.

    ``factor(m)`` returns the m-th law (1-based). When ``period`` is set the
    factor depends only on ``(m - 1) % period``, which lets spectra be
    cached. ``coefficient_table(ms, ns)`` is an optional vectorised fast path
    returning an array of shape (len(ms), len(ns)).
    """

    factor: Callable[[int], CircleDensity]
    period: Optional[int] = None
    coefficient_table: Optional[Callable] = None
    label: str = ""

    @classmethod
    def repeated(cls, density, label=""):
        return cls(lambda m: density, period=1, label=label or f"{density.label} repeated")

    @classmethod
    def of(cls, densities: Sequence[CircleDensity], label=""):
        """A finite list, cycled if more factors are requested."""
        ds = tuple(densities)
        return cls(lambda m: ds[(m - 1) % len(ds)], period=len(ds), label=label)

    def __getitem__(self, m):
        if m < 1:
            raise IndexError("factors are numbered from 1")
        return self.factor(m)

    def table(self, M, ns):
        """Coefficients of factors 1..M at frequencies ``ns`` (shape (M, len(ns)))."""
        ns = np.asarray(ns, dtype=int)
        ms = np.arange(1, M + 1)
        if self.coefficient_table is not None:
            return np.asarray(self.coefficient_table(ms, ns), dtype=complex)
        if self.period is not None:
            base = np.empty((min(self.period, M), len(ns)), dtype=complex)
            for i in range(base.shape[0]):
                base[i] = _coefficients_at(self.factor(i + 1), ns, m_index=i + 1)
            return base[(ms - 1) % self.period]
        out = np.empty((M, len(ns)), dtype=complex)
        for m in ms:
            out[m - 1] = _coefficients_at(self.factor(int(m)), ns, m_index=int(m))
        return out


def _coefficients_at(d, ns, m_index=None):
    try:
        return fourier_coefficients(d, ns)
    except QuadratureError as exc:
        if m_index is not None:
            exc.args = (f"factor m={m_index}: {exc.args[0]}",)
            exc.m = m_index
        raise


def fourier_coefficients(d: CircleDensity, ns) -> np.ndarray:
    """Vectorised ``fourier_coefficient`` over an integer array ``ns``."""
    ns = np.asarray(ns, dtype=int)
    if d.is_atomic:
        phase = np.exp(-2j * np.pi * np.outer(ns, d.locations))
        return phase @ d.weights
    if d.analytic_coefficient is not None:
        return np.asarray(d.analytic_coefficient(ns), dtype=complex)
    if ns.size == 0:
        return np.zeros(0, dtype=complex)
    nmax = int(np.max(np.abs(ns)))

    def integrand(x):
        return d.evaluate(x)[:, None] * np.exp(-2j * np.pi * np.outer(x, ns))

    try:
        value, _ = quadrature.integrate(integrand, d.panel_edges(extra=max(1, nmax // 2)),
                                        tol=COEFFICIENT_TOL)
    except QuadratureError as exc:
        if ns.size == 1:
            exc.n = int(ns[0])
        raise
    return np.asarray(value, dtype=complex).reshape(ns.shape)


def fourier_coefficient(d: CircleDensity, n: int) -> complex:
    """n-th Fourier coefficient of ``d``.

    Closed form when the density carries one, the atom sum for point
    masses, adaptive quadrature (absolute tolerance 1e-10) otherwise.
    """
    return complex(fourier_coefficients(d, np.array([int(n)]))[0])


def spectrum(d: CircleDensity, N: int) -> Spectrum:
    """Coefficients for |n| <= N; only n >= 0 are computed."""
    if N < 1:
        raise DomainError("truncation N must be >= 1")
    ns = np.arange(N + 1)
    if d.is_atomic or d.analytic_coefficient is not None:
        return Spectrum.from_nonnegative(fourier_coefficients(d, ns))
    try:
        values = fourier_coefficients(d, ns)
    except QuadratureError:
        # retry frequency by frequency so the failing n is reported
        values = np.empty(N + 1, dtype=complex)
        for n in ns:
            values[n] = fourier_coefficient(d, int(n))
    return Spectrum.from_nonnegative(values)


def fejer_weights(N):
    ns = np.arange(-N, N + 1)
    return 1.0 - np.abs(ns) / N


def fejer_mean(s: Spectrum, x):
    """Fejer mean T_N g at ``x`` (scalar or array) from a spectrum."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    c = fejer_weights(s.truncation) * s.coefficients
    values = np.exp(2j * np.pi * np.outer(xs, s.ns)) @ c
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst >= SYMMETRY_TOL:
        raise ConsistencyError(f"Fejer mean has imaginary part {worst:.3g}; spectrum is not conjugate-symmetric")
    out = values.real
    return float(out[0]) if np.ndim(x) == 0 else out


def reflect(d: CircleDensity) -> CircleDensity:
    """Law of -Y mod 1 when Y has law ``d``."""
    if d.is_atomic:
        return CircleDensity.atomic([(-a, w) for a, w in d.atoms], label=f"reflect({d.label})")
    ev = d.evaluate
    coef = d.analytic_coefficient
    return CircleDensity.continuous(
        lambda x: ev(reduce_mod1(1.0 - np.asarray(x, dtype=float))),
        analytic_coefficient=None if coef is None else (lambda ns: np.conj(coef(ns))),
        breakpoints=tuple(reduce_mod1(1.0 - b) for b in d.breakpoints),
        sampler=None if d.sampler is None else (lambda u: reduce_mod1(-d.sampler(u))),
        cdf=None if d.cdf is None else (lambda x: 1.0 - d.cdf(reduce_mod1(1.0 - np.asarray(x, dtype=float)))),
        label=f"reflect({d.label})",
        check=False,
    )


def uniform() -> CircleDensity:
    return CircleDensity.continuous(
        lambda x: np.ones_like(np.asarray(x, dtype=float)),
        analytic_coefficient=lambda ns: (np.asarray(ns) == 0).astype(complex),
        sampler=lambda u: np.asarray(u, dtype=float),
        cdf=lambda x: np.asarray(x, dtype=float),
        label="uniform",
        check=False,
    )


def point_mass(alpha) -> CircleDensity:
    return CircleDensity.atomic([(alpha, 1)], label=f"delta({alpha})")


def raised_cosine(center=0.0, depth=1.0) -> CircleDensity:
    """Density 1 + depth*cos(2 pi (x - center)), 0 <= depth <= 1."""
    if not 0.0 <= depth <= 1.0:
        raise DomainError("depth must lie in [0, 1]")
    center = reduce_mod1(center)

    def evaluate(x):
        return 1.0 + depth * np.cos(2 * np.pi * (np.asarray(x, dtype=float) - center))

    def coef(ns):
        ns = np.asarray(ns)
        out = (ns == 0).astype(complex)
        out = out + np.where(np.abs(ns) == 1, 0.5 * depth * np.exp(-2j * np.pi * ns * center), 0)
        return out

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return x + depth * (np.sin(2 * np.pi * (x - center)) + np.sin(2 * np.pi * center)) / (2 * np.pi)

    return CircleDensity.continuous(evaluate, analytic_coefficient=coef,
                                    sampler=lambda u: invert_cdf(cdf, evaluate, u),
                                    cdf=cdf, label=f"raised_cosine({center:g},{depth:g})", check=False)


def invert_cdf(cdf, pdf, u, iterations=60):
    """Solve cdf(x) = u on [0, 1] by safeguarded Newton (vectorised)."""
    u = np.asarray(u, dtype=float)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    x = u.copy()
    for _ in range(iterations):
        f = cdf(x) - u
        lo = np.where(f < 0, x, lo)
        hi = np.where(f >= 0, x, hi)
        dens = pdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - f / dens
        bisect = 0.5 * (lo + hi)
        x = np.where((dens > 0) & (step > lo) & (step < hi), step, bisect)
        if np.all(hi - lo < 1e-15) or np.all(np.abs(f) < 1e-15):
            break
    return reduce_mod1(x)


def validate_atoms_in(d: CircleDensity, allowed, tol=1e-12):
    """Raise HypothesisViolation if an atom of ``d`` lies outside ``allowed``."""
    allowed = np.asarray([float(a) for a in allowed])
    for loc in d.locations:
        gap = np.abs(loc - allowed)
        gap = np.minimum(gap, 1.0 - gap)
        if gap.size == 0 or gap.min() > tol:
            raise HypothesisViolation(f"atom at {loc!r} is outside the declared finite set A")
