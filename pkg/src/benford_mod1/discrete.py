"""Point-mass laws on the circle: Fejer series of deltas, weak pairings and
the coset obstruction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .convolution_engine import (
    DEFAULT_HORIZON,
    DEFAULT_N,
    DEFAULT_THRESHOLD,
    ConvergenceVerdict,
    VerdictState,
    convergence_verdict,
    sum_mod1_spectrum,
)
from .density_core import DensitySequence, Spectrum, reduce_mod1, validate_atoms_in
from .errors import ConsistencyError, DomainError, HypothesisViolation, ShapeError

COSET_TOL = 1e-9
LATTICE_TOL = 1e-12


def fejer_delta(alpha, N, x):
    """N-th Fejer mean of the unit mass at ``alpha``, evaluated at ``x``.

    Uses the closed form
        exp(-2 pi i (N-1) t) (exp(2 pi i N t) - 1)^2 / ((exp(2 pi i t) - 1)^2 N),
    t = x - alpha, and its real sine-ratio rewrite sin^2(pi N t) / (N sin^2(pi t))
    when exp(2 pi i t) is within 1e-4 of 1, where the complex form cancels
    badly. At t = 0 mod 1 the value is N.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    t = reduce_mod1(np.asarray(x, dtype=float) - alpha)
    t = np.where(t > 0.5, t - 1.0, t)  # nearest representative of t, in (-1/2, 1/2]
    z = np.exp(2j * np.pi * t)
    near = np.abs(z - 1.0) < 1e-4
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (np.exp(-2j * np.pi * (N - 1) * t) * (np.exp(2j * np.pi * N * t) - 1.0) ** 2
                  / ((z - 1.0) ** 2 * N))
        ratio = np.sin(np.pi * N * t) ** 2 / (N * np.sin(np.pi * t) ** 2)
    value = np.where(near, ratio, closed)
    value = np.where(t == 0.0, complex(N), value)
    bad = np.abs(value.imag) > 1e-10 * np.maximum(1.0, np.abs(value.real))
    if np.any(bad):
        raise ConsistencyError("Fejer series of a point mass came out non-real")
    out = value.real
    return float(out) if out.ndim == 0 else out


def weak_pairing(s: Spectrum, test_fn_coefficients) -> complex:
    """Pairing of the law with spectrum ``s`` against a trigonometric polynomial.

    ``test_fn_coefficients`` is either a Spectrum of the same truncation or an
    array indexed n + N. Returns sum_n coef(n) * conj(phi_hat(n)), i.e. the
    integral of h times conj(phi); for real phi this is the integral of h phi.
    """
    if isinstance(test_fn_coefficients, Spectrum):
        if test_fn_coefficients.truncation != s.truncation:
            raise ShapeError("test function and spectrum truncations differ")
        phi = test_fn_coefficients.coefficients
    else:
        phi = np.asarray(test_fn_coefficients, dtype=complex)
        if phi.shape != s.coefficients.shape:
            raise ShapeError(f"expected {s.coefficients.size} test coefficients, got {phi.size}")
    return complex(np.sum(s.coefficients * np.conj(phi)))


def exponential_test_function(n, N):
    """Coefficients of exp(2 pi i n x) on |k| <= N."""
    if abs(n) > N:
        raise ShapeError("frequency exceeds truncation")
    c = np.zeros(2 * N + 1, dtype=complex)
    c[n + N] = 1.0
    return c


@dataclass(frozen=True)
class AtomSupportReport:
    support_set: tuple
    coset: Optional[tuple] = None


def _exact_coset(atoms, q_max):
    alpha = min(atoms)
    q = 1
    for a in atoms:
        q = math.lcm(q, (reduce_mod1(a - alpha)).denominator)
        if q > q_max:
            return None
    return alpha, q


def detect_coset(atoms, q_max=1024, tol=COSET_TOL):
    """Smallest q <= q_max and offset alpha = min atom with every atom on
    {alpha + k/q mod 1}, or None.

    Fractions are handled exactly; floats up to ``tol`` in location.
    """
    if len(atoms) == 0:
        raise DomainError("need at least one atom")
    if all(isinstance(a, Fraction) for a in atoms):
        found = _exact_coset([reduce_mod1(a) for a in atoms], q_max)
        return None if found is None else (found[0], found[1])
    locs = np.asarray([float(a) for a in atoms])
    locs = np.asarray(reduce_mod1(locs)).reshape(-1)
    alpha = float(locs.min())
    diffs = locs - alpha
    for q in range(1, q_max + 1):
        scaled = diffs * q
        gap = np.abs(scaled - np.round(scaled)) / q
        if np.all(gap <= tol):
            return alpha, q
    return None


def atom_support_report(seq: DensitySequence, M: int, q_max=1024) -> AtomSupportReport:
    locs = {}
    for m in range(1, M + 1):
        d = seq[m]
        if not d.is_atomic:
            raise HypothesisViolation(f"factor {m} is not atomic")
        for a, _ in d.atoms:
            locs[float(a)] = a
    support = tuple(sorted(locs.values(), key=float))
    return AtomSupportReport(support, detect_coset(list(support), q_max))


def discrete_convergence_verdict(seq: DensitySequence, allowed, N=DEFAULT_N,
                                 horizon=DEFAULT_HORIZON, threshold=DEFAULT_THRESHOLD) -> ConvergenceVerdict:
    """Coefficient-product verdict for atomic factors with atoms in the finite set ``allowed``.

    Every factor up to ``horizon`` is checked against ``allowed``. A
    'converges' verdict is cross-checked against the pairings with
    exp(2 pi i n x), 1 <= n <= N.
    """
    allowed = tuple(allowed)
    if len(allowed) == 0:
        raise HypothesisViolation("the declared atom set A is empty")
    checked = min(horizon, seq.period) if seq.period is not None else horizon
    for m in range(1, checked + 1):
        d = seq[m]
        if not d.is_atomic:
            raise HypothesisViolation(f"factor {m} is not atomic")
        validate_atoms_in(d, allowed)
    verdict = convergence_verdict(seq, N, horizon, threshold)
    if verdict.state is VerdictState.CONVERGES:
        spec = sum_mod1_spectrum(seq, horizon, N).spectrum
        for n in range(1, N + 1):
            if abs(weak_pairing(spec, exponential_test_function(n, N))) >= threshold:
                raise ConsistencyError(f"pairing at n={n} disagrees with the coefficient verdict")
    return verdict
