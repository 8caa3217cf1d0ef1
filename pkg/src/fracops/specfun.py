"""Gamma and one-parameter Mittag-Leffler functions.

Both accept only real arguments. ``mittag_leffler`` is vectorized over ``z``
because the Atangana-Baleanu kernel evaluates it on every quadrature node.

Supported window for ``mittag_leffler``:

* ``0 <= z <= 50``: direct Taylor series. The value overflows a double
  once ``z**(1/alpha)`` exceeds roughly 700 (``OverflowError``).
* ``z < 0``: any magnitude. Mild arguments use the Taylor series; once the
  alternating series would cancel badly (``|z|**(1/alpha) > 6``) the value is
  obtained from the completely monotone integral representation

  .. math::

      E_\\alpha(-x) = \\frac{\\sin \\alpha\\pi}{\\alpha\\pi}
          \\int_0^\\infty \\frac{x\\, e^{-v^{1/\\alpha}}}
          {v^2 + 2 v x \\cos\\alpha\\pi + x^2}\\, dv ,

  which has no cancellation. For ``alpha == 1`` that branch is ``exp(z)``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError

__all__ = ["gamma", "mittag_leffler", "MAX_TERMS", "SERIES_TOL", "Z_MAX"]

MAX_TERMS = 10_000
SERIES_TOL = 1e-15
Z_MAX = 50.0

# |z|**(1/alpha) above which the alternating series loses more than ~3 digits
_CANCEL_LIMIT = 6.0
# e**-45 is negligible next to the integrand's O(1/x) scale
_TAIL_EXPONENT = 45.0


def gamma(x: float) -> float:
    """Gamma function for positive real ``x``.

    Raises
    ------
    DomainError
        If ``x`` is not a positive finite number.
    OverflowError
        If ``Gamma(x)`` exceeds the double range (``x > 171.62...``).
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma is only defined here for finite x > 0, got {x!r}")
    return math.gamma(x)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
    return alpha


def _series(alpha: float, z: np.ndarray) -> np.ndarray:
    """Neumaier-compensated partial sums of z**k / Gamma(1 + alpha*k)."""
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    nonzero = z != 0.0
    logx = np.log(np.abs(np.where(nonzero, z, 1.0)))
    negative = z < 0.0
    done = ~nonzero
    prev = np.zeros_like(z)

    for k in range(1, MAX_TERMS):
        logterm = k * logx - gammaln(1.0 + alpha * k)
        with np.errstate(over="ignore"):
            term = np.exp(logterm)
        if k % 2 == 1:
            term = np.where(negative, -term, term)
        term = np.where(done, 0.0, term)
        with np.errstate(over="ignore", invalid="ignore"):
            s = total + term
        if not (np.all(np.isfinite(term)) and np.all(np.isfinite(s))):
            raise OverflowError("Mittag-Leffler series overflowed")
        comp += np.where(
            np.abs(total) >= np.abs(term), (total - s) + term, (term - s) + total
        )
        total = s

        past_peak = logterm < prev
        done |= past_peak & (np.abs(term) <= SERIES_TOL * np.abs(total + comp))
        prev = logterm
        if done.all():
            return total + comp

    raise ConvergenceError(
        f"Mittag-Leffler series did not converge within {MAX_TERMS} terms"
    )


def _integral(alpha: float, x: np.ndarray) -> np.ndarray:
    """E_alpha(-x) for x > 0 from the integral representation."""
    c = math.cos(alpha * math.pi)
    upper = _TAIL_EXPONENT**alpha
    inv = 1.0 / alpha

    def integrand(v):
        return np.exp(-(v**inv)) * x / (v * v + 2.0 * v * x * c + x * x)

    value, _ = quad_vec(integrand, 0.0, upper, epsabs=1e-16, epsrel=1e-13, limit=4000)
    return math.sin(alpha * math.pi) / (alpha * math.pi) * value


def mittag_leffler(alpha: float, z):
    """One-parameter Mittag-Leffler function ``sum_k z**k / Gamma(1 + alpha*k)``.

    Parameters
    ----------
    alpha : float
        Order in (0, 1].
    z : float or array_like
        Real argument(s). Positive values are limited to ``z <= 50``.

    Returns
    -------
    float or numpy.ndarray
        Same shape as ``z``.

    Raises
    ------
    DomainError
        For ``alpha`` outside (0, 1], non-finite ``z`` or ``z > 50``.
    ConvergenceError
        If the series needs more than ``MAX_TERMS`` terms.
    """
    alpha = _check_alpha(alpha)
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(zz)):
        raise DomainError("mittag_leffler requires finite z")
    if np.any(zz > Z_MAX):
        raise DomainError(f"positive z is supported up to {Z_MAX}")

    out = np.empty_like(zz)
    with np.errstate(divide="ignore"):
        scale = np.where(zz < 0.0, np.abs(zz) ** (1.0 / alpha), 0.0)
    hard = (zz < 0.0) & (scale > _CANCEL_LIMIT)
    easy = ~hard

    if easy.any():
        out[easy] = _series(alpha, zz[easy])
    if hard.any():
        if alpha == 1.0:
            out[hard] = np.exp(zz[hard])
        else:
            out[hard] = _integral(alpha, -zz[hard])

    if scalar:
        return float(out[0])
    return out.reshape(np.shape(z))
