"""Laplace-domain forms of the sine- and cosine-kernel operators.

For a source ``f`` of exponential order with transform ``F(s)``::

    L{DS f}(s) = alpha N / ((1-alpha)^2 s^2 + alpha^2) * (s F(s) - f(0))
    L{DC f}(s) = s (1-alpha) N / ((1-alpha)^2 s^2 + alpha^2) * (s F(s) - f(0))

``numerical_laplace`` integrates a grid signal directly so the quadrature
engine can be checked against these closed forms on the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError, TruncationError, UnknownPresetError
from .kernels import FractionalOrder
from .quadrature import Signal

__all__ = [
    "LaplaceQuery",
    "ds_transform",
    "dc_transform",
    "numerical_laplace",
    "preset_transform",
    "PRESET_GROWTH",
    "TRUNCATION_MARGIN",
    "relative_gap",
]

TRUNCATION_MARGIN = 20.0

# exponential growth rate of each preset, used by the truncation contract
PRESET_GROWTH = {"cube": 0.0, "negcos": 0.0, "sin": 0.0, "exp": 1.0}


@dataclass(frozen=True)
class LaplaceQuery:
    """Transform variable ``s`` with the source's ``F(s)`` and ``f(0)``."""

    s: float
    F_of_s: float
    f0: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise DomainError(f"s must be a positive real number, got {self.s!r}")


def _denominator(alpha: float, s: float) -> float:
    return (1.0 - alpha) ** 2 * s * s + alpha * alpha


def _lam_order(order) -> float:
    order = FractionalOrder.coerce(order)
    order.lam  # noqa: B018  (alpha = 1 rejected)
    return order.alpha


def ds_transform(order, normalization: float, q: LaplaceQuery) -> float:
    """Closed-form transform of the sine-kernel operator.

    The result is ``normalization`` times a normalization-free factor, so it is
    exactly linear in ``normalization``.
    """
    alpha = _lam_order(order)
    s = q.s
    return normalization * (alpha / _denominator(alpha, s) * (s * q.F_of_s - q.f0))


def dc_transform(order, normalization: float, q: LaplaceQuery) -> float:
    """Closed-form transform of the cosine-kernel operator (exactly linear in ``normalization``)."""
    alpha = _lam_order(order)
    s = q.s
    return normalization * (s * (1.0 - alpha) / _denominator(alpha, s) * (s * q.F_of_s - q.f0))


def numerical_laplace(signal: Signal, s: float, *, growth: float = 0.0) -> float:
    """Trapezoidal ``int_0^T exp(-s t) g(t) dt`` over the signal's grid.

    ``growth`` is the exponential rate the signal may grow at. The neglected
    tail is only small when ``(s - growth) * T >= 20``; shorter signals raise
    :class:`TruncationError`.
    """
    if not (math.isfinite(s) and s > 0.0):
        raise DomainError(f"s must be a positive real number, got {s!r}")
    T = signal.grid.t_max
    if (s - growth) * T < TRUNCATION_MARGIN:
        raise TruncationError(
            f"(s - growth) * T = {(s - growth) * T:.3g} < {TRUNCATION_MARGIN}; "
            "extend the signal or raise s"
        )
    t = signal.t
    return float(trapezoid(np.exp(-s * t) * signal.values, dx=signal.grid.dt))


def preset_transform(name: str, s: float) -> float:
    """``F(s)`` of a preset source (exists for ``s`` above its growth rate)."""
    if name not in PRESET_GROWTH:
        raise UnknownPresetError(f"unknown preset {name!r}")
    if s <= PRESET_GROWTH[name]:
        raise DomainError(f"the transform of {name} needs s > {PRESET_GROWTH[name]}")
    if name == "cube":
        return 2.0 / s**4
    if name == "negcos":
        return -s / (s * s + 1.0)
    if name == "sin":
        return 1.0 / (s * s + 1.0)
    return 1.0 / (s - 1.0)


def relative_gap(numeric: float, exact: float) -> float:
    """``|numeric - exact| / |exact|``, defined as 0 when both vanish."""
    diff = abs(numeric - exact)
    if diff == 0.0:
        return 0.0
    if exact == 0.0:
        return math.inf
    return diff / abs(exact)
