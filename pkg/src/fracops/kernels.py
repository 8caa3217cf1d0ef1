"""Kernels of the five fractional operators and their exact segment integrals.

Every operator has the form ``prefactor * int_0^t k(t - tau) f'(tau) dtau``;
this module supplies ``k`` and the integrals of ``k`` against linear
functions on a sub-interval, which are the product-integration weights used
by :mod:`fracops.quadrature`.

Kernels, with ``lam = alpha / (1 - alpha)``::

    C   t**-alpha
    CF  exp(-lam t)
    AB  E_alpha(-lam t**alpha)
    DS  sin(lam t)
    DC  cos(lam t)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import binom, roots_jacobi

from .errors import DomainError, IntervalError, OrderError
from .specfun import gamma, mittag_leffler

__all__ = [
    "KernelKind",
    "FractionalOrder",
    "OperatorSpec",
    "kernel_eval",
    "kernel_moments",
    "kernel_segment_integral",
    "AB_GAUSS_NODES",
]

AB_GAUSS_NODES = 8

# power-kernel moments switch to a binomial series once h / s_lo <= this
_BINOMIAL_RATIO = 0.25
_BINOMIAL_TERMS = 32
# exponential moments switch to a Taylor series once |mu h| <= this
_TAYLOR_RADIUS = 0.5
_TAYLOR_TERMS = 22


class KernelKind(str, enum.Enum):
    C = "C"
    CF = "CF"
    AB = "AB"
    DS = "DS"
    DC = "DC"

    @classmethod
    def parse(cls, value) -> "KernelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise DomainError(f"unknown kernel kind {value!r}; expected one of {names}") from None

    @property
    def uses_lambda(self) -> bool:
        return self is not KernelKind.C


@dataclass(frozen=True)
class FractionalOrder:
    """Order ``alpha`` in (0, 1] with derived frequency ``lam = alpha/(1-alpha)``."""

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha <= 1.0):
            raise OrderError(f"fractional order must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def coerce(cls, value) -> "FractionalOrder":
        return value if isinstance(value, cls) else cls(value)

    @property
    def lam(self) -> float:
        if self.alpha == 1.0:
            raise OrderError("lambda = alpha/(1-alpha) is undefined at alpha = 1")
        return self.alpha / (1.0 - self.alpha)


@dataclass(frozen=True)
class OperatorSpec:
    """Operator kind, order and normalization.

    ``normalization`` is N(alpha) for DS/DC and B(alpha) for CF/AB. The
    Caputo operator ignores it and always uses ``1 / Gamma(1 - alpha)``.
    """

    kind: KernelKind
    order: FractionalOrder
    normalization: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind.parse(self.kind))
        object.__setattr__(self, "order", FractionalOrder.coerce(self.order))
        norm = float(self.normalization)
        if not math.isfinite(norm) or norm <= 0.0:
            raise DomainError(f"normalization must be a positive number, got {self.normalization!r}")
        object.__setattr__(self, "normalization", norm)
        if self.kind.uses_lambda:
            self.order.lam  # noqa: B018  (raises OrderError at alpha = 1)

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def prefactor(self) -> float:
        """Constant in front of the convolution integral."""
        alpha = self.order.alpha
        if self.kind is KernelKind.C:
            if alpha == 1.0:
                raise OrderError("the Caputo prefactor 1/Gamma(0) degenerates at alpha = 1")
            return 1.0 / gamma(1.0 - alpha)
        return self.normalization / (1.0 - alpha)


def _check_kind_order(kind, order):
    kind = KernelKind.parse(kind)
    order = FractionalOrder.coerce(order)
    if kind.uses_lambda:
        order.lam  # noqa: B018
    return kind, order


def kernel_eval(kind, order, t):
    """Evaluate the kernel of ``kind`` at ``t``.

    ``t`` may be a scalar or an array. The Caputo kernel requires ``t > 0``,
    the others ``t >= 0``.
    """
    kind, order = _check_kind_order(kind, order)
    scalar = np.ndim(t) == 0
    tt = np.asarray(t, dtype=float)
    if kind is KernelKind.C:
        if np.any(tt <= 0.0):
            raise DomainError("the Caputo kernel t**-alpha is singular at t = 0")
    elif np.any(tt < 0.0):
        raise DomainError("kernels are only defined for t >= 0")

    alpha = order.alpha
    if kind is KernelKind.C:
        out = tt ** (-alpha)
    else:
        lam = order.lam
        if kind is KernelKind.CF:
            out = np.exp(-lam * tt)
        elif kind is KernelKind.AB:
            out = mittag_leffler(alpha, -lam * tt**alpha)
        elif kind is KernelKind.DS:
            out = np.sin(lam * tt)
        else:
            out = np.cos(lam * tt)
    return float(out) if scalar else np.asarray(out)


def _exp_moments(x):
    """Return (int_0^1 e^{xu} du, int_0^1 u e^{xu} du) for real or complex ``x``."""
    x = np.asarray(x)
    small = np.abs(x) <= _TAYLOR_RADIUS
    e0 = np.empty_like(x)
    e1 = np.empty_like(x)

    if small.any():
        xs = x[small]
        # Horner on sum x^k / (k+1)! and sum x^k / (k! (k+2))
        p0 = np.zeros_like(xs)
        p1 = np.zeros_like(xs)
        for k in range(_TAYLOR_TERMS - 1, -1, -1):
            p0 = p0 * xs + 1.0 / math.factorial(k + 1)
            p1 = p1 * xs + 1.0 / (math.factorial(k) * (k + 2))
        e0[small] = p0
        e1[small] = p1
    big = ~small
    if big.any():
        xb = x[big]
        ex = np.exp(xb)
        e0[big] = np.expm1(xb) / xb
        e1[big] = (ex * (xb - 1.0) + 1.0) / (xb * xb)
    return e0, e1


def _power_moments(alpha, s_lo, h):
    """Moments of s**-alpha on [s_lo, s_lo + h] against 1 and u = (s - s_lo)/h."""
    beta = 1.0 - alpha
    s_lo, h = np.broadcast_arrays(np.asarray(s_lo, float), np.asarray(h, float))
    k0 = np.empty(s_lo.shape)
    k1 = np.empty(s_lo.shape)

    origin = s_lo == 0.0
    if origin.any():
        if alpha == 1.0:
            raise DomainError("int_0 s**-1 ds diverges; alpha = 1 needs s_lo > 0")
        hh = h[origin]
        k0[origin] = hh ** (-alpha) / beta
        k1[origin] = hh ** (-alpha) / (2.0 - alpha)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(origin, np.inf, h / np.where(origin, 1.0, s_lo))

    near = ratio <= _BINOMIAL_RATIO
    if near.any():
        eps = ratio[near]
        p0 = np.zeros_like(eps)
        p1 = np.zeros_like(eps)
        for k in range(_BINOMIAL_TERMS - 1, -1, -1):
            c = binom(-alpha, k)
            p0 = p0 * eps + c / (k + 1)
            p1 = p1 * eps + c / (k + 2)
        scale = s_lo[near] ** (-alpha)
        k0[near] = scale * p0
        k1[near] = scale * p1

    far = ~origin & ~near
    if far.any():
        a = s_lo[far]
        hh = h[far]
        b = a + hh
        if beta == 0.0:
            m0 = np.log1p(hh / a) / hh
        else:
            m0 = (b**beta - a**beta) / (beta * hh)
        m1 = (b ** (1.0 + beta) - a ** (1.0 + beta)) / ((1.0 + beta) * hh)
        k0[far] = m0
        k1[far] = (m1 - a * m0) / hh
    return k0, k1


def _ab_origin_moments(order, H, nodes):
    """``int_0^H k`` and ``int_0^H s k`` by Gauss-Jacobi.

    Near lag 0 the kernel behaves like ``1 - c s**alpha``. With
    ``s = H v**(1/alpha)`` it becomes an entire function of ``v`` and the
    algebraic factors move into the Jacobi weights.
    """
    alpha = order.alpha
    p = 1.0 / alpha
    z = -order.lam * H[..., None] ** alpha
    out = []
    for power, beta in ((1.0, p - 1.0), (2.0, 2.0 * p - 1.0)):
        xj, wj = roots_jacobi(nodes, 0.0, beta)
        v = 0.5 * (xj + 1.0)
        wj = p * wj * 2.0 ** (-beta - 1.0)
        out.append(H**power * (mittag_leffler(alpha, z * v) @ wj))
    return out


def _ab_moments(order, s_lo, h, nodes=AB_GAUSS_NODES):
    """Gauss-Legendre moments, or Gauss-Jacobi when the segment is close to lag 0.

    For ``s_lo < h`` the lag-0 branch point is too near for Gauss-Legendre, so
    the segment is written as a difference of two integrals starting at 0.
    """
    alpha, lam = order.alpha, order.lam
    s_lo, h = np.broadcast_arrays(np.asarray(s_lo, float), np.asarray(h, float))
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = 0.5 * (x + 1.0)
    w = 0.5 * w
    s = s_lo[..., None] + h[..., None] * u
    k = mittag_leffler(alpha, -lam * s**alpha)
    k0, k1 = np.asarray(k @ w), np.asarray(k @ (w * u))

    near = s_lo < h
    if near.any():
        a, hn = s_lo[near], h[near]
        m0_hi, m1_hi = _ab_origin_moments(order, a + hn, nodes)
        m0_lo, m1_lo = _ab_origin_moments(order, a, nodes)
        m0 = m0_hi - m0_lo
        k0[near] = m0 / hn
        k1[near] = (m1_hi - m1_lo - a * m0) / (hn * hn)
    return k0, k1


def kernel_moments(kind, order, s_lo, h, *, ab_nodes=AB_GAUSS_NODES):
    """Kernel moments on ``[s_lo, s_lo + h]``.

    Returns ``(K0, K1)`` with ``K0 = int_0^1 k(s_lo + h u) du`` and
    ``K1 = int_0^1 u k(s_lo + h u) du``. Closed forms are used for C, CF, DS
    and DC; AB uses ``ab_nodes``-point Gauss rules.
    """
    kind, order = _check_kind_order(kind, order)
    s_lo = np.asarray(s_lo, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(s_lo < 0.0) or np.any(h <= 0.0):
        raise IntervalError("moments need s_lo >= 0 and h > 0")

    if kind is KernelKind.C:
        return _power_moments(order.alpha, s_lo, h)
    if kind is KernelKind.AB:
        return _ab_moments(order, s_lo, h, ab_nodes)

    lam = order.lam
    mu = -lam if kind is KernelKind.CF else 1j * lam
    s_lo, h = np.broadcast_arrays(s_lo, h)
    e0, e1 = _exp_moments(mu * h)
    shift = np.exp(mu * s_lo)
    k0 = shift * e0
    k1 = shift * e1
    if kind is KernelKind.CF:
        return np.real(k0), np.real(k1)
    if kind is KernelKind.DS:
        return k0.imag, k1.imag
    return k0.real, k1.real


def _ab_breakpoints(order, s_a, s_b):
    """Lag breakpoints for long AB segments.

    The first piece ends where ``lam * s**alpha = 1``; later pieces double, so
    each stays at least its own length away from the lag-0 branch point.
    """
    edge = order.lam ** (-1.0 / order.alpha)
    cuts = [s_a]
    c = edge
    while c < s_b:
        if c > s_a:
            cuts.append(c)
        c *= 2.0
    cuts.append(s_b)
    return cuts


def kernel_segment_integral(kind, order, t, a, b, c0, c1, *, ab_nodes=AB_GAUSS_NODES):
    """Integral of ``k(t - tau) * (c0 + c1 tau)`` over ``tau`` in ``[a, b]``.

    Requires ``0 <= a < b <= t``. AB segments are split into graded pieces so
    the result does not depend on the segment length.
    """
    t, a, b = float(t), float(a), float(b)
    if not (0.0 <= a < b <= t):
        raise IntervalError(f"need 0 <= a < b <= t, got a={a}, b={b}, t={t}")
    kind, order = _check_kind_order(kind, order)
    if kind is KernelKind.AB:
        lags = _ab_breakpoints(order, t - b, t - a)
    else:
        lags = [t - b, t - a]

    total = 0.0
    for s_lo, s_hi in zip(lags[:-1], lags[1:]):
        h = s_hi - s_lo
        k0, k1 = kernel_moments(kind, order, s_lo, h, ab_nodes=ab_nodes)
        # linear factor at lag s_lo (u = 0) and at lag s_hi (u = 1)
        near = c0 + c1 * (t - s_lo)
        far = c0 + c1 * (t - s_hi)
        total += h * (near * (k0 - k1) + far * k1)
    return float(total)
