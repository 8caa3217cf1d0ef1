"""Charge-controlled memristor ``V = M(q) I`` with ``M(q) = q`` and ``I = sin t``.

The voltage ``(1 - cos t) sin t`` equals the sine-kernel operator with
``alpha = 2/3`` and ``N = 1/2`` applied to the charge, for every ``t >= 0``.
Power-law (Caputo) surrogates only hold inside short windows; the window
check quantifies both the kernel mismatch and the resulting voltage mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import IntervalError, SpanError
from .kernels import KernelKind, OperatorSpec
from .quadrature import Signal, SourceFunction, TimeGrid, apply_operator
from .specfun import gamma

__all__ = [
    "MemristorState",
    "WindowApprox",
    "WindowReport",
    "LINEARIZATION_SPEC",
    "STATED_WINDOWS",
    "KERNEL_AMPLITUDE",
    "build_memristor",
    "vi_curve",
    "verify_ds_linearization",
    "linearization_order",
    "kernel_gap",
    "caputo_window_check",
]

LINEARIZATION_SPEC = OperatorSpec(KernelKind.DS, 2.0 / 3.0, 0.5)
KERNEL_AMPLITUDE = 0.3  # the sin(2t) kernel rescaled to 0.3 sin(2t)
SCAN_POINTS = 10_000

CHARGE_SOURCE = SourceFunction.analytic(np.sin, 0.0)


@dataclass(frozen=True)
class MemristorState:
    grid: TimeGrid
    current: Signal
    charge: Signal
    voltage: Signal


@dataclass(frozen=True)
class WindowApprox:
    """Caputo surrogate of order ``exponent`` and scale ``c0`` on ``[t_lo, t_hi]``."""

    t_lo: float
    t_hi: float
    exponent: float
    c0: float

    def __post_init__(self):
        if not (0.0 < self.t_lo < self.t_hi):
            raise IntervalError(f"need 0 < t_lo < t_hi, got [{self.t_lo}, {self.t_hi}]")
        if not (0.0 < self.exponent < 1.0):
            raise IntervalError(f"exponent must lie in (0, 1), got {self.exponent}")


@dataclass(frozen=True)
class WindowReport:
    kernel_gap: float
    voltage_gap: float
    fitted_c0: float
    fitted_voltage_gap: float


STATED_WINDOWS = (
    WindowApprox(3.7, 4.24, 8.0 / 9.0, 10.0 / 3.0 * gamma(1.0 / 9.0)),
    WindowApprox(6.82, 7.35, 43.0 / 70.0, 5.0 * gamma(27.0 / 70.0)),
)


def build_memristor(grid: TimeGrid) -> MemristorState:
    t = grid.nodes
    current = np.sin(t)
    charge = 1.0 - np.cos(t)
    return MemristorState(
        grid=grid,
        current=Signal(grid, current),
        charge=Signal(grid, charge),
        voltage=Signal(grid, charge * current),
    )


def vi_curve(state: MemristorState) -> np.ndarray:
    """``(I, V)`` pairs in time order as an ``(n + 1, 2)`` array.

    The grid must cover at least one period of the drive.
    """
    if state.grid.t_max < 2.0 * math.pi:
        raise SpanError(f"V-I loop needs t_max >= 2 pi, got {state.grid.t_max}")
    return np.column_stack([state.current.values, state.voltage.values])


def verify_ds_linearization(grid: TimeGrid) -> float:
    """Largest deviation of the DS operator applied to ``q`` from ``V``."""
    out = apply_operator(LINEARIZATION_SPEC, CHARGE_SOURCE, grid)
    t = grid.nodes
    exact = np.sin(t) - 0.5 * np.sin(2.0 * t)
    return float(np.max(np.abs(out.values - exact)))


def linearization_order(t_max: float = 10.0, dt: float = 1e-3) -> tuple[float, float, float]:
    """Errors at ``2 dt`` and ``dt`` and the observed convergence order."""
    coarse = verify_ds_linearization(TimeGrid.from_span(t_max, 2.0 * dt))
    fine = verify_ds_linearization(TimeGrid.from_span(t_max, dt))
    return coarse, fine, math.log2(coarse / fine)


def _window_curve_gap(exponent):
    return lambda t: np.abs(KERNEL_AMPLITUDE * np.sin(2.0 * t) - t ** (-exponent))


def kernel_gap(t_lo: float, t_hi: float, exponent: float) -> float:
    """Max of ``|0.3 sin 2t - t**-exponent|`` on ``[t_lo, t_hi]``.

    Dense scan, then a bounded polish around the best scan point.
    """
    gap = _window_curve_gap(exponent)
    t = np.linspace(t_lo, t_hi, SCAN_POINTS + 1)
    values = gap(t)
    k = int(np.argmax(values))
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, SCAN_POINTS)]
    res = minimize_scalar(lambda x: -gap(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(max(values[k], -res.fun))


def caputo_window_check(w: WindowApprox, grid: TimeGrid) -> WindowReport:
    """Compare ``V`` with ``w.c0`` times the Caputo derivative of ``q`` on the window."""
    if w.t_hi > grid.t_max:
        raise IntervalError(f"window [{w.t_lo}, {w.t_hi}] exceeds grid span {grid.t_max}")

    n = min(grid.n, int(math.ceil(w.t_hi / grid.dt - 1e-9)))
    sub = TimeGrid(grid.dt, n)
    caputo = apply_operator(OperatorSpec(KernelKind.C, w.exponent), CHARGE_SOURCE, sub)
    t = sub.nodes
    inside = (t >= w.t_lo - 1e-12) & (t <= w.t_hi + 1e-12)
    if not inside.any():
        raise IntervalError("window contains no grid nodes")
    t = t[inside]
    d = caputo.values[inside]
    v = np.sin(t) - 0.5 * np.sin(2.0 * t)

    def worst(c):
        return float(np.max(np.abs(v - c * d)))

    # max|v - c d| is convex in c; scan the ratio range then polish
    ratios = v[d != 0.0] / d[d != 0.0]
    lo, hi = float(ratios.min()), float(ratios.max())
    if lo == hi:
        fitted = lo
    else:
        grid_c = np.linspace(lo, hi, 1001)
        k = int(np.argmin([worst(c) for c in grid_c]))
        res = minimize_scalar(worst, bounds=(grid_c[max(k - 1, 0)], grid_c[min(k + 1, 1000)]),
                              method="bounded", options={"xatol": 1e-12})
        fitted = float(res.x)

    return WindowReport(
        kernel_gap=kernel_gap(w.t_lo, w.t_hi, w.exponent),
        voltage_gap=worst(w.c0),
        fitted_c0=fitted,
        fitted_voltage_gap=worst(fitted),
    )
