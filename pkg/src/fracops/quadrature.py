"""Product-integration evaluation of the fractional operators on a uniform grid.

The smooth factor ``f'`` is replaced by a piecewise-linear interpolant of its
node values (analytic sources) or by the piecewise-constant first-difference
slopes (sampled sources, which is the L1 scheme for the Caputo operator).
Each segment is then integrated exactly against the kernel.

Two accumulation strategies are used, both with a fixed evaluation order:

* CF, DS and DC kernels are (real or imaginary parts of) ``exp(mu s)``, so the
  history integral obeys ``H(t + dt) = exp(mu dt) H(t) + local segment``.
  This is the same segment sum, propagated in O(n).
* C and AB kernels have no such shift rule; the Toeplitz segment weights are
  summed for every output node in order j = 0 .. i-1 with Neumaier
  compensation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError, GridMismatchError, UnknownPresetError
from .kernels import AB_GAUSS_NODES, KernelKind, OperatorSpec, _exp_moments, kernel_moments

__all__ = [
    "TimeGrid",
    "SourceFunction",
    "Signal",
    "Preset",
    "PRESETS",
    "apply_operator",
    "preset_function",
    "preset_samples",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_i = i * dt`` for ``i = 0 .. n``."""

    dt: float
    n: int

    def __post_init__(self):
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0.0:
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_span(cls, t_max: float, dt: float) -> "TimeGrid":
        """Grid on ``[0, t_max]``; ``t_max`` is rounded to a whole number of steps."""
        if dt <= 0.0 or t_max < dt:
            raise DomainError(f"need 0 < dt <= t_max, got dt={dt}, t_max={t_max}")
        return cls(dt, int(round(t_max / dt)))

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.dt

    @property
    def t_max(self) -> float:
        return self.n * self.dt

    def index_of(self, t: float) -> int:
        """Index of the node nearest to ``t``."""
        return int(min(max(round(t / self.dt), 0), self.n))


@dataclass(frozen=True)
class SourceFunction:
    """Integrand source: analytic ``f'`` or samples of ``f`` on a grid."""

    derivative_eval: Optional[Callable] = None
    samples: Optional[np.ndarray] = field(default=None, compare=False)
    grid: Optional[TimeGrid] = None
    f0: float = 0.0

    def __post_init__(self):
        if (self.derivative_eval is None) == (self.samples is None):
            raise DomainError("give exactly one of derivative_eval or samples")
        if self.samples is not None:
            if self.grid is None:
                raise DomainError("sampled sources need their grid")
            samples = np.asarray(self.samples, dtype=float)
            if samples.shape != (self.grid.n + 1,):
                raise GridMismatchError(
                    f"expected {self.grid.n + 1} samples, got shape {samples.shape}"
                )
            if samples[0] != self.f0:
                raise DomainError("f0 must equal samples[0]")
            samples.setflags(write=False)
            object.__setattr__(self, "samples", samples)

    @classmethod
    def analytic(cls, derivative: Callable, f0: float = 0.0) -> "SourceFunction":
        return cls(derivative_eval=derivative, f0=float(f0))

    @classmethod
    def sampled(cls, grid: TimeGrid, samples) -> "SourceFunction":
        samples = np.asarray(samples, dtype=float)
        return cls(samples=samples, grid=grid, f0=float(samples[0]))

    @property
    def mode(self) -> str:
        return "analytic" if self.derivative_eval is not None else "sampled"

    def derivative_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        values = np.asarray(self.derivative_eval(t), dtype=float)
        return np.broadcast_to(values, t.shape).copy()


@dataclass(frozen=True)
class Signal:
    """Values sampled on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n + 1,):
            raise GridMismatchError(
                f"signal needs {self.grid.n + 1} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("signal values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def at(self, t: float) -> float:
        return float(self.values[self.grid.index_of(t)])


@dataclass(frozen=True)
class Preset:
    name: str
    function: Callable
    derivative: Callable
    f0: float


PRESETS = {
    "cube": Preset("cube", lambda t: t**3 / 3.0, lambda t: t**2, 0.0),
    "negcos": Preset("negcos", lambda t: -np.cos(t), np.sin, -1.0),
    "sin": Preset("sin", np.sin, np.cos, 0.0),
    "exp": Preset("exp", np.exp, np.exp, 1.0),
}


def _preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPresetError(
            f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}"
        ) from None


def preset_function(name: str) -> SourceFunction:
    """Analytic source for one of the presets ``cube``, ``negcos``, ``sin``, ``exp``."""
    p = _preset(name)
    return SourceFunction.analytic(p.derivative, p.f0)


def preset_samples(name: str, grid: TimeGrid) -> SourceFunction:
    """Sampled source holding the preset's values of ``f`` on ``grid``."""
    p = _preset(name)
    samples = np.asarray(p.function(grid.nodes), dtype=float)
    samples[0] = p.f0
    return SourceFunction.sampled(grid, samples)


def _exponential_history(spec: OperatorSpec, grid: TimeGrid, left, right):
    """History integrals for kernels Re/Im exp(mu s), evaluated by the shift rule.

    ``left``/``right`` hold the integrand values at the ends of every segment.
    """
    h = grid.dt
    lam = spec.order.lam
    mu = -lam if spec.kind is KernelKind.CF else 1j * lam
    e0, e1 = _exp_moments(np.asarray([mu * h]))
    e0, e1 = e0[0], e1[0]
    # segment [t_j, t_{j+1}] seen from t_{j+1}: u = 0 at tau = t_{j+1}
    local = h * (right * (e0 - e1) + left * e1)
    shift = np.exp(mu * h)
    hist = lfilter([1.0], [1.0, -shift], local)
    if spec.kind is KernelKind.DS:
        return hist.imag
    return hist.real


def _toeplitz_history(spec: OperatorSpec, grid: TimeGrid, left, right, ab_nodes):
    n, h = grid.n, grid.dt
    lags = np.arange(n) * h
    k0, k1 = kernel_moments(spec.kind, spec.order, lags, h, ab_nodes=ab_nodes)
    w_right = h * (k0 - k1)  # multiplies the value at tau = t_{j+1}
    w_left = h * k1  # multiplies the value at tau = t_j

    total = np.zeros(n)
    comp = np.zeros(n)
    for j in range(n):
        m = n - j
        term = w_right[:m] * right[j] + w_left[:m] * left[j]
        acc = total[j:]
        s = acc + term
        comp[j:] += np.where(np.abs(acc) >= np.abs(term), (acc - s) + term, (term - s) + acc)
        total[j:] = s
    return total + comp


def apply_operator(
    spec: OperatorSpec, source: SourceFunction, grid: TimeGrid, *, ab_nodes: int = AB_GAUSS_NODES
) -> Signal:
    """Evaluate ``spec`` applied to ``source`` at every node of ``grid``.

    ``ab_nodes`` sets the Gauss-Legendre order of the AB segment weights.
    The first output is always 0. For the Caputo operator at ``alpha = 1`` the
    result is the classical derivative (node values of ``f'`` for analytic
    sources, backward differences for sampled ones).
    """
    if source.mode == "sampled" and source.grid != grid:
        raise GridMismatchError(f"source grid {source.grid} differs from {grid}")

    if source.mode == "analytic":
        g = source.derivative_at(grid.nodes)
        if not np.all(np.isfinite(g)):
            raise DomainError("derivative values must be finite on the grid")
        left, right = g[:-1], g[1:]
    else:
        slopes = np.diff(source.samples) / grid.dt
        left = right = slopes

    out = np.zeros(grid.n + 1)
    if spec.kind is KernelKind.C and spec.alpha == 1.0:
        out[1:] = right
        return Signal(grid, out)

    if spec.kind in (KernelKind.CF, KernelKind.DS, KernelKind.DC):
        hist = _exponential_history(spec, grid, left, right)
    else:
        hist = _toeplitz_history(spec, grid, left, right, ab_nodes)
    out[1:] = spec.prefactor * hist
    return Signal(grid, out)
