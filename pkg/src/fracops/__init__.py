"""Fractional operators with power, exponential, Mittag-Leffler, sine and cosine kernels.

Typical use::

    from fracops import OperatorSpec, TimeGrid, apply_operator, preset_function

    grid = TimeGrid.from_span(10.0, 1e-3)
    ds = apply_operator(OperatorSpec("DS", 2 / 3, 1 / 3), preset_function("sin"), grid)
"""

from .errors import (
    ConvergenceError,
    DomainError,
    FracOpsError,
    GridMismatchError,
    IntervalError,
    OrderError,
    SpanError,
    TruncationError,
    UnknownPresetError,
)
from .kernels import (
    FractionalOrder,
    KernelKind,
    OperatorSpec,
    kernel_eval,
    kernel_moments,
    kernel_segment_integral,
)
from .laplace import LaplaceQuery, dc_transform, ds_transform, numerical_laplace
from .memristor import (
    MemristorState,
    WindowApprox,
    build_memristor,
    caputo_window_check,
    verify_ds_linearization,
    vi_curve,
)
from .quadrature import (
    PRESETS,
    Signal,
    SourceFunction,
    TimeGrid,
    apply_operator,
    preset_function,
    preset_samples,
)
from .specfun import gamma, mittag_leffler

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "FracOpsError",
    "FractionalOrder",
    "GridMismatchError",
    "IntervalError",
    "KernelKind",
    "LaplaceQuery",
    "MemristorState",
    "OperatorSpec",
    "OrderError",
    "PRESETS",
    "Signal",
    "SourceFunction",
    "SpanError",
    "TimeGrid",
    "TruncationError",
    "UnknownPresetError",
    "WindowApprox",
    "apply_operator",
    "build_memristor",
    "caputo_window_check",
    "dc_transform",
    "ds_transform",
    "gamma",
    "kernel_eval",
    "kernel_moments",
    "kernel_segment_integral",
    "mittag_leffler",
    "numerical_laplace",
    "preset_function",
    "preset_samples",
    "verify_ds_linearization",
    "vi_curve",
]
