"""Command-line driver: operator sweeps, verification runs and figure data.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or
configuration errors. All CSV output uses 17 significant digits, ``.`` as
decimal separator and ``\\n`` line endings.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FracOpsError
from .kernels import KernelKind, OperatorSpec
from .laplace import (
    PRESET_GROWTH,
    LaplaceQuery,
    dc_transform,
    ds_transform,
    numerical_laplace,
    preset_transform,
    relative_gap,
)
from .memristor import (
    KERNEL_AMPLITUDE,
    STATED_WINDOWS,
    build_memristor,
    caputo_window_check,
    linearization_order,
    vi_curve,
)
from .quadrature import PRESETS, TimeGrid, apply_operator, preset_function

__all__ = [
    "RunConfig",
    "COMPARE_NORMS",
    "FIGURE_MANIFEST",
    "run_eval",
    "run_compare",
    "run_laplace_check",
    "run_memristor",
    "run_figures",
    "main",
]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_ALPHA = 2.0 / 3.0
LAPLACE_TOL = 1e-4
LINEARIZATION_TOL = 1e-6
WINDOW_SPAN = (3.0, 8.0)
FIG_DIR_ENV = "FRACOPS_FIG_DIR"

# (DS, DC) normalizations used in the comparison plots
COMPARE_NORMS = {
    "cube": (0.9, 4.0),
    "negcos": (0.4, 0.6),
    "sin": (0.3, 0.5),
    "exp": (0.8, 1.6),
}

FIGURE_MANIFEST = (
    "fig1_ds.csv", "fig1_dc.csv",
    "fig2_ds.csv", "fig2_dc.csv",
    "fig3_ds.csv", "fig3_dc.csv",
    "fig4_ds.csv", "fig4_dc.csv",
    "fig5_cube.csv", "fig5_negcos.csv",
    "fig6_sin.csv", "fig6_exp.csv",
    "fig7_loop.csv", "fig7_windows.csv",
)
_SWEEP_PRESETS = {1: "cube", 2: "negcos", 3: "sin", 4: "exp"}
_COMPARE_PANELS = {5: ("cube", "negcos"), 6: ("sin", "exp")}


@dataclass
class RunConfig:
    subcommand: str = "eval"
    ops: tuple = ("DS",)
    alpha: float = DEFAULT_ALPHA
    norm: float | None = None
    presets: tuple = ("cube",)
    t_max: float = 10.0
    dt: float = 1e-3
    out: str | None = None
    s_values: tuple | None = None
    norm_ds: float | None = None
    norm_dc: float | None = None

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise FracOpsError(f"--dt must be positive, got {self.dt}")
        if not (self.t_max >= self.dt):
            raise FracOpsError(f"--tmax must be at least dt, got {self.t_max}")
        if not (0.0 < self.alpha <= 1.0):
            raise FracOpsError(f"--alpha must lie in (0, 1], got {self.alpha}")
        self.ops = tuple(KernelKind.parse(op) for op in self.ops)
        for name in self.presets:
            if name not in PRESETS:
                raise FracOpsError(f"unknown preset {name!r}")

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.from_span(self.t_max, self.dt)

    def normalization_for(self, kind: KernelKind) -> float:
        if self.norm is not None:
            return self.norm
        if kind in (KernelKind.DS, KernelKind.DC):
            return 1.0 - self.alpha
        return 1.0


def _fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


def _write_csv(path, header, columns):
    rows = zip(*columns)
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)
        return
    path = Path(path)
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)


def _operator_values(kind, alpha, norm, preset, grid):
    spec = OperatorSpec(kind, alpha, norm)
    return apply_operator(spec, preset_function(preset), grid).values


def run_eval(config: RunConfig) -> int:
    """Write ``t,value`` for one operator applied to one preset."""
    kind = config.ops[0]
    grid = config.grid
    values = _operator_values(kind, config.alpha, config.normalization_for(kind),
                              config.presets[0], grid)
    _write_csv(config.out, ["t", "value"], [grid.nodes, values])
    return EXIT_OK


def _compare_columns(preset, alpha, grid, norm_ds=None, norm_dc=None):
    default_ds, default_dc = COMPARE_NORMS[preset]
    ds = _operator_values(KernelKind.DS, alpha, norm_ds or default_ds, preset, grid)
    dc = _operator_values(KernelKind.DC, alpha, norm_dc or default_dc, preset, grid)
    caputo = _operator_values(KernelKind.C, alpha, 1.0, preset, grid)
    return [grid.nodes, ds, dc, caputo]


def run_compare(config: RunConfig) -> int:
    """Write ``t,ds,dc,caputo`` with the per-preset comparison normalizations."""
    columns = _compare_columns(config.presets[0], config.alpha, config.grid,
                               config.norm_ds, config.norm_dc)
    _write_csv(config.out, ["t", "ds", "dc", "caputo"], columns)
    return EXIT_OK


def run_laplace_check(config: RunConfig, stream=None) -> int:
    """Compare numerical transforms of DS/DC outputs with the closed forms."""
    stream = stream or sys.stdout
    grid = config.grid
    transforms = {KernelKind.DS: ds_transform, KernelKind.DC: dc_transform}
    for kind in config.ops:
        if kind not in transforms:
            raise FracOpsError(f"laplace-check supports ds and dc, not {kind.value.lower()}")

    # validate every (preset, s) pair before doing any work
    plan = []
    for preset in config.presets:
        growth = PRESET_GROWTH[preset]
        if config.s_values is None:
            s_values = (2.0, 5.0) if growth > 0.0 else (1.0, 2.0, 5.0)
        else:
            s_values = config.s_values
        for s in s_values:
            if growth > 0.0 and s - growth < 1.0:
                raise FracOpsError(
                    f"s = {s:g} is too small for preset {preset}: its operator output "
                    f"grows like exp({growth:g} t); use s >= {growth + 1.0:g}"
                )
            if (s - growth) * grid.t_max < 20.0:
                raise FracOpsError(
                    f"(s - {growth:g}) * T = {(s - growth) * grid.t_max:g} < 20 for "
                    f"preset {preset}; raise --tmax"
                )
        plan.append((preset, s_values))

    ok = True
    for preset, s_values in plan:
        f0 = PRESETS[preset].f0
        for kind in config.ops:
            norm = config.normalization_for(kind)
            signal = apply_operator(OperatorSpec(kind, config.alpha, norm),
                                    preset_function(preset), grid)
            for s in s_values:
                numeric = numerical_laplace(signal, s, growth=PRESET_GROWTH[preset])
                query = LaplaceQuery(s, preset_transform(preset, s), f0)
                exact = transforms[kind](config.alpha, norm, query)
                gap = relative_gap(numeric, exact)
                passed = gap <= LAPLACE_TOL
                ok &= passed
                print(
                    f"preset={preset} op={kind.value} s={s:g} numeric={_fmt(numeric)} "
                    f"closed={_fmt(exact)} rel_gap={gap:.3e} {'PASS' if passed else 'FAIL'}",
                    file=stream,
                )
    return EXIT_OK if ok else EXIT_FAIL


def _window_columns(dt):
    lo, hi = WINDOW_SPAN
    t = np.linspace(lo, hi, int(round((hi - lo) / dt)) + 1)
    return [t, KERNEL_AMPLITUDE * np.sin(2.0 * t), t ** (-8.0 / 9.0), t ** (-43.0 / 70.0)]


def _loop_columns(t_max, dt):
    curve = vi_curve(build_memristor(TimeGrid.from_span(t_max, dt)))
    return [curve[:, 0], curve[:, 1]]


def run_memristor(config: RunConfig, stream=None) -> int:
    """Emit the V-I loop and window curves, then report the linearization checks."""
    stream = stream or sys.stdout
    out_dir = Path(config.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "memristor_loop.csv", ["i", "v"], _loop_columns(config.t_max, config.dt))
    _write_csv(out_dir / "memristor_windows.csv", ["t", "red", "blue", "green"],
               _window_columns(config.dt))

    coarse, fine, order = linearization_order(config.t_max, config.dt)
    passed = fine <= LINEARIZATION_TOL
    print(f"eq8_max_error={fine:.6e}", file=stream)
    print(f"linearization_error_2dt={coarse:.6e}", file=stream)
    print(f"linearization_order={order:.4f}", file=stream)
    print(f"linearization_status={'PASS' if passed else 'FAIL'}", file=stream)
    for k, w in enumerate(STATED_WINDOWS, start=1):
        grid = TimeGrid.from_span(max(config.t_max, w.t_hi), config.dt)
        rep = caputo_window_check(w, grid)
        print(
            f"window{k} interval=[{w.t_lo:g},{w.t_hi:g}] exponent={w.exponent:.6f} "
            f"c0={w.c0:.6f} kernel_gap={rep.kernel_gap:.6e} voltage_gap={rep.voltage_gap:.6e} "
            f"fitted_c0={rep.fitted_c0:.6f} fitted_voltage_gap={rep.fitted_voltage_gap:.6e}",
            file=stream,
        )
    return EXIT_OK if passed else EXIT_FAIL


def figure_dir(out=None) -> Path:
    if out is not None:
        return Path(out)
    return Path(os.environ.get(FIG_DIR_ENV, "figures"))


def run_figures(out=None, *, t_max: float = 10.0, dt: float = 1e-3) -> list[Path]:
    """Write the 14-file figure manifest and return the written paths."""
    out_dir = figure_dir(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    alpha = DEFAULT_ALPHA
    grid = TimeGrid.from_span(t_max, dt)
    written = []

    for fig, preset in _SWEEP_PRESETS.items():
        for kind in (KernelKind.DS, KernelKind.DC):
            values = _operator_values(kind, alpha, 1.0 - alpha, preset, grid)
            path = out_dir / f"fig{fig}_{kind.value.lower()}.csv"
            _write_csv(path, ["t", "value"], [grid.nodes, values])
            written.append(path)

    for fig, presets in _COMPARE_PANELS.items():
        for preset in presets:
            path = out_dir / f"fig{fig}_{preset}.csv"
            _write_csv(path, ["t", "ds", "dc", "caputo"], _compare_columns(preset, alpha, grid))
            written.append(path)

    # whole number of steps covering at least one period
    loop_span = max(t_max, math.ceil(2.0 * math.pi / dt) * dt)
    path = out_dir / "fig7_loop.csv"
    _write_csv(path, ["i", "v"], _loop_columns(loop_span, dt))
    written.append(path)
    path = out_dir / "fig7_windows.csv"
    _write_csv(path, ["t", "red", "blue", "green"], _window_columns(dt))
    written.append(path)
    return written


def _s_list(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --s list {text!r}") from None
    if not values or any(not (v > 0.0) for v in values):
        raise argparse.ArgumentTypeError("--s needs positive comma-separated values")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, tmax=10.0, alpha=True, out="output CSV path (stdout when omitted)"):
        if alpha:
            p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                           help="fractional order (default 2/3)")
        p.add_argument("--tmax", type=float, default=tmax, help=f"end of the time grid (default {tmax:g})")
        p.add_argument("--dt", type=float, default=1e-3, help="grid step (default 1e-3)")
        if out:
            p.add_argument("--out", help=out)

    presets = sorted(PRESETS)
    p = sub.add_parser("eval", help="apply one operator to a preset, write t,value")
    common(p)
    p.add_argument("--op", choices=["c", "cf", "ab", "ds", "dc"], default="ds")
    p.add_argument("--norm", type=float, help="N(alpha) or B(alpha); default 1-alpha for ds/dc, 1 for cf/ab")
    p.add_argument("--preset", choices=presets, default="cube")

    p = sub.add_parser("compare", help="DS, DC and Caputo side by side, write t,ds,dc,caputo")
    common(p)
    p.add_argument("--preset", choices=presets, default="cube")
    p.add_argument("--norm-ds", type=float, help="override the preset's DS normalization")
    p.add_argument("--norm-dc", type=float, help="override the preset's DC normalization")

    p = sub.add_parser("laplace-check", help="numerical vs closed-form transforms of DS/DC")
    common(p, tmax=40.0, out=None)
    p.add_argument("--op", nargs="+", choices=["ds", "dc"], default=["ds", "dc"])
    p.add_argument("--norm", type=float, help="N(alpha); default 1-alpha")
    p.add_argument("--preset", nargs="+", choices=presets, default=["cube", "negcos", "sin", "exp"])
    p.add_argument("--s", type=_s_list, help="comma-separated s values (default 1,2,5; 2,5 for exp)")

    p = sub.add_parser("memristor", help="V-I loop, window curves and linearization report")
    # the linearization holds for alpha = 2/3 only
    common(p, alpha=False, out="directory for the two CSV files (default .)")

    p = sub.add_parser("figures", help=f"write the figure CSV manifest (dir: --out, ${FIG_DIR_ENV}, ./figures)")
    common(p, alpha=False, out="output directory")
    return parser


def _config_from_args(args) -> RunConfig:
    kw = dict(subcommand=args.subcommand, alpha=getattr(args, "alpha", DEFAULT_ALPHA),
              t_max=args.tmax, dt=args.dt, out=getattr(args, "out", None))
    if args.subcommand == "eval":
        kw.update(ops=(args.op,), norm=args.norm, presets=(args.preset,))
    elif args.subcommand == "compare":
        kw.update(ops=("DS", "DC", "C"), presets=(args.preset,),
                  norm_ds=args.norm_ds, norm_dc=args.norm_dc)
    elif args.subcommand == "laplace-check":
        kw.update(ops=tuple(args.op), norm=args.norm, presets=tuple(args.preset), s_values=args.s)
    return RunConfig(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "figures":
            if not (args.dt > 0.0 and args.tmax >= args.dt):
                raise FracOpsError("need 0 < dt <= tmax")
            for path in run_figures(args.out, t_max=args.tmax, dt=args.dt):
                print(path)
            return EXIT_OK
        config = _config_from_args(args)
        runner = {
            "eval": run_eval,
            "compare": run_compare,
            "laplace-check": run_laplace_check,
            "memristor": run_memristor,
        }[args.subcommand]
        return runner(config)
    except (FracOpsError, OSError) as exc:
        print(f"fracops: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
