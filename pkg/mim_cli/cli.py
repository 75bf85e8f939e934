"""``mim-al``: designs, fits, benchmarks, screening and theorem checks from the shell.

Exit codes: 0 success, 1 invalid input or configuration, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from mim_design.csv_io import read_design_csv, write_design_csv
from mim_design.factory import make_design
from mim_design.matrix import DesignGenerator, DesignMatrix
from mim_design.ofat import infer_ofat_blocks
from mim_gp.errors import (
    ActiveLearningError,
    ConfigError,
    DimensionMismatch,
    IterationError,
    NumericalError,
)
from mim_gp.kernels import KernelFamily, KernelSpec
from mim_gp.kriging import FitOptions, GPModel, fit
from mim_gp.model_io import load_model, save_model
from mim_screen.elementary import elementary_effects
from mim_screen.total_sobol import total_sobol
from mim_testfns.catalog import get_function
from mim_theory.corpus import CORPUS_ALPHAS, CORPUS_SEED, CORPUS_SIZE, build_corpus, theory_report
from mim_theory.limits import sandwich_check
from sim import __version__
from sim.config import ExperimentConfig, ExperimentKind, load_config_file
from sim.plot import plot_summary
from sim.replicate import run_emulation, run_optimization

logger = logging.getLogger("mim_cli")

Handler = Callable[[argparse.Namespace, Console], int]


class UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str) -> None:
        super().__init__(message)
        self.parser = parser


class CliParser(argparse.ArgumentParser):
    """Argument errors become exit code 1 instead of argparse's 2."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(self, message)


# ---- helpers ----------------------------------------------------------------------


def _out(args: argparse.Namespace, default: str) -> Path:
    return Path(args.out) if args.out else Path(default)


def _seed(args: argparse.Namespace, default: int = 0) -> int:
    return default if args.seed is None else int(args.seed)


def _read_outputs(path: Path, n: int) -> np.ndarray:
    if not path.is_file():
        raise ConfigError(f"outputs file not found: {path}")
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    column = "y" if "y" in frame.columns else frame.columns[-1]
    y = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=float)
    if y.size != n:
        raise DimensionMismatch(f"{path}: {y.size} outputs for {n} design rows")
    if not np.all(np.isfinite(y)):
        raise ConfigError(f"{path}: outputs must be finite numbers")
    return y


def _design_and_outputs(args: argparse.Namespace) -> tuple[DesignMatrix, np.ndarray]:
    if not args.design:
        raise ConfigError("--design is required")
    design_path = Path(args.design)
    if not design_path.is_file():
        raise ConfigError(f"design file not found: {design_path}")
    D = read_design_csv(design_path)
    if args.function:
        fn = get_function(args.function)
        if fn.d_total != D.d:
            raise DimensionMismatch(f"{fn.name} takes {fn.d_total} inputs, design has {D.d}")
        return D, np.asarray(fn(D.points), dtype=float)
    if not args.outputs:
        raise ConfigError("give --outputs <csv> or --function <name> for the design's outputs")
    return D, _read_outputs(Path(args.outputs), D.n)


def _cell(value: object) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return f"{value:.4g}" if isinstance(value, float) else str(value)


def _spec_table(spec: KernelSpec, model: GPModel) -> Table:
    table = Table(title=f"{spec.family.value} kernel, n={model.n}, d={model.d}")
    table.add_column("parameter")
    table.add_column("value", justify="right")
    for k, theta in enumerate(spec.theta):
        table.add_row(f"theta{k + 1}", f"{theta:.6g}")
    if spec.family.uses_alpha:
        table.add_row("alpha", f"{spec.alpha:.6g}")
    table.add_row("mu", f"{model.mu:.6g}")
    table.add_row("sigma2", f"{model.sigma2:.6g}")
    table.add_row("nll", f"{model.nll:.6g}")
    return table


# ---- subcommands ------------------------------------------------------------------


def cmd_design(args: argparse.Namespace, console: Console) -> int:
    generator = DesignGenerator(args.generator)
    size = args.l if generator.ofat_family else args.n
    D = make_design(generator, args.d, size, _seed(args), args.iters)
    path = write_design_csv(D, _out(args, "design.csv"))
    console.print(f"✅ wrote {path} ({D.n} rows, {generator.value})")
    return 0


def cmd_fit(args: argparse.Namespace, console: Console) -> int:
    D, y = _design_and_outputs(args)
    options = FitOptions(seed=_seed(args), restarts=args.restarts)
    model = fit(D, y, KernelFamily.parse(args.kernel), options)
    path = save_model(model, _out(args, "model.txt"))
    console.print(_spec_table(model.spec, model))
    console.print(f"✅ wrote {path}")
    return 0


def _experiment(args: argparse.Namespace, kind: ExperimentKind) -> ExperimentConfig:
    if not args.function:
        raise ConfigError("--function is required")
    data: dict[str, object] = {
        "kind": kind,
        "function": args.function,
        "conditions": args.condition or (),
        "budget": args.budget,
        "n_test": args.n_test,
        "master_seed": _seed(args),
        "n_seeds": args.n_seeds,
        "design_iters": args.design_iters,
        "baseline": not args.no_baseline,
        "timestamps": not args.no_timestamp,
        "jobs": args.jobs,
        "out": _out(args, "results"),
    }
    return ExperimentConfig(**data)


def _print_summary(console: Console, summary: pd.DataFrame) -> None:
    table = Table(title="final metric by condition")
    for name in ("condition", "kind", "n", "metric", "mean", "stderr", "seeds", "failed"):
        table.add_column(name, justify="left" if name in ("condition", "kind") else "right")
    for _, group in summary.groupby(["condition", "kind"], sort=False):
        row = group.iloc[-1]
        table.add_row(
            str(row["condition"]),
            str(row["kind"]),
            str(int(row["n"])),
            str(row["metric"]),
            f"{row['mean']:.4g}",
            f"{row['stderr']:.2g}",
            str(int(row["seeds"])),
            str(int(row["failed"])),
        )
    console.print(table)


def cmd_emulate(args: argparse.Namespace, console: Console) -> int:
    result = run_emulation(_experiment(args, ExperimentKind.EMULATE))
    _print_summary(console, result.summary)
    console.print(f"✅ wrote {result.summary_path} and {len(result.runlog_paths)} run logs")
    return 0


def cmd_optimize(args: argparse.Namespace, console: Console) -> int:
    result = run_optimization(_experiment(args, ExperimentKind.OPTIMIZE))
    _print_summary(console, result.summary)
    console.print(f"✅ wrote {result.summary_path} and {len(result.runlog_paths)} run logs")
    return 0


def cmd_screen(args: argparse.Namespace, console: Console) -> int:
    seed = _seed(args)
    if args.model:
        model = load_model(args.model)
        blocks = infer_ofat_blocks(model.design)
        D = DesignMatrix(points=model.design, blocks=blocks or ())
        y = model.y
    else:
        D, y = _design_and_outputs(args)
        model = fit(D, y, KernelFamily.parse(args.kernel), FitOptions(seed=seed))
    report = total_sobol(model, D.d, args.n_samples, seed)
    effects = elementary_effects(D, y) if D.blocks else None
    frame = pd.DataFrame(
        {
            "factor": [f"x{k + 1}" for k in range(D.d)],
            "total_index": report.total_indices,
            "mu_star": effects.mu_star if effects else [None] * D.d,
            "sigma": effects.sigma if effects else [None] * D.d,
        }
    )
    path = _out(args, "screen.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")

    table = Table(title=f"total Sobol' indices (N={report.n_samples}, seed={report.seed})")
    for name in frame.columns:
        table.add_column(name, justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*(_cell(v) for v in row))
    console.print(table)
    console.print(f"✅ wrote {path}")
    return 0


def cmd_check_theory(args: argparse.Namespace, console: Console) -> int:
    alphas = tuple(float(a) for a in args.alphas.split(",") if a.strip())
    instances = build_corpus(_seed(args, CORPUS_SEED), args.size)
    frame = theory_report(instances, alphas, tol=args.tol)
    path = _out(args, "theory.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")

    sandwich_ok = 0
    for inst in instances:
        for family in (KernelFamily.MIM, KernelFamily.GAUSSIAN):
            spec = KernelSpec.isotropic(family, inst.d, 0.5, 1.0)
            sandwich_ok += int(sandwich_check(spec, inst.design, inst.x).holds())
    final = frame[frame["pass"].notna()]
    passed = int(final["pass"].astype(bool).sum())
    table = Table(title="small-theta limit checks")
    table.add_column("check")
    table.add_column("passed", justify="right")
    table.add_column("worst rel. error", justify="right")
    for theorem, group in final.groupby("theorem", sort=False):
        table.add_row(
            str(theorem),
            f"{int(group['pass'].astype(bool).sum())}/{len(group)}",
            f"{group['rel_err'].max():.2e}",
        )
    table.add_row("sandwich", f"{sandwich_ok}/{2 * len(instances)}", "")
    console.print(table)
    console.print(f"✅ wrote {path}")
    return 0 if passed == len(final) and sandwich_ok == 2 * len(instances) else 2


def cmd_plot(args: argparse.Namespace, console: Console) -> int:
    if not args.summary:
        raise ConfigError("--summary is required")
    for path in plot_summary(args.summary, _out(args, ".")):
        console.print(f"✅ wrote {path}")
    return 0


# ---- parser -----------------------------------------------------------------------


def _common(top_level: bool) -> argparse.ArgumentParser:
    """Options accepted before or after the subcommand.

    Subcommand copies default to SUPPRESS so a value given before the subcommand survives.
    """

    common = CliParser(add_help=False)

    def default(value: object) -> object:
        return value if top_level else argparse.SUPPRESS

    common.add_argument("--seed", type=int, default=default(None), help="master / generator seed")
    common.add_argument("--out", default=default(None), help="output file or directory")
    common.add_argument("--config", default=default(None), help="key=value config file")
    common.add_argument(
        "--no-timestamp", action="store_true", default=default(False), help="omit run timestamps"
    )
    common.add_argument(
        "--verbose", action="store_true", default=default(False), help="debug logging"
    )
    return common


def _data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--design", default=None, help="design CSV (x1..xd)")
    p.add_argument("--outputs", default=None, help="CSV with a y column aligned to the design")
    p.add_argument("--function", default=None, help="catalog function to evaluate instead")
    p.add_argument("--kernel", default="mim", help="gaussian | im | mim | exp")


def _benchmark_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--function", default=None, help="catalog function, e.g. levy6_aug10")
    p.add_argument(
        "--condition",
        nargs="+",
        default=None,
        help="<generator>[:<size>[d]]+<kernel>, e.g. mofat:4+mim maxpro:10d+gaussian",
    )
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--n-test", type=int, default=1000)
    p.add_argument("--n-seeds", type=int, default=10)
    p.add_argument("--design-iters", type=int, default=None)
    p.add_argument("--no-baseline", action="store_true", help="skip MaxPro batch baselines")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> tuple[CliParser, dict[str, argparse.ArgumentParser]]:
    parser = CliParser(
        prog="mim-al", description=__doc__.splitlines()[0], parents=[_common(top_level=True)]
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common(top_level=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    commands: dict[str, argparse.ArgumentParser] = {}

    def add(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        commands[name] = p
        return p

    p = add("design", cmd_design, "generate an initial design CSV")
    generators = [g.value for g in DesignGenerator if g is not DesignGenerator.IMPORTED]
    p.add_argument("--generator", default="mofat", choices=generators)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--l", type=int, default=None, help="blocks for mofat/ofat")
    p.add_argument("--n", type=int, default=None, help="runs for the other generators")
    p.add_argument("--iters", type=int, default=None)

    p = add("fit", cmd_fit, "fit a GP surrogate and save it")
    _data_args(p)
    p.add_argument("--restarts", type=int, default=5)

    _benchmark_args(add("emulate", cmd_emulate, "ALM emulation benchmark"))
    _benchmark_args(add("optimize", cmd_optimize, "EI optimization benchmark"))

    p = add("screen", cmd_screen, "total Sobol' indices and elementary effects")
    _data_args(p)
    p.add_argument("--model", default=None, help="saved model file instead of design+outputs")
    p.add_argument("--n-samples", type=int, default=8192)

    p = add("check-theory", cmd_check_theory, "small-theta limit checks on the seeded corpus")
    p.add_argument("--alphas", default=",".join(str(a) for a in CORPUS_ALPHAS))
    p.add_argument("--size", type=int, default=CORPUS_SIZE)
    p.add_argument("--tol", type=float, default=0.01)

    p = add("plot", cmd_plot, "SVG curves from a summary CSV")
    p.add_argument("--summary", default=None)
    return parser, commands


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def apply_config(
    parser: argparse.ArgumentParser,
    values: dict[str, str],
    root: argparse.ArgumentParser | None = None,
) -> None:
    """Install config-file values as parser defaults so explicit flags still win.

    Options shared with ``root`` get their defaults there, so a flag given before the
    subcommand also beats the file.
    """

    actions = {a.dest: a for a in parser._actions if a.dest not in ("help", "config")}
    defaults: dict[str, object] = {}
    shared: dict[str, object] = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None:
            raise ConfigError(f"unknown config key {key!r}")
        if action.nargs == 0:
            lowered = raw.strip().lower()
            if lowered not in _TRUE | _FALSE:
                raise ConfigError(f"config key {key!r} expects true/false, got {raw!r}")
            value: object = lowered in _TRUE
        elif action.nargs in ("+", "*"):
            value = [part.strip() for part in raw.split(",") if part.strip()]
        else:
            value = raw
        if root is not None and action.default is argparse.SUPPRESS:
            shared[key] = value
        else:
            defaults[key] = value
    parser.set_defaults(**defaults)
    if shared and root is not None:
        root.set_defaults(**shared)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, commands = build_parser()
    console = Console()
    try:
        args = parser.parse_args(argv)
        if args.config:
            apply_config(commands[args.command], load_config_file(args.config), parser)
            args = parser.parse_args(argv)
        _configure_logging(args.verbose)
        logger.debug("mim-al %s: %s", __version__, args.command)
        if args.command == "design" and args.d is None:
            raise ConfigError("--d is required")
        return args.handler(args, console)
    except UsageError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"{exc.parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, IterationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ActiveLearningError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
