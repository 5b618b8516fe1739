"""
Command-line entry point.

    python main.py <command> --config run.json [--out DIR] [--seed S] [--format json|csv]

Exit codes: 0 success (or: is a frame / all checks pass), 1 negative finding,
2 config error, 3 dimension error, 4 numerical failure.
"""
import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

import config
import io_utils
import reporter
import scanner
from errors import EXIT_NEGATIVE, EXIT_NUMERICAL, EXIT_OK, ConfigError, TFLocError
from gabor import (WindowBundle, bundle_of, dual_windows, frame_bounds, frame_criteria_report, frame_operator,
                   gramian, janssen_representation, riesz_bounds, wexler_raz_check)
from lattice import adjoint_lattice
from locop import construct_multiwindow_frame, partition_check
from modnorm import (equivalence_estimate, localization_norm_fn, modulation_norm, multiwindow_coefficient_norm,
                     sampling_check)
from phase_space import Signal, Window, stft, stft_adjoint
from unified_logger import get_logger

logger = get_logger(__name__)


class Run:
    """Everything a command needs, built and validated before any computation."""

    def __init__(self, args: argparse.Namespace, needs_signals: bool = False):
        self.cfg = io_utils.load_run_config(args.config, seed=args.seed)
        self.out = Path(args.out)
        self.fmt = args.format
        self.window = io_utils.build_window(self.cfg)
        self.lattice = io_utils.build_lattice(self.cfg)
        self.symbol = io_utils.build_symbol(self.cfg, self.lattice)
        self.norm = io_utils.build_norm_spec(self.cfg)
        self.ensemble = io_utils.build_ensemble(self.cfg)
        self.signals = io_utils.build_signals(self.cfg)
        self.options = self.cfg.options
        if needs_signals and not self.signals:
            raise ConfigError("this command needs at least one entry in 'signals'")

    @property
    def bundle(self) -> WindowBundle:
        return bundle_of(self.window)


# --- COMMANDS ---

def cmd_stft(run: Run) -> int:
    rows = []
    tables = []
    for i, f in enumerate(run.signals):
        F = stft(run.window, f)
        # V* V = N ||phi||^2 I
        back = stft_adjoint(run.window, F).values / (f.n * run.window.norm2() ** 2)
        residual = float(np.linalg.norm(back - f.values))
        rows.append({"signal": i, "stft": io_utils.tfmatrix_to_dict(F), "adjoint_residual": residual})
        if run.options.get("csv_grid", False):
            tables.append(reporter.magnitude_grid(F.values).assign(signal=i))
    reporter.write_json({"n": run.cfg.n, "results": rows}, run.out / "stft.json")
    if tables:
        reporter.write_table(pd.concat(tables, ignore_index=True), run.out / "stft_magnitude", run.fmt)
    return EXIT_OK


def cmd_frame_check(run: Run) -> int:
    report = frame_bounds(frame_operator(run.bundle, run.lattice))
    criteria = frame_criteria_report(run.bundle, run.lattice)
    reporter.write_json({"frame": report, "criteria": criteria,
                         "lattice": io_utils.lattice_to_dict(run.lattice)}, run.out / "frame_check.json")
    return EXIT_OK if report.is_frame else EXIT_NEGATIVE


def cmd_construct(run: Run) -> int:
    result = construct_multiwindow_frame(run.symbol, run.window, run.lattice,
                                         strategy=run.options.get("strategy", "first"),
                                         target=run.options.get("target"))
    reporter.write_json({"construction": result, "lattice": io_utils.lattice_to_dict(run.lattice)},
                        run.out / "construct.json")
    reporter.write_json(io_utils.bundle_to_list(result.bundle), run.out / "windows.json")
    return EXIT_OK


def cmd_norms(run: Run) -> int:
    for i, f in enumerate(run.signals):
        if f.is_zero():
            raise ConfigError(f"signal {i} is zero; norm ratios are undefined for the zero signal")
    loc = localization_norm_fn(run.symbol, run.window, run.lattice, run.norm)
    rows = [{
        "signal": i,
        "l2": f.norm2(),
        "modulation_norm": modulation_norm(f, run.window, run.norm),
        "localization_norm": loc(f),
        "multiwindow_coefficient_norm": multiwindow_coefficient_norm(f, run.bundle, run.lattice, run.norm),
    } for i, f in enumerate(run.signals)]
    df = pd.DataFrame(rows)
    reporter.write_table(df, run.out / "norms_table", run.fmt)
    reporter.write_json({"norm": run.norm, "rows": rows}, run.out / "norms.json")
    return EXIT_OK


def cmd_sampling_check(run: Run) -> int:
    block = run.options.get("block")
    rows = []
    for i, f in enumerate(run.signals):
        report = sampling_check(stft(run.window, f), run.lattice, run.norm, block=block)
        rows.append({"signal": i, **report.to_dict()})
    passes = all(row["passes"] for row in rows)
    reporter.write_json({"sampling": rows, "norm": run.norm, "passes": passes,
                         "lattice": io_utils.lattice_to_dict(run.lattice)}, run.out / "sampling.json")
    return EXIT_OK if passes else EXIT_NEGATIVE


def _comparison(run: Run) -> Callable[[Signal], float]:
    compare = run.options.get("compare", "localization")
    if compare == "localization":
        return localization_norm_fn(run.symbol, run.window, run.lattice, run.norm)
    if compare == "coefficient":
        return lambda f: multiwindow_coefficient_norm(f, run.bundle, run.lattice, run.norm)
    if "window2" not in run.options:
        raise ConfigError("compare = 'window' needs options.window2")
    other = io_utils.build_window(run.cfg, run.options["window2"])
    return lambda f: modulation_norm(f, other, run.norm)


def cmd_equivalence(run: Run) -> int:
    norm_b = _comparison(run)
    report = equivalence_estimate(lambda f: modulation_norm(f, run.window, run.norm), norm_b,
                                  run.ensemble, seed=run.cfg.seed)
    reporter.write_json({"equivalence": report, "norm": run.norm,
                         "compare": run.options.get("compare", "localization")}, run.out / "equivalence.json")
    reporter.write_table(report.to_frame(), run.out / "ratios", run.fmt)
    return EXIT_OK


def cmd_duality(run: Run) -> int:
    bundle = run.bundle
    if run.options.get("dual", "canonical") == "zero":
        gamma = WindowBundle(tuple(Window(np.zeros(run.cfg.n)) for _ in bundle.windows))
    else:
        gamma = dual_windows(bundle, run.lattice)

    janssen = janssen_representation(bundle, gamma, run.lattice)
    scale = max(1.0, float(np.linalg.norm(janssen.operator)))
    janssen_ok = janssen.residual <= config.TOL_JANSSEN * scale
    wexler_raz = wexler_raz_check(bundle, gamma, run.lattice)

    frame = frame_bounds(frame_operator(bundle, run.lattice))
    riesz_low, riesz_high = riesz_bounds(gramian(bundle, adjoint_lattice(run.lattice)))
    riesz = riesz_low > config.TOL_FRAME_REL * riesz_high
    ron_shen = {"frame": frame.is_frame, "riesz_sequence": riesz, "agree": frame.is_frame == riesz,
                "A_riesz": riesz_low, "B_riesz": riesz_high}

    passes = janssen_ok and wexler_raz.passes and ron_shen["agree"]
    reporter.write_json({
        "janssen": {**janssen.to_dict(), "passes": janssen_ok},
        "wexler_raz": wexler_raz,
        "ron_shen": ron_shen,
        "passes": passes,
    }, run.out / "duality.json")
    return EXIT_OK if passes else EXIT_NEGATIVE


def cmd_partition_check(run: Run) -> int:
    report = partition_check(run.symbol, run.lattice)
    reporter.write_json({"partition": report, "lattice": io_utils.lattice_to_dict(run.lattice)},
                        run.out / "partition.json")
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_sweep(run: Run) -> int:
    df = scanner.construction_sweep(run.cfg.n, min_size=run.options.get("min_size"),
                                    strategy=run.options.get("strategy", "first"), window=run.window,
                                    target=run.options.get("target"))
    reporter.write_table(df, run.out / "sweep", run.fmt)
    return EXIT_OK if (df["status"] == "ok").all() else EXIT_NEGATIVE


COMMANDS: Dict[str, Callable[[Run], int]] = {
    "stft": cmd_stft,
    "frame-check": cmd_frame_check,
    "construct": cmd_construct,
    "norms": cmd_norms,
    "sampling-check": cmd_sampling_check,
    "equivalence": cmd_equivalence,
    "duality": cmd_duality,
    "partition-check": cmd_partition_check,
    "sweep": cmd_sweep,
}

NEEDS_SIGNALS = {"stft", "norms", "sampling-check"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="run config JSON")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="overrides ensemble.seed")
    common.add_argument("--format", choices=("json", "csv"), default="csv", help="tabular output format")

    parser = argparse.ArgumentParser(prog="tfloc", description="Finite time-frequency localization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and args.seed < 0:
        logger.error("--seed must be non-negative")
        return ConfigError.exit_code

    try:
        run = Run(args, needs_signals=args.command in NEEDS_SIGNALS)
        logger.info(f"--- {args.command.upper()} (N={run.cfg.n}, {run.lattice}) ---")
        code = COMMANDS[args.command](run)
    except TFLocError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        diagnostics = getattr(e, "diagnostics", None)
        if diagnostics:
            logger.error(f"Diagnostics: {reporter.dumps_json(diagnostics).strip()}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Critical error in {args.command}: {e}")
        return EXIT_NUMERICAL

    reporter.summarize(args.command, code, {"N": run.cfg.n, "lattice_size": run.lattice.size})
    return code


if __name__ == "__main__":
    sys.exit(main())
