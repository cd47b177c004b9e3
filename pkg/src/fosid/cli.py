"""Command-line front end: configure, simulate, identify, search, tabulate.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .config import ConfigError, ExperimentConfig, load_config
from .gl import Signal
from .identify import SingularSystem, build_equations, solve_coefficients
from .noise import RNG_ALGORITHM, ATTENUATION_ORDERS, attenuation_table, corrupt, uniform_noise
from .search import RankedCandidate, algorithm1, algorithm2
from .simulate import DegenerateDenominator, simulate_response, unit_step

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _header(command: str, cfg: ExperimentConfig) -> str:
    return (
        f"# fosid-{__version__} {command}"
        f" T={cfg.grid_t!r} L={cfg.grid_l!r}"
        f" seed={cfg.noise_seed} amplitude={cfg.noise_amplitude!r}"
        f" rng={RNG_ALGORITHM} created={_timestamp()}"
    )


def _write_csv(path: Path, command: str, cfg: ExperimentConfig, columns, rows) -> None:
    # repr() keeps full double precision, so the file re-parses to the exact
    # in-memory values.
    lines = [_header(command, cfg), ",".join(columns)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _synthetic_records(cfg: ExperimentConfig) -> tuple[Signal, Optional[Signal]]:
    """Clean response of the configured model, plus the corrupted record
    when the noise amplitude is positive."""
    grid = cfg.grid()
    clean = simulate_response(cfg.model(), unit_step(grid))
    if cfg.noise_amplitude > 0:
        noisy = corrupt(clean, uniform_noise(cfg.noise_spec(), grid))
        return clean, noisy
    return clean, None


def cmd_simulate(cfg: ExperimentConfig, args) -> int:
    cfg.validate()
    grid = cfg.grid()
    model = cfg.model()
    clean, noisy = _synthetic_records(cfg)
    times = grid.times()
    out = _out_dir(cfg)
    _write_csv(
        out / "response_clean.csv",
        "simulate",
        cfg,
        ("time", "value"),
        zip(times.tolist(), clean.values.tolist()),
    )
    if noisy is not None:
        _write_csv(
            out / "response_corrupted.csv",
            "simulate",
            cfg,
            ("time", "value"),
            zip(times.tolist(), noisy.values.tolist()),
        )
    dc = model.dc_gain()
    final = clean.values[-1]
    print(
        f"final sample c({grid.memory:g}) = {final:.6f}, dc gain 1/a3 = {dc:.6f}, "
        f"deviation {100 * abs(final - dc) / abs(dc):.2f}%"
    )
    return EXIT_OK


def cmd_identify(cfg: ExperimentConfig, args) -> int:
    cfg.validate()
    alpha, beta = args.alpha, args.beta
    clean, noisy = _synthetic_records(cfg)
    record = noisy if noisy is not None else clean
    system = build_equations(record, alpha, beta)
    print("equation system (rows x [a1 a2 a3] = rhs):")
    for i in range(3):
        row = "  ".join(f"{v: .4f}" for v in system.matrix[i])
        print(f"  [{row}]   {system.rhs[i]: .4f}")
    result = solve_coefficients(system, alpha, beta)
    model = result.model
    print(
        f"solution: a1 = {model.a1:.4f}, a2 = {model.a2:.4f}, a3 = {model.a3:.4f} "
        f"(residual {result.residual:.2e})"
    )
    true = cfg.model()
    for name, estimated, actual in (
        ("a1", model.a1, true.a1),
        ("a2", model.a2, true.a2),
        ("a3", model.a3, true.a3),
    ):
        print(f"  {name}: error {100 * abs(estimated - actual) / abs(actual):.4f}%")
    return EXIT_OK


def _model_rows(candidates: Sequence[RankedCandidate]):
    for rank, cand in enumerate(candidates, start=1):
        m = cand.model
        yield rank, m.alpha, m.beta, m.a1, m.a2, m.a3, cand.fitness


_MODEL_COLUMNS = ("rank", "alpha", "beta", "a1", "a2", "a3", "fitness")


def _print_top(candidates: Sequence[RankedCandidate], count: int = 10) -> None:
    print(f"{'rank':>4} {'alpha':>7} {'beta':>7} {'a1':>8} {'a2':>8} {'a3':>8} {'fitness':>12}")
    for rank, a, b, a1, a2, a3, fit in _model_rows(candidates[:count]):
        print(f"{rank:>4} {a:>7.4f} {b:>7.4f} {a1:>8.4f} {a2:>8.4f} {a3:>8.4f} {fit:>12.4f}")


def cmd_search(cfg: ExperimentConfig, args) -> int:
    cfg.validate()
    clean, noisy = _synthetic_records(cfg)
    record = noisy if noisy is not None else clean
    # fitness is measured against the actual (uncorrupted) response, which
    # is available here because the data is synthetic; this reproduces the
    # fitness scale of the reference experiments
    out = _out_dir(cfg)
    if cfg.search_algorithm == 1:
        ranked = algorithm1(
            cfg.power_range(),
            cfg.search_m,
            cfg.search_n,
            record,
            fitness_reference=clean,
            workers=args.workers,
        )
        _write_csv(
            out / "models_stage1.csv", "search", cfg, _MODEL_COLUMNS, _model_rows(ranked)
        )
        print(f"evaluated {len(ranked)} models; top {min(10, len(ranked))}:")
        _print_top(ranked)
        return EXIT_OK
    outcome = algorithm2(
        cfg.power_range(),
        cfg.schedule(),
        record,
        fitness_reference=clean,
        early_abandon=cfg.search_early_abandon,
        workers=args.workers,
    )
    total_nominal = total_unique = total_eval = 0
    for k, stage in enumerate(outcome.stages, start=1):
        _write_csv(
            out / f"models_stage{k}.csv",
            "search",
            cfg,
            _MODEL_COLUMNS,
            _model_rows(stage.candidates),
        )
        total_nominal += stage.nominal_count
        total_unique += stage.unique_count
        total_eval += stage.evaluations
        best = stage.buffer[0]
        print(
            f"stage {k}: grid {stage.nominal_count} (unique {stage.unique_count}), "
            f"evaluated {stage.evaluations}, best F = {best.fitness:.4f} at "
            f"(alpha, beta) = ({best.model.alpha:.4f}, {best.model.beta:.4f})"
        )
    print(f"totals: grid {total_nominal}, unique {total_unique}, evaluated {total_eval}")
    if cfg.search_early_abandon and total_unique:
        print(f"early-abandon savings factor: {total_unique / total_eval:.2f}x")
    best = outcome.best.model
    print(
        f"best model: alpha = {best.alpha:.4f}, beta = {best.beta:.4f}, "
        f"a1 = {best.a1:.4f}, a2 = {best.a2:.4f}, a3 = {best.a3:.4f}, "
        f"F = {outcome.best.fitness:.4f}"
    )
    return EXIT_OK


def cmd_noise_table(cfg: ExperimentConfig, args) -> int:
    cfg.validate()
    orders = ATTENUATION_ORDERS
    if args.orders:
        try:
            orders = tuple(float(v) for v in args.orders.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad --orders list: {exc}") from None
    seeds = [cfg.noise_seed + i for i in range(args.records)]
    table = attenuation_table(cfg.noise_amplitude, seeds, orders, cfg.grid())
    rows = [
        [seed] + [float(v) for v in table[i]] for i, seed in enumerate(seeds)
    ]
    out = _out_dir(cfg)
    _write_csv(
        out / "noise_table.csv",
        "noise-table",
        cfg,
        ("record_seed", *(repr(o) for o in orders)),
        rows,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fosid",
        description="Identify three-term fractional-order process parameters "
        "from sampled step-response data.",
    )
    parser.add_argument("-c", "--config", help="flat key = value configuration file")
    parser.add_argument(
        "-s",
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    parser.add_argument(
        "--profile",
        choices=("paper", "fast"),
        default="paper",
        help="paper: T=0.001 (default); fast: T=0.01 for quick runs",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="parallel evaluation threads for the search commands",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", help="write the step response (clean and corrupted)")

    p_ident = sub.add_parser("identify", help="identify coefficients at fixed powers")
    p_ident.add_argument("alpha", type=float)
    p_ident.add_argument("beta", type=float)

    sub.add_parser("search", help="search the fractional-power state space")

    p_table = sub.add_parser("noise-table", help="noise attenuation study CSV")
    p_table.add_argument(
        "--records", type=int, default=10, help="independent noise records (rows)"
    )
    p_table.add_argument(
        "--orders", default=None, help="comma-separated differintegration orders"
    )
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "identify": cmd_identify,
    "search": cmd_search,
    "noise-table": cmd_noise_table,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = list(args.overrides)
    if args.profile == "fast":
        overrides = ["grid.T=0.01"] + overrides
    try:
        cfg = load_config(args.config, overrides)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystem, DegenerateDenominator) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
