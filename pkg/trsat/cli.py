"""Command-line entry point: ``trsat [global options] <command> [options]``.

Commands: ``gen``, ``train``, ``solve``, ``eval``, ``bench``, ``oracle``. A ``--config``
file (``key = value`` per line) supplies option defaults; flags on the command line
win. Failures print one ``error code=<n> kind=<Exception> message="..."`` line on
stderr and exit with the code below.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import TYPE_CHECKING, Final, NoReturn

from trsat import __version__
from trsat.apps.generate import (
    GENERATOR_KINDS,
    generate_circuit,
    generate_graph_problem,
    generate_rand3,
    parse_constraint,
    read_netlist,
)
from trsat.apps.learning import evaluate_datasets, train_model
from trsat.apps.manifest import RunManifest
from trsat.apps.solving import (
    DEFAULT_REPEATS,
    SOLVE_MODES,
    benchmark,
    load_model,
    oracle_report,
    solve_formula_file,
)
from trsat.core.config import set_verbose
from trsat.core.executor import ExternalSolver
from trsat.core.settings import read_settings
from trsat.exceptions import (
    ConfigurationError,
    DimacsError,
    GeneratorError,
    ModelConfigError,
    NetlistError,
    OracleCapError,
    SolverExecutionError,
    SolverNotFoundError,
    TrsatError,
)
from trsat.nn.model import ModelConfig
from trsat.solve.solver import DEFAULT_MAX_ITERS, format_report
from trsat.solve.walksat import WalkSatConfig
from trsat.training.trainer import TrainConfig

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

logger = logging.getLogger(__name__)

EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2
EXIT_MISSING_FILE: Final = 3
EXIT_ORACLE_CAP: Final = 4
EXIT_PARSE: Final = 5
EXIT_EXTERNAL_SOLVER: Final = 6


class UsageError(TrsatError):
    """Raised for unknown flags, missing required options or bad option values."""

    pass


_EXIT_CODES: Final[tuple[tuple[type[BaseException], int], ...]] = (
    (UsageError, EXIT_USAGE),
    (ConfigurationError, EXIT_USAGE),
    (ModelConfigError, EXIT_USAGE),
    (FileNotFoundError, EXIT_MISSING_FILE),
    (OracleCapError, EXIT_ORACLE_CAP),
    (DimacsError, EXIT_PARSE),
    (NetlistError, EXIT_PARSE),
    (GeneratorError, EXIT_USAGE),
    (SolverNotFoundError, EXIT_EXTERNAL_SOLVER),
    (SolverExecutionError, EXIT_EXTERNAL_SOLVER),
)

_GLOBAL_DESTS: Final = frozenset({"verbose", "manifest"})
_LIST_DESTS: Final = frozenset({("eval", "data"), ("gen", "constraint")})


def exit_code_for(exc: BaseException) -> int:
    for kind, code in _EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return EXIT_FAILURE


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _add_model_options(p: argparse.ArgumentParser) -> None:
    defaults = ModelConfig()
    group = p.add_argument_group("model")
    group.add_argument("--encoder-layers", type=int, default=defaults.num_encoder_layers)
    group.add_argument("--decoder-layers", type=int, default=defaults.num_decoder_layers)
    group.add_argument("--channels", type=int, default=defaults.channels)
    group.add_argument("--heads", type=int, default=defaults.heads)
    group.add_argument("--ffn-hidden", type=int, default=defaults.ffn_hidden)
    group.add_argument("--tau", type=float, default=defaults.tau)
    group.add_argument("--epsilon", type=float, default=defaults.epsilon_threshold)
    group.add_argument("--init-seed", type=int, default=defaults.init_seed)
    group.add_argument("--noise-scale", type=float, default=defaults.noise_scale)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """Top-level parser plus the parser of each subcommand."""
    parser = _ArgumentParser(prog="trsat", description="Transformer-based MaxSAT/SAT toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--config", type=Path, help="key = value file of option defaults")
    parser.add_argument("--manifest", type=Path, help="Run manifest path")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    commands: dict[str, argparse.ArgumentParser] = {}

    gen = sub.add_parser("gen", help="Generate DIMACS instances")
    gen.add_argument("kind", choices=GENERATOR_KINDS)
    gen.add_argument("--out", type=Path, help="Output directory")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--vars", type=int, help="rand3: variables")
    gen.add_argument("--clauses", type=int, help="rand3: clauses")
    gen.add_argument("--vertices", type=int, help="Graph problems: vertex count N")
    gen.add_argument("--edge-prob", type=float, help="Graph problems: edge probability")
    gen.add_argument("--k", type=int, help="Graph problems: colors / cover size / clique size")
    gen.add_argument("--netlist", type=Path, help="circuit: netlist file")
    gen.add_argument("--constraint", action="append", help="circuit: wire=0|1 (repeatable)")
    gen.add_argument("--adder-bits", type=int, help="circuit: ripple-carry adder width")
    gen.add_argument("--sum", type=int, help="circuit: required adder output")
    commands["gen"] = gen

    train = sub.add_parser("train", help="Train a model on a DIMACS directory")
    train.add_argument("--data", type=Path, help="Directory of .cnf files")
    train.add_argument("--out", type=Path, help="Checkpoint path")
    train.add_argument("--history", type=Path, help="CSV history path")
    tdefaults = TrainConfig()
    train.add_argument("--epochs", type=int, default=tdefaults.epochs)
    train.add_argument("--warmup", type=int, default=tdefaults.warmup_steps)
    train.add_argument("--lr-factor", type=float, default=tdefaults.lr_factor)
    train.add_argument("--shuffle-seed", type=int, default=tdefaults.shuffle_seed)
    train.add_argument("--instance-seed", type=int, default=tdefaults.instance_seed_base)
    train.add_argument(
        "--validation-fraction", type=float, default=tdefaults.validation_fraction
    )
    train.add_argument("--checkpoint-every", type=int, default=tdefaults.checkpoint_every)
    train.add_argument("--checkpoint-dir", type=Path)
    _add_model_options(train)
    commands["train"] = train

    solve = sub.add_parser("solve", help="Solve one DIMACS file with a trained model")
    solve.add_argument("--model", type=Path, help="Checkpoint path")
    solve.add_argument("--cnf", type=Path, help="DIMACS file")
    solve.add_argument("--mode", choices=SOLVE_MODES, default="maxsat")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    solve.add_argument("--report", type=Path, help="Also write the report here")
    commands["solve"] = solve

    evaluate = sub.add_parser("eval", help="Mean completion rate per dataset directory")
    evaluate.add_argument("--model", type=Path, help="Checkpoint path")
    evaluate.add_argument("--data", type=Path, nargs="+", help="Dataset directories")
    evaluate.add_argument("--seed", type=int, default=0)
    evaluate.add_argument("--workers", type=int, default=1)
    commands["eval"] = evaluate

    bench = sub.add_parser("bench", help="Median timings against WalkSAT")
    bench.add_argument("--model", type=Path, help="Checkpoint path")
    bench.add_argument("--data", type=Path, help="Directory of .cnf files")
    bench.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    wdefaults = WalkSatConfig()
    bench.add_argument("--max-flips", type=int, default=wdefaults.max_flips)
    bench.add_argument("--noise", type=float, default=wdefaults.noise_p)
    bench.add_argument("--restarts", type=int, default=wdefaults.restarts)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--external", action="store_true", help="Also time an external solver")
    bench.add_argument("--solver", type=Path, help="External solver binary")
    commands["bench"] = bench

    oracle = sub.add_parser("oracle", help="Brute-force MaxSAT optimum of a small formula")
    oracle.add_argument("--cnf", type=Path, help="DIMACS file")
    oracle.add_argument("--cap", type=int, help="Variable cap")
    oracle.add_argument("--workers", type=int, default=1)
    commands["oracle"] = oracle

    return parser, commands


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"Setting {key} expects a boolean, got {raw!r}")


def _apply_config_file(
    parser: argparse.ArgumentParser,
    commands: dict[str, argparse.ArgumentParser],
    argv: Sequence[str] | None,
    args: argparse.Namespace,
) -> argparse.Namespace:
    """Re-parse with settings-file values installed as option defaults."""
    settings = read_settings(args.config)
    known = vars(args)
    command_defaults: dict[str, object] = {}
    global_defaults: dict[str, object] = {}
    for key, raw in settings.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "command"):
            raise ConfigurationError(f"Unknown setting {key!r} for '{args.command}'")
        value: object = raw
        if isinstance(known[dest], bool):
            value = _parse_bool(key, raw)
        elif (args.command, dest) in _LIST_DESTS:
            value = raw.split()
        (global_defaults if dest in _GLOBAL_DESTS else command_defaults)[dest] = value
    parser.set_defaults(**global_defaults)
    commands[args.command].set_defaults(**command_defaults)
    logger.debug(f"Applied {len(settings)} settings from {args.config}")
    return parser.parse_args(argv)


def _require(args: argparse.Namespace, dest: str) -> None:
    if getattr(args, dest) is None:
        raise UsageError(f"'{args.command}' needs --{dest.replace('_', '-')}")


def _existing(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"No such file or directory: {path}")
    return path


def _cmd_gen(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "out")
    out: Path = args.out
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    if args.kind == "rand3":
        _require(args, "vars")
        _require(args, "clauses")
        paths = generate_rand3(out, args.vars, args.clauses, args.count, args.seed)
    elif args.kind == "circuit":
        netlist = None
        if args.netlist is not None:
            netlist = read_netlist(_existing(args.netlist))
            manifest.add_input(args.netlist)
        constraints = [parse_constraint(c) for c in args.constraint or []]
        paths = generate_circuit(out, netlist, constraints, args.adder_bits, args.sum)
    else:
        for dest in ("vertices", "edge_prob", "k"):
            _require(args, dest)
        paths = generate_graph_problem(
            args.kind, out, args.vertices, args.edge_prob, args.k, args.count, args.seed
        )
    for path in paths:
        manifest.add_output(path)
        print(path)


def _cmd_train(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "data")
    _require(args, "out")
    train_cfg = TrainConfig(
        epochs=args.epochs,
        warmup_steps=args.warmup,
        shuffle_seed=args.shuffle_seed,
        checkpoint_every=args.checkpoint_every,
        checkpoint_dir=args.checkpoint_dir,
        validation_fraction=args.validation_fraction,
        lr_factor=args.lr_factor,
        instance_seed_base=args.instance_seed,
    )
    model_cfg = ModelConfig(
        num_encoder_layers=args.encoder_layers,
        num_decoder_layers=args.decoder_layers,
        channels=args.channels,
        heads=args.heads,
        ffn_hidden=args.ffn_hidden,
        tau=args.tau,
        epsilon_threshold=args.epsilon,
        init_seed=args.init_seed,
        noise_scale=args.noise_scale,
    )
    data_dir = _existing(args.data)
    for path in sorted(data_dir.glob("*.cnf")):
        manifest.add_input(path)
    _, history = train_model(data_dir, args.out, train_cfg, model_cfg, args.history)
    manifest.add_output(args.out)
    if args.history is not None:
        manifest.add_output(args.history)
    last = history.records[-1]
    val = "-" if last.val_rate is None else f"{last.val_rate:.4f}"
    print(f"epochs {len(history)} loss {last.loss:.6f} train_rate {last.train_rate:.4f} val_rate {val}")


def _cmd_solve(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "model")
    _require(args, "cnf")
    model = load_model(_existing(args.model))
    cnf = _existing(args.cnf)
    manifest.add_input(args.model)
    manifest.add_input(cnf)
    result = solve_formula_file(model, cnf, args.mode, args.seed, args.max_iters)
    report = format_report(result)
    if args.report is not None:
        args.report.write_text(report, encoding="utf-8")
        manifest.add_output(args.report)
    sys.stdout.write(report)


def _cmd_eval(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "model")
    _require(args, "data")
    model_path = _existing(args.model)
    dirs = [_existing(Path(d)) for d in args.data]
    manifest.add_input(model_path)
    for d in dirs:
        manifest.inputs.append(str(d))
    for line in evaluate_datasets(model_path, dirs, seed=args.seed, workers=args.workers):
        print(line)


def _cmd_bench(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "model")
    _require(args, "data")
    model = load_model(_existing(args.model))
    manifest.add_input(args.model)
    data_dir = _existing(args.data)
    manifest.inputs.append(str(data_dir))
    walk_cfg = WalkSatConfig(
        max_flips=args.max_flips, noise_p=args.noise, restarts=args.restarts, seed=args.seed
    )
    external = ExternalSolver(args.solver) if args.external or args.solver else None
    rows = benchmark(model, data_dir, args.repeats, walk_cfg, external, seed=args.seed)
    for row in rows:
        print(row.format_line())
        manifest.timings[f"{row.name}.trsat"] = row.trsat_seconds
        manifest.timings[f"{row.name}.walksat"] = row.walksat_seconds
        if row.external_seconds is not None:
            manifest.timings[f"{row.name}.external"] = row.external_seconds


def _cmd_oracle(args: argparse.Namespace, manifest: RunManifest) -> None:
    _require(args, "cnf")
    cnf = _existing(args.cnf)
    manifest.add_input(cnf)
    sys.stdout.write(oracle_report(cnf, cap=args.cap, workers=args.workers))


_COMMANDS: Final[dict[str, Callable[[argparse.Namespace, RunManifest], None]]] = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "solve": _cmd_solve,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "oracle": _cmd_oracle,
}


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if verbose:
        set_verbose(True)


def _snapshot(args: argparse.Namespace) -> dict[str, object]:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())}


def run(argv: Sequence[str] | None = None) -> int:
    """Run one CLI command and return its exit code."""
    parser, commands = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config is not None:
            _existing(args.config)
            args = _apply_config_file(parser, commands, argv, args)
        _configure_logging(args.verbose)

        manifest = RunManifest(command=args.command, config=_snapshot(args))
        manifest.seeds = {k: v for k, v in vars(args).items() if k.endswith("seed") and v is not None}
        if args.config is not None:
            manifest.add_input(args.config)

        start = time.perf_counter()
        _COMMANDS[args.command](args, manifest)
        manifest.timings["wall_seconds"] = time.perf_counter() - start
        manifest.write(args.manifest or Path(f"trsat-{args.command}.manifest.json"))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    except (TrsatError, OSError) as e:
        code = exit_code_for(e)
        logger.debug("Command failed", exc_info=True)
        print(
            f"error code={code} kind={type(e).__name__} message={json.dumps(str(e))}",
            file=sys.stderr,
        )
        return code
    return EXIT_OK


def main() -> None:
    sys.exit(run())
