"""Command-line interface: ``dhc <subcommand> ...``."""
import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .data import PRESETS, HashingFeaturizer, get_preset, read_dataset, write_preset
from .engine import EvaluationManager, load_checkpoint, run_ablation, run_gradcheck, train
from .hierarchy import read_taxonomy
from .models.config import DecoderType, TrainConfig
from .utils.config import describe_defaults
from .utils.errors import ConfigurationError, DHCError, NumericError
from .utils.logging import set_log_level, setup_logging

logger = setup_logging(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors surface as :class:`ConfigurationError` (exit code 1)."""

    def error(self, message: str):
        raise ConfigurationError(f"{self.prog}: {message}")


def _seeds(value: str) -> List[int]:
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="dhc",
        description="Deep hierarchical text classification over a category tree.",
        epilog=f"Configuration keys and defaults:\n{describe_defaults()}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    decoders = [d.value for d in DecoderType]

    p = commands.add_parser("train", help="Train a model from a config file")
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--seed", type=int, default=None, help="Override the training seed")
    p.add_argument("--beta0", action="store_true", help="Force beta = 0 (representation sharing only)")
    p.add_argument("--independent-rep", action="store_true",
                   help="Force independent per-layer representations (hierarchical loss only)")

    p = commands.add_parser("eval", help="Evaluate a checkpoint on a labeled dataset")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--decoder", choices=decoders, default=None)
    p.add_argument("--beam-width", type=int, default=None)
    p.add_argument("--report", default=None, help="Write the evaluation report as JSON")

    p = commands.add_parser("predict", help="Classify documents read from stdin, one per line")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--decoder", choices=decoders, default=None)
    p.add_argument("--beam-width", type=int, default=None)

    p = commands.add_parser("gen-data", help="Write a synthetic dataset preset")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None)

    p = commands.add_parser("gradcheck", help="Finite-difference check of the analytic gradients")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)

    p = commands.add_parser("ablate", help="Compare the full model with its ablated variants")
    p.add_argument("--config", required=True)
    p.add_argument("--seeds", type=_seeds, default=[1, 2, 3, 4, 5])
    p.add_argument("--out", default=None, help="Write the ablation report as JSON")
    return parser


def _load_config(path: str, log_level: Optional[str]) -> TrainConfig:
    config = TrainConfig.from_file(path)
    set_log_level(log_level or config.log_level)
    return config


def _write_json(path: str, payload: str) -> None:
    try:
        Path(path).write_text(payload + "\n", encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Writing {path} failed: {str(e)}")


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args.log_level).with_overrides(
        seed=args.seed, beta_zero=args.beta0, independent=args.independent_rep
    )
    checkpoint, log = train(config)
    if log.records:
        print(log.records[-1].model_dump_json())
    if not config.checkpoint:
        logger.warning("No checkpoint path configured; the trained model was not saved")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    tree = read_taxonomy(args.taxonomy)
    checkpoint = load_checkpoint(args.checkpoint, tree)
    featurizer = HashingFeaturizer.from_config(checkpoint.config.featurizer)
    dataset = read_dataset(args.data, tree, featurizer)
    manager = EvaluationManager(checkpoint)
    report = asyncio.run(manager.evaluate(dataset, args.decoder, args.beam_width))
    print(report.model_dump_json(indent=2))
    if args.report:
        _write_json(args.report, report.model_dump_json(indent=2))
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    texts = sys.stdin.read().splitlines()
    lines = asyncio.run(EvaluationManager(checkpoint).predict_lines(texts, args.decoder, args.beam_width))
    for line in lines:
        sys.stdout.write(line + "\n")
    return 0


def cmd_gen_data(args: argparse.Namespace) -> int:
    files = write_preset(get_preset(args.preset), args.out_dir, args.seed)
    for role, path in files.items():
        print(f"{role}\t{path}")
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    report = run_gradcheck(seed=args.seed, trials=args.trials)
    print(f"max relative error: {report.max_relative_error:.3e} ({report.worst_parameter})")
    if not report.passed:
        raise NumericError(
            f"Gradient check failed: {report.max_relative_error:.3e} >= {report.tolerance:.0e}"
        )
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args.log_level)
    report = run_ablation(config, args.seeds)
    for variant in report.variants:
        print(f"{variant.name}\t{variant.mean_leaf_accuracy:.4f}")
    if args.out:
        _write_json(args.out, report.model_dump_json(indent=2))
    return 0


COMMANDS = {
    "train": cmd_train,
    "eval": cmd_eval,
    "predict": cmd_predict,
    "gen-data": cmd_gen_data,
    "gradcheck": cmd_gradcheck,
    "ablate": cmd_ablate,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and map failures to exit codes.

    Returns:
        int: 0 on success, 1 usage/config error, 2 data error, 3 numeric failure
    """
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            set_log_level(args.log_level)
        return COMMANDS[args.command](args)
    except DHCError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        return e.exit_code
