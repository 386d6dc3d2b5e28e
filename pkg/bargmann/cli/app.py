"""
Command-line entry point: propagate, transform-demo and caustic-scan subcommands.
"""
import argparse
import json
import sys
from typing import List, Optional

from colorama import Fore, Style, init

from bargmann.config.config_validator import ScenarioConfig
from bargmann.config.env_manager import ScenarioEnvironment, available_scenarios
from bargmann.core.errors import ConfigError
from bargmann.core.states import Label
from bargmann.propagators.values import Status
from bargmann.utils.emoji_logger import EmojiLogger

from .runner import caustic_scan, run_scenario, transform_demo, write_table

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ALL_FAILED = 2


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", default=None,
                        help=f"packaged scenario ({', '.join(available_scenarios())}) or path")
    parser.add_argument("--model", default=None, help="model id: ho or quartic-number")
    parser.add_argument("--z0-re", type=float, default=None)
    parser.add_argument("--z0-im", type=float, default=None)
    parser.add_argument("--q0", type=float, default=None)
    parser.add_argument("--p0", type=float, default=None)
    parser.add_argument("--zf-re", type=float, default=None)
    parser.add_argument("--zf-im", type=float, default=None)
    parser.add_argument("--qf", type=float, default=None)
    parser.add_argument("--pf", type=float, default=None)
    parser.add_argument("--t-min", type=float, default=None)
    parser.add_argument("--t-max", type=float, default=None)
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--methods", default=None, help="comma separated: exact,bare,uniform,conjugate")
    parser.add_argument("--hbar", type=float, default=None)
    parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--c", type=float, default=None)
    parser.add_argument("--mapping", choices=("action", "full"), default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="output path; stdout when omitted")
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"), default=None)
    parser.add_argument("--progress", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bargmann",
                                     description="Coherent-state propagators: exact, bare and uniform.")
    parser.add_argument("--log-dir", default=None, help="directory for the rotating logs")
    sub = parser.add_subparsers(dest="command", required=True)

    propagate = sub.add_parser("propagate", help="run a scenario sweep and write the result table")
    _add_scenario_arguments(propagate)

    demo = sub.add_parser("transform-demo", help="validate the conjugate transform against closed forms")
    demo.add_argument("--seed", type=int, default=0)

    scan = sub.add_parser("caustic-scan", help="tabulate |m_vv| along the continued family")
    _add_scenario_arguments(scan)
    return parser


def _label_override(base: complex, re: Optional[float], im: Optional[float],
                    q: Optional[float], p: Optional[float], config: ScenarioConfig) -> Optional[complex]:
    if q is not None or p is not None:
        current = Label.from_complex(base, config.params)
        return Label(current.q0 if q is None else q, current.p0 if p is None else p, config.params).z0
    if re is not None or im is not None:
        return complex(re if re is not None else base.real, im if im is not None else base.imag)
    return None


def load_config(args: argparse.Namespace) -> ScenarioConfig:
    """Scenario file, then BARGMANN_* variables, then command-line flags."""
    config = ScenarioConfig.from_env(ScenarioEnvironment(args.scenario))
    config = config.with_overrides(
        model=args.model, t_min=args.t_min, t_max=args.t_max, n_steps=args.steps,
        methods=args.methods, hbar=args.hbar, b=args.b, c=args.c, mapping=args.mapping,
        seed=args.seed, output=args.out, output_format=args.output_format, progress=args.progress,
    )
    config = config.with_overrides(
        z0=_label_override(config.z0, args.z0_re, args.z0_im, args.q0, args.p0, config),
        zf=_label_override(config.zf, args.zf_re, args.zf_im, args.qf, args.pf, config),
    )
    config.validate()
    return config


def _propagate(args: argparse.Namespace) -> int:
    config = load_config(args)
    table = run_scenario(config)
    write_table(table, config.output, config.output_format)
    if len(table) and (table["status"] == Status.FAILED).all():
        EmojiLogger.error("Every point failed")
        return EXIT_ALL_FAILED
    return EXIT_OK


def _transform_demo(args: argparse.Namespace) -> int:
    report = transform_demo(seed=args.seed)
    for row in report.itertuples():
        colour = Fore.GREEN if row.passed else Fore.RED
        mark = "PASS" if row.passed else "FAIL"
        print(f"{colour}{mark}{Style.RESET_ALL} {row.check:<18} max error {row.max_error:.3e} "
              f"(< {row.threshold:.0e})")
    return EXIT_OK if report["passed"].all() else EXIT_ALL_FAILED


def _caustic_scan(args: argparse.Namespace) -> int:
    config = load_config(args)
    table, summary = caustic_scan(config)
    write_table(table, config.output, config.output_format)
    print(json.dumps(summary, default=str), file=sys.stderr)
    if table["abs_m_vv"].isna().all():
        return EXIT_ALL_FAILED
    return EXIT_OK


COMMANDS = {
    "propagate": _propagate,
    "transform-demo": _transform_demo,
    "caustic-scan": _caustic_scan,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    init()
    args = build_parser().parse_args(argv)
    EmojiLogger.setup_logging({'log_dir': args.log_dir})
    EmojiLogger.startup(f"bargmann {args.command}")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        EmojiLogger.validation_error(str(exc), extra={'field': exc.field, 'line': exc.line})
        print(f"{Fore.RED}Configuration error: {exc}{Style.RESET_ALL}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        EmojiLogger.shutdown(f"bargmann {args.command} finished")


if __name__ == "__main__":
    sys.exit(main())
