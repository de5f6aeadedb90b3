#!/usr/bin/env python3

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

sys.path.append(str(Path(__file__).parent))

from src.config import load_config
from src.golay_orchestrator import GolayOrchestrator, RunReport, report_json


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the run report as JSON")
    common.add_argument("--verbose", action="store_true", help="Debug logging and progress bars")
    common.add_argument("--config", type=str, default=None, help="YAML file overriding config/defaults.yaml")
    common.add_argument("--out", type=str, default=None, help="Output file")

    parser = argparse.ArgumentParser(
        description="Construct and verify q-ary Golay complementary sets from Butson Hadamard matrices"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", parents=[common], help="Run the paraunitary construction")
    construct.add_argument("spec", help="Construction spec JSON")

    verify = commands.add_parser("verify", parents=[common], help="Check Golay complementarity of a set file")
    verify.add_argument("sets", help="Set file or construction output")

    pmepr = commands.add_parser("pmepr", parents=[common], help="PMEPR table of every sequence")
    pmepr.add_argument("sets", help="Set file or construction output")
    pmepr.add_argument("--oversample", type=int, default=None, help="Grid oversampling factor K (default 64)")

    anf = commands.add_parser("anf", parents=[common], help="Algebraic normal forms of every sequence")
    anf.add_argument("sets", help="Set file or construction output")
    anf.add_argument("--reverse", action="store_true", help="Read sequences from the highest power down")
    anf.add_argument("--compact", action="store_true", help="Omit '*' between factors")

    hadamard = commands.add_parser("hadamard", parents=[common], help="Butson matrix utilities")
    hadamard.add_argument("action", choices=["verify", "representatives", "equivalent", "dephase"])
    hadamard.add_argument("args", nargs="+", help="Matrix files, or q N for representatives")

    reproduce = commands.add_parser("reproduce", parents=[common], help="Built-in reproductions")
    reproduce.add_argument("target", choices=["example7", "example8", "lemma3", "properties"])
    reproduce.add_argument("--seed", type=int, default=None, help="Seed for randomised targets")
    reproduce.add_argument("--trials", type=int, default=None, help="Trial count for randomised targets")

    return parser


def run(args: argparse.Namespace) -> RunReport:
    orchestrator = GolayOrchestrator(config=load_config(args.config), progress=args.verbose)

    if args.command == "construct":
        return orchestrator.cmd_construct(args.spec, args.out)
    if args.command == "verify":
        return orchestrator.cmd_verify(args.sets)
    if args.command == "pmepr":
        return orchestrator.cmd_pmepr(args.sets, args.oversample, args.out)
    if args.command == "anf":
        return orchestrator.cmd_anf(args.sets, reverse=args.reverse, compact=args.compact, out_path=args.out)
    if args.command == "hadamard":
        return orchestrator.cmd_hadamard(args.action, args.args, args.out)
    return orchestrator.cmd_reproduce(args.target, seed=args.seed, trials=args.trials)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
    )

    if args.command == "hadamard" and args.action == "representatives" and len(args.args) != 2:
        parser.error("representatives takes exactly two arguments: q N")
    if args.command == "hadamard" and args.action == "equivalent" and len(args.args) != 2:
        parser.error("equivalent takes exactly two matrix files")

    try:
        report = run(args)
    except ValueError as e:
        parser.error(str(e))

    for block in report.stdout:
        print(block)

    print(report_json(report) if args.json else report.to_text(), file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
