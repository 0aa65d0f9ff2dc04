#!/usr/bin/env python
"""The ``ptree`` command-line tool.

Every subcommand (except ``experiment``) reads a ``.ptree`` document given
as its first positional argument, e.g.: -

    ptree validate trees/light_device.ptree
    ptree prob trees/light_device.ptree -e X=x,Y=y
    ptree cond trees/light_device.ptree -t H=h -g X=x,Y=y
    ptree do trees/light_device.ptree -i X=x -o intervened.ptree
    ptree posterior trees/light_device.ptree --hyp H -i X=x -e Y=y
    ptree sample trees/light_device.ptree -n 10 --seed 42
    ptree experiment plans/light_device.yaml --csv trials.csv
    ptree export trees/light_device.ptree --format dot

Exact values are printed first, decimals are for display only.
Errors are reported as a single line on stderr with exit code 1.
Usage errors exit with code 2.
"""
import argparse
import logging
from pathlib import Path
import sys
from typing import List, Optional

from ptree.tree_api import TreeApi, TreeApiRv


def error(rv: TreeApiRv) -> int:
    """Prints a one-line error using the TreeApiRv message, returning 1."""
    print(f"ERROR: {rv.msg['error']}", file=sys.stderr)
    return 1


def emit(text: str, output: Optional[str] = None) -> None:
    """Writes text to a file (if named) or to stdout."""
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n", encoding="utf8")
    else:
        print(text.rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    """The argument parser, with one sub-parser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="ptree",
        description="Bayesian causal induction over probability trees.",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages to stderr"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", help="Check a tree document")
    validate.add_argument("file", help="A .ptree document")

    prob = subparsers.add_parser("prob", help="The probability of an event")
    prob.add_argument("file", help="A .ptree document")
    prob.add_argument(
        "-e", "--event", default="", help="The event, e.g. X=x,Y=y (empty for certainty)"
    )

    cond = subparsers.add_parser("cond", help="A conditional probability")
    cond.add_argument("file", help="A .ptree document")
    cond.add_argument("-t", "--target", required=True, help="The target event")
    cond.add_argument("-g", "--given", default="", help="The conditioning event")

    do = subparsers.add_parser("do", help="Write the tree after interventions")
    do.add_argument("file", help="A .ptree document")
    do.add_argument(
        "-i",
        "--intervene",
        action="append",
        required=True,
        help="VAR=VALUE (repeatable)",
    )
    do.add_argument("-o", "--output", help="The output file (stdout if not given)")

    post = subparsers.add_parser("posterior", help="The posterior over a hypothesis")
    post.add_argument("file", help="A .ptree document")
    post.add_argument("--hyp", required=True, help="The hypothesis variable")
    post.add_argument(
        "-i", "--intervene", action="append", default=[], help="VAR=VALUE (repeatable)"
    )
    post.add_argument("-e", "--event", default="", help="The observation")

    sample = subparsers.add_parser("sample", help="Sample realizations as CSV")
    sample.add_argument("file", help="A .ptree document")
    sample.add_argument("-n", type=int, required=True, help="The number of samples")
    sample.add_argument("--seed", type=int, required=True, help="The random seed")
    sample.add_argument("--csv", help="The output file (stdout if not given)")

    experiment = subparsers.add_parser(
        "experiment", help="Run a simulated campaign described by a plan file"
    )
    experiment.add_argument("plan", help="A YAML plan file")
    experiment.add_argument("--csv", help="The output file (stdout if not given)")
    experiment.add_argument(
        "--verify",
        action="store_true",
        help="Replay the trial log and, when it fits the leaf limit,"
        " check the final belief against the brute-force replicated tree",
    )

    export = subparsers.add_parser("export", help="Export a tree")
    export.add_argument("file", help="A .ptree document")
    export.add_argument(
        "--format",
        required=True,
        choices=TreeApi.supported_formats(),
        help="The document format",
    )

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """The command-line entrypoint, returning the exit code."""
    parser: argparse.ArgumentParser = build_parser()
    args: argparse.Namespace = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s %(message)s",
    )

    if args.command == "sample" and (args.n < 0 or args.seed < 0):
        parser.error("-n and --seed must not be negative")

    rv: TreeApiRv
    output: Optional[str] = None
    if args.command == "validate":
        rv = TreeApi.validate(args.file)
        if not rv.success and rv.msg.get("violations"):
            for violation in rv.msg["violations"]:
                print(violation)
            return 1
    elif args.command == "prob":
        rv = TreeApi.probability(args.file, event=args.event)
    elif args.command == "cond":
        rv = TreeApi.conditional(args.file, target=args.target, given=args.given)
    elif args.command == "do":
        rv = TreeApi.intervene(args.file, interventions=args.intervene)
        output = args.output
    elif args.command == "posterior":
        rv = TreeApi.posterior(
            args.file,
            hypothesis=args.hyp,
            interventions=args.intervene,
            event=args.event,
        )
    elif args.command == "sample":
        rv = TreeApi.sample(args.file, n=args.n, seed=args.seed)
        output = args.csv
    elif args.command == "experiment":
        rv = TreeApi.experiment(args.plan, verify=args.verify)
        output = args.csv
        if rv.success and args.verify and not rv.msg["verified"]:
            print("ERROR: Experiment verification failed", file=sys.stderr)
            return 1
    else:
        assert args.command == "export"
        rv = TreeApi.export(args.file, fmt=args.format)

    if not rv.success:
        return error(rv)
    try:
        emit(rv.msg["text"], output)
    except OSError as ex:
        print(f"ERROR: Failed writing {output}: {ex}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":

    sys.exit(main())
