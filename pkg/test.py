#!/usr/bin/env python
"""A simple developer-centric test script.

It runs the shipped tree and plan through the TreeApi, printing what it
finds, and exits with 1 on the first failure.
"""
import argparse
from fractions import Fraction
import sys
import time
from typing import NoReturn, Optional

from ptree.tree_api import TreeApi, TreeApiRv


def fail(msg: str, retval: Optional[TreeApiRv] = None) -> NoReturn:
    """Issues a failure message then does a sys.exit(1)."""
    err_msg = f"FAILED {msg}"
    if retval:
        assert not retval.success
        err_msg += f" (rv.msg={retval.msg})"
    print(err_msg)
    sys.exit(1)


def main():
    """The test entrypoint."""

    # Prepare arg-parser and parse the command-line...
    arg_parser: argparse.ArgumentParser = argparse.ArgumentParser(
        description="Probability Tree API Tester",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    arg_parser.add_argument(
        "-t", "--tree", help="The tree document", default="trees/light_device.ptree"
    )
    arg_parser.add_argument(
        "-p", "--plan", help="The experiment plan", default="plans/light_device.yaml"
    )
    args: argparse.Namespace = arg_parser.parse_args()

    rv: TreeApiRv = TreeApi.validate(args.tree)
    if not rv.success:
        fail(f"Validating {args.tree}", rv)
    print(f"Tree {args.tree} is valid")

    rv = TreeApi.posterior(args.tree, hypothesis="H", interventions=["X=x"], event="Y=y")
    if not rv.success:
        fail("Computing the posterior", rv)
    if rv.msg["posterior"]["h"] != Fraction(3, 5):
        fail(f"Expected P(h | do(x), y) = 3/5, got {rv.msg['posterior']['h']}")
    print(f"P(H | do(X=x), Y=y)\n{rv.msg['text']}")

    rv = TreeApi.sample(args.tree, n=10, seed=42)
    if not rv.success:
        fail("Sampling", rv)
    print(f"Sampled {len(rv.msg['realizations'])} realizations")

    start: float = time.time()
    rv = TreeApi.experiment(args.plan)
    if not rv.success:
        fail(f"Running {args.plan}", rv)
    final = rv.msg["result"].trajectory[-1]
    print(
        f"Experiment {args.plan} took {time.time() - start:.2f}s,"
        f" final belief\n{final.as_text()}"
    )

    # Success if we get here
    print("SUCCESS")


if __name__ == "__main__":
    main()
