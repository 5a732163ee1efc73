#!/usr/bin/env python3
"""Run the acceptance suite; --full switches to the spec-scale counts."""

import argparse
import os
import subprocess
import sys
from pathlib import Path


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="full-scale counts (tens of minutes)")
    args = parser.parse_args()

    env = dict(os.environ)
    if args.full:
        env["REALFORM_ACCEPT_FULL"] = "1"
    test_file = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    return subprocess.call([sys.executable, "-m", "pytest", str(test_file), "-s", "-q"], env=env)


if __name__ == "__main__":
    sys.exit(main())
