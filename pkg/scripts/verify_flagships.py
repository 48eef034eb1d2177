"""Run the full verification battery on the flagship systems.

Writes one JSON report per system under --out (default ./flagship_reports)
and prints a one-line summary per check.  Exit code is the worst exit code
across runs.
"""

import argparse
import os
import sys

from obstruct.cli import RunConfig, cmd_verify
from obstruct.reports import write_report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="flagship_reports")
    parser.add_argument("--nmax", type=int, default=24)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    golden_path = os.path.join(args.out, "golden_expansion.txt")
    with open(golden_path, "w") as fh:
        fh.write("period=2\n10\n")

    runs = {
        "full-2-shift": RunConfig(beta="2", nmax=args.nmax),
        "golden-mean": RunConfig(expansion_file=golden_path, nmax=args.nmax),
        "beta-1.5-truncated": RunConfig(beta="1.5", horizon=60, nmax=args.nmax),
        # expected to fail: the everything-is-suffix scheme gives a vacuous bound
        "golden-mean-degenerate-scheme": RunConfig(
            expansion_file=golden_path, nmax=args.nmax, degenerate=True
        ),
    }
    worst = 0
    for name, config in runs.items():
        code, report = cmd_verify(config)
        if not config.degenerate:
            worst = max(worst, code)
        write_report(report, os.path.join(args.out, f"{name}.json"))
        print(f"== {name} (exit {code})")
        for check in report["payload"]["checks"]:
            flag = "ok " if check["passed"] else "FAIL"
            print(f"   [{flag}] {check['name']}: {check['summary']}")
        print(f"   hypotheses met: {report['payload']['uniqueness_hypotheses_met']}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
