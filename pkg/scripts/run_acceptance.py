#!/usr/bin/env python3
"""Run the full acceptance battery with one pass/fail line per criterion."""

import sys

sys.path.insert(0, "src")

from qosc.acceptance import run_all


def main():
    reports = run_all(progress=print)
    failed = [r["id"] for r in reports if not r["pass"]]
    if failed:
        print("FAILED:", ", ".join(failed))
        return 1
    print("all %d criteria passed" % len(reports))
    return 0


if __name__ == "__main__":
    sys.exit(main())
