#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and write `name value` lines.

Usage: highs_solve.py MODEL.lp SOLUTION.txt [TIME_LIMIT_SECONDS]
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) not in (3, 4):
        print(__doc__.strip(), file=sys.stderr)
        return 2
    model, solution = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    if len(sys.argv) == 4:
        h.setOptionValue("time_limit", float(sys.argv[3]))
    if h.readModel(model) != highspy.HighsStatus.kOk:
        print(f"cannot read {model}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    ok = (highspy.HighsModelStatus.kOptimal, highspy.HighsModelStatus.kModelEmpty)
    if status not in ok:
        print(f"solver status: {h.modelStatusToString(status)}", file=sys.stderr)
        return 1
    lp = h.getLp()
    values = h.getSolution().col_value
    with open(solution, "w") as f:
        f.write(f"# status {h.modelStatusToString(status)}\n")
        for name, value in zip(lp.col_names_, values):
            f.write(f"{name} {value:.9g}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
