#!/usr/bin/env python3
"""Solves the four variants of a case with HiGHS through the MPS path and
reports cost, gap, curtailment and the contingencies that carry it.

    python3 tools/rts24_report.py --cli build/gridsched --case data/rts24.json

Each variant goes through export-mps -> HiGHS -> import-sol -> check, so
the reported numbers are re-verified by the C++ verifier. Requires the
highspy package.
"""

import argparse
import json
import subprocess
import sys
import time
from pathlib import Path

import highspy

VARIANTS = ["t-scuc", "tg-scuc", "t-scuc-cdr", "tg-scuc-cdr"]


def run(cmd):
    return subprocess.run([str(c) for c in cmd], capture_output=True, text=True)


def solve_mps(mps, gap, time_limit, threads):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", gap)
    h.setOptionValue("time_limit", time_limit)
    h.setOptionValue("threads", threads)
    h.readModel(str(mps))
    start = time.monotonic()
    h.run()
    seconds = time.monotonic() - start
    info = h.getInfo()
    status = h.modelStatusToString(h.getModelStatus())
    values = None
    if info.primal_solution_status == 2:  # feasible point available
        lp = h.getLp()
        values = list(zip(lp.col_names_, h.getSolution().col_value))
    return status, info.mip_gap, seconds, values


def cdr_by_contingency(solution):
    totals = {}
    for post in solution["contingency"]:
        mw = sum(sum(row) for row in post.get("cdr", []))
        if mw > 1e-6:
            totals[f"{post['kind']} {post['element']}"] = mw
    return totals


def main():
    parser = argparse.ArgumentParser(description="External-solver report over the four variants")
    parser.add_argument("--cli", type=Path, required=True, help="gridsched executable")
    parser.add_argument("--case", type=Path, required=True)
    parser.add_argument("--out", type=Path, default=Path("rts24_report"))
    parser.add_argument("--gap", type=float, default=0.01)
    parser.add_argument("--time-limit", type=float, default=3600.0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--variants", default=",".join(VARIANTS))
    parser.add_argument("--load-factor", type=float, default=1.0)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    scale = ["--load-factor", repr(args.load_factor)]
    rows = []
    for variant in args.variants.split(","):
        mps = args.out / f"{variant}.mps"
        sol = args.out / f"{variant}.sol"
        js = args.out / f"{variant}.json"
        r = run([args.cli, "export-mps", args.case, "--variant", variant, "--out", mps, *scale])
        if r.returncode != 0:
            sys.exit(r.stderr)
        status, gap, seconds, values = solve_mps(mps, args.gap, args.time_limit, args.threads)
        row = {"variant": variant, "status": status, "gap": gap, "seconds": round(seconds, 1)}
        if values is not None:
            sol.write_text("".join(f"{name} {value!r}\n" for name, value in values))
            r = run([args.cli, "import-sol", args.case, sol, "--variant", variant, "--out", js, *scale])
            if r.returncode != 0:
                sys.exit(r.stderr)
            check = run([args.cli, "check", args.case, js, "--tolerance", "1e-5", *scale])
            solution = json.loads(js.read_text())
            per_ctg = cdr_by_contingency(solution)
            row.update(cost=solution["objective"], verified=check.returncode == 0,
                       cdr_mw=round(sum(per_ctg.values()), 3), cdr_contingencies=per_ctg)
        rows.append(row)
        print(json.dumps(row), flush=True)
        mps.unlink()

    (args.out / "report.json").write_text(json.dumps(rows, indent=2) + "\n")


if __name__ == "__main__":
    main()
