"""Solves exported LP models with HiGHS and compares against the exhaustive optimum.

Usage: python3 scripts/check_mip_highs.py [path/to/transship]
Requires the `highspy` package.
"""

import re
import subprocess
import sys
import tempfile
from pathlib import Path

import highspy

BIN = sys.argv[1] if len(sys.argv) > 1 else "target/debug/transship"
CASES = [
    ("euclid", 0),
    ("l1", 4),
    ("euclid", 7),
]
COMMON = ["--m", "3", "--f", "2.5", "--c", "1", "--C", "0.8"]


def exhaustive(metric, depot):
    out = subprocess.run(
        [BIN, "solve-grid", *COMMON, "--metric", metric, "--depot", str(depot), "--exhaustive"],
        check=True, capture_output=True, text=True,
    ).stdout
    return float(re.search(r"objective ([0-9.]+)", out).group(1))


def highs(metric, depot, tmp):
    lp = Path(tmp) / f"{metric}_{depot}.lp"
    subprocess.run(
        [BIN, "export-mip", *COMMON, "--metric", metric, "--depot", str(depot), "--out", str(lp)],
        check=True, capture_output=True,
    )
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(lp))
    h.run()
    return h.getInfo().objective_function_value


def main():
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for metric, depot in CASES:
            a, b = exhaustive(metric, depot), highs(metric, depot, tmp)
            # Coefficients are written with six significant digits.
            good = abs(a - b) <= 1e-5 * max(1.0, abs(a))
            ok &= good
            print(f"{metric:6} depot {depot}: exhaustive {a:.6f}  HiGHS {b:.6f}  {'ok' if good else 'MISMATCH'}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
