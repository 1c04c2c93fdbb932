"""Solve LP files written by `dmcs export-lp` with scipy's MILP solver.

    python3 lp_crosscheck.py model.lp [more.lp ...]

Prints one JSON object per file: {"file", "status", "objective"} where
status is "optimal" or "infeasible".
"""

import json
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

TERM = re.compile(r"([+-])?\s*([0-9.eE+-]+)\s+([A-Za-z_][A-Za-z0-9_]*)")


def parse_terms(text):
    terms = []
    for sign, coef, var in TERM.findall(text):
        value = float(coef)
        terms.append((-value if sign == "-" else value, var))
    return terms


def parse_lp(text):
    """Returns (objective terms, rows, bounds, binaries).

    Rows are (terms, sense, rhs); bounds map continuous variables to
    (lower, upper)."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("\\")]
    sections = {}
    current = None
    for line in lines:
        head = line.strip()
        if head in ("Minimize", "Subject To", "Bounds", "Binary", "End"):
            current = head
            sections[current] = []
        elif current is not None:
            sections[current].append(line)

    objective = parse_terms(" ".join(sections["Minimize"]).split(":", 1)[1])

    rows = []
    pending = ""
    for line in sections["Subject To"]:
        pending += " " + line
        match = re.search(r"(<=|>=|=)\s*(\S+)\s*$", pending)
        if match:
            body = pending[: match.start()].split(":", 1)[1]
            rows.append((parse_terms(body), match.group(1), float(match.group(2))))
            pending = ""

    bounds = {}
    for line in sections.get("Bounds", []):
        lo, _, var, _, hi = line.split()
        bounds[var] = (float(lo), float(hi))

    binaries = " ".join(sections["Binary"]).split()
    return objective, rows, bounds, binaries


def solve_lp(text):
    objective, rows, bounds, binaries = parse_lp(text)
    names = binaries + list(bounds)
    index = {name: i for i, name in enumerate(names)}
    c = np.zeros(len(names))
    for coef, var in objective:
        c[index[var]] += coef

    a = np.zeros((len(rows), len(names)))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, (terms, sense, rhs) in enumerate(rows):
        for coef, var in terms:
            a[r, index[var]] += coef
        if sense in ("=", "<="):
            hi[r] = rhs
        if sense in ("=", ">="):
            lo[r] = rhs

    integrality = np.array([1] * len(binaries) + [0] * len(bounds))
    var_lo = np.array([0.0] * len(binaries) + [b[0] for b in bounds.values()])
    var_hi = np.array([1.0] * len(binaries) + [b[1] for b in bounds.values()])
    res = milp(
        c,
        constraints=LinearConstraint(a, lo, hi),
        integrality=integrality,
        bounds=Bounds(var_lo, var_hi),
    )
    if res.status == 0:
        return "optimal", float(res.fun)
    if res.status == 2:
        return "infeasible", None
    raise RuntimeError(f"solver status {res.status}: {res.message}")


def main(paths):
    for path in paths:
        with open(path) as fh:
            status, objective = solve_lp(fh.read())
        print(json.dumps({"file": path, "status": status, "objective": objective}))


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    main(sys.argv[1:])
