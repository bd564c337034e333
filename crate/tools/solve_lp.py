#!/usr/bin/env python3
"""Solve an LP file with scipy's MILP interface (HiGHS) and print the optimum.

Reads the LP dialect written by the `cycleseg export-lp` command: comment
lines starting with a backslash, a Maximize/Minimize section, named
constraints under Subject To, optional Bounds and Binary sections, End.

Usage: solve_lp.py FILE.lp
Prints: "objective <value>" or "infeasible".
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def strip_comments(text):
    lines = []
    for line in text.splitlines():
        if line.lstrip().startswith("\\"):
            continue
        lines.append(line)
    return "\n".join(lines)


def parse_expr(tokens):
    """Parse [sign] [coef] var ... into {var: coef}."""
    terms = {}
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        else:
            try:
                value = float(tok)
            except ValueError:
                terms[tok] = terms.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
                sign, coef = 1.0, None
            else:
                if coef is not None:
                    raise ValueError(f"two consecutive numbers near {tok!r}")
                coef = value
    if coef is not None:
        raise ValueError("dangling coefficient")
    return terms


def split_label(chunks):
    """Split a token stream into (label, tokens) chunks on `name:` tokens."""
    out = []
    for tok in chunks:
        if tok.endswith(":"):
            out.append((tok[:-1], []))
        else:
            out[-1][1].append(tok)
    return out


def parse(text):
    body = strip_comments(text)
    maximize = "Maximize" in body
    if not maximize and "Minimize" not in body:
        raise ValueError("missing sense")
    sense_key = "Maximize" if maximize else "Minimize"

    def section(start_key, end_keys):
        start = body.find(start_key)
        if start < 0:
            return None
        start += len(start_key)
        end = len(body)
        for key in end_keys:
            idx = body.find(key, start)
            if 0 <= idx < end:
                end = idx
        return body[start:end]

    obj_text = section(sense_key, ["Subject To"])
    con_text = section("Subject To", ["Bounds", "Binary", "End"])
    bounds_text = section("Bounds", ["Binary", "End"]) or ""
    binary_text = section("Binary", ["End"]) or ""

    (obj_label, obj_tokens) = split_label(obj_text.split())[0]
    assert obj_label == "obj"
    objective = parse_expr(obj_tokens)

    constraints = []
    for label, tokens in split_label(con_text.split()):
        for op in ("<=", ">=", "="):
            if op in tokens:
                idx = tokens.index(op)
                break
        else:
            raise ValueError(f"no operator in constraint {label}")
        lhs = parse_expr(tokens[:idx])
        rhs = float(tokens[idx + 1])
        constraints.append((label, lhs, op, rhs))

    explicit_bounds = {}
    for line in bounds_text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        lo, _, var, _, hi = tokens
        explicit_bounds[var] = (float(lo), float(hi))

    binaries = set(binary_text.split())
    return maximize, objective, constraints, explicit_bounds, binaries


def main():
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    with open(sys.argv[1]) as fh:
        maximize, objective, constraints, explicit_bounds, binaries = parse(fh.read())

    variables = set(objective)
    for _, lhs, _, _ in constraints:
        variables.update(lhs)
    variables.update(explicit_bounds)
    variables.update(binaries)
    order = sorted(variables)
    index = {v: i for i, v in enumerate(order)}
    n = len(order)

    c = np.zeros(n)
    for var, coef in objective.items():
        c[index[var]] = -coef if maximize else coef

    rows, lower, upper = [], [], []
    for _, lhs, op, rhs in constraints:
        row = np.zeros(n)
        for var, coef in lhs.items():
            row[index[var]] = coef
        rows.append(row)
        if op == "<=":
            lower.append(-np.inf)
            upper.append(rhs)
        elif op == ">=":
            lower.append(rhs)
            upper.append(np.inf)
        else:
            lower.append(rhs)
            upper.append(rhs)

    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    integrality = np.zeros(n)
    for var in binaries:
        i = index[var]
        ub[i] = 1.0
        integrality[i] = 1
    for var, (lo, hi) in explicit_bounds.items():
        lb[index[var]] = lo
        ub[index[var]] = hi

    result = milp(
        c,
        constraints=LinearConstraint(np.vstack(rows), lower, upper),
        bounds=Bounds(lb, ub),
        integrality=integrality,
    )
    if not result.success:
        print("infeasible")
        return 1
    value = -result.fun if maximize else result.fun
    print(f"objective {value:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
