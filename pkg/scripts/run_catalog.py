#!/usr/bin/env python3
"""Run the full verification on every built-in fixture and print a summary
table.  Usage: python scripts/run_catalog.py [--json]"""

import sys
import time

from ellsurf.catalog import CATALOG
from ellsurf.cli import build_model, parse_config, report_json
from ellsurf.verify import run_verification


def main(argv):
    as_json = "--json" in argv
    for name in sorted(CATALOG):
        cfg = parse_config(CATALOG[name].config_text)
        model, metadata, limits = build_model(cfg)
        t0 = time.time()
        rep = run_verification(model, metadata, limits)
        dt = time.time() - t0
        if as_json:
            print(report_json(rep, cfg, limits))
            continue
        statuses = {}
        for c in rep.checks:
            statuses[c.status] = statuses.get(c.status, 0) + 1
        fibs = ", ".join(f"{f.kodaira}@{f.place.label()}" for f in rep.fibers)
        print(f"{name}  ({dt:.1f}s)")
        print(f"    fibers: {fibs}")
        print(
            f"    rho = {rep.rho}, m = {rep.m}, rank = {rep.rank} ({rep.rank_source}), "
            f"deg L = {rep.invariants.deg_l}"
        )
        print(
            f"    predicted Br = {rep.predicted_br}, Sha = {rep.predicted_sha}; "
            f"checks: {statuses}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
