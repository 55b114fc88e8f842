#!/usr/bin/env python3
"""Regenerate the canonical-report digests for the built-in catalog.

Run after any intentional change to the pipeline or the report format, then
paste the output into ellsurf/catalog.py (DIGESTS)."""

import io
import sys
from contextlib import redirect_stdout

from ellsurf.catalog import CATALOG
from ellsurf.cli import main, report_digest


def freeze():
    out = {}
    for name in sorted(CATALOG):
        buf = io.StringIO()
        with redirect_stdout(buf):
            rc = main(["report", "--catalog", name])
        if rc != 0:
            print(f"# {name}: exit {rc}, not frozen", file=sys.stderr)
            continue
        out[name] = report_digest(buf.getvalue().strip())
    print("DIGESTS = {")
    for name, digest in out.items():
        print(f'    "{name}": "{digest}",')
    print("}")


if __name__ == "__main__":
    freeze()
