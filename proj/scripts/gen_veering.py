#!/usr/bin/env python3
"""Extracts the bundled veering-census subset.

Usage: python3 scripts/gen_veering.py CENSUS_WITH_DATA [--out data] [--sample 200]

CENSUS_WITH_DATA is veering_census_with_data.txt from the veering package.
Writes name,isosig,taut,edge_orientable rows: every entry whose aliases
include one of the named census manifolds, then the first --sample entries.
"""

import argparse
import os
import re

NAMES = ["m003", "m004", "m009", "m010", "m016", "m022", "m023", "m036", "m038", "m039",
         "m040", "m052", "m083", "m115", "m119", "m120", "m125", "m135", "m136", "m140"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("census")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--sample", type=int, default=200)
    args = ap.parse_args()

    named, sample = {}, []
    with open(args.census) as f:
        for i, line in enumerate(f):
            fields = line.split()
            sig, taut = fields[0].split("_")
            eo = {"E": "yes", "N": "no"}[fields[5]]
            aliases = re.findall(r"'([^']+)'", line)
            row = (aliases[0] if aliases else sig, sig, taut, eo)
            for a in aliases:
                if a in NAMES:
                    named[a] = (a, sig, taut, eo)
            if i < args.sample:
                sample.append(row)

    missing = [n for n in NAMES if n not in named]
    if missing:
        raise SystemExit("not in census: " + " ".join(missing))
    rows = [named[n] for n in NAMES]
    seen = {r[1] for r in rows}
    rows += [r for r in sample if r[1] not in seen]
    with open(os.path.join(args.out, "veering_census.csv"), "w") as f:
        f.write("name,isosig,taut,edge_orientable\n")
        for r in rows:
            f.write(",".join(r) + "\n")


if __name__ == "__main__":
    main()
