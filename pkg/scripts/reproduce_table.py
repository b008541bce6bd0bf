"""Recompute the sqrt(2n log n) vs 0.862-bound table and diff it against the printed values.

    python3 scripts/reproduce_table.py [--tolerance 0.01]
"""

import argparse

from sidelobe.bounds import TABLE_HEADER, table_row

PRINTED = {
    1000: (117.54, 108.85),
    2000: (174.37, 160.43),
    3000: (219.18, 201.81),
    4000: (257.59, 237.33),
    5000: (291.84, 269.02),
    6000: (323.10, 297.96),
    7000: (352.07, 324.79),
    8000: (379.20, 349.93),
    9000: (404.83, 373.69),
    10000: (429.19, 396.28),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tolerance", type=float, default=0.01)
    args = ap.parse_args()

    print(TABLE_HEADER + ",printed_sqrt_2nlogn,printed_cor4_bound,flag")
    mismatches = 0
    for n, printed in PRINTED.items():
        row = table_row(n)
        flags = []
        for name, got, ref in (("col2", row.schmidt_value, printed[0]),
                               ("col3", row.cor4_value, printed[1])):
            if abs(round(got, 2) - ref) > args.tolerance + 1e-9:
                flags.append(f"{name} mismatch")
        mismatches += len(flags)
        print(f"{row.render()},{printed[0]:.2f},{printed[1]:.2f},{';'.join(flags)}")
    cells = 2 * len(PRINTED)
    print(f"{cells - mismatches}/{cells} cells within {args.tolerance}")
    if mismatches:
        print("known mismatch: the printed 108.85 at n=1000 recomputes to 108.05")


if __name__ == "__main__":
    main()
