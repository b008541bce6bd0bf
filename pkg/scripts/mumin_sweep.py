"""Exact minimum PSL for a range of n, next to the 0.862 threshold.

    python3 scripts/mumin_sweep.py --from 2 --to 24
"""

import argparse

from sidelobe.bounds import BoundSpec, threshold
from sidelobe.exact import PRUNED_CAP, mu_min_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--from", dest="lo", type=int, default=2)
    ap.add_argument("--to", dest="hi", type=int, default=24)
    ap.add_argument("--no-prune", dest="prune", action="store_false")
    ap.add_argument("--override", action="store_true",
                    help=f"allow n above {PRUNED_CAP} (pruned search)")
    a = ap.parse_args()

    print("n,mu_min,cor4_threshold,slack,witness,seconds")
    for n in range(a.lo, a.hi + 1):
        r = mu_min_exact(n, prune=a.prune, override=a.override)
        thr = threshold(BoundSpec.cor4(n))
        print(f"{n},{r.mu_min},{thr:.4f},{thr - r.mu_min:.4f},{r.witness},{r.elapsed:.3f}",
              flush=True)


if __name__ == "__main__":
    main()
