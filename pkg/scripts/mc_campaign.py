"""Monte Carlo sweep of the exceedance bound over n and psi choices.

Writes one CSV row per (n, kind): estimate, Wilson 99% interval, the bound,
and whether the one-sided test passed.

    python3 scripts/mc_campaign.py --n 256 1024 4096 --trials 100000 --seed 1
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from sidelobe.bounds import BoundSpec
from sidelobe.stochastic import SamplerConfig, psl_sample, verify_proposition1


@dataclass
class Campaign:
    n_values: list = field(default_factory=lambda: [256, 1024, 4096])
    trials: int = 100_000
    seed: int = 1
    workers: int = 1
    cor2_epsilon: float = 0.5
    extra_psi: list = field(default_factory=list)

    def specs(self, n):
        out = [BoundSpec.cor2(n, self.cor2_epsilon), BoundSpec.cor4(n), BoundSpec.log_n(n)]
        out += [BoundSpec.custom(n, psi) for psi in self.extra_psi]
        return out


def run(c: Campaign, stream=sys.stdout):
    w = csv.writer(stream)
    w.writerow(["n", "kind", "psi", "threshold", "trials", "seed", "hits", "proportion",
                "ci_low", "ci_high", "bound", "passed", "seconds"])
    for n in c.n_values:
        cfg = SamplerConfig(n, c.trials, c.seed, c.workers)
        t0 = time.perf_counter()
        sample = psl_sample(cfg)
        dt = time.perf_counter() - t0
        for spec in c.specs(n):
            rep = verify_proposition1(cfg, spec, sample)
            e = rep.estimate
            w.writerow([n, spec.kind, f"{spec.psi:.6f}", f"{e.threshold:.4f}", c.trials, c.seed,
                        e.hits, f"{e.proportion:.6f}", f"{e.ci99[0]:.6f}", f"{e.ci99[1]:.6f}",
                        f"{rep.bound:.6f}", rep.passed, f"{dt:.1f}"])
        stream.flush()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--epsilon", type=float, default=0.5, help="epsilon for the cor2 choice")
    ap.add_argument("--psi", type=float, nargs="*", default=[], help="extra constant psi values")
    a = ap.parse_args()
    run(Campaign(a.n, a.trials, a.seed, a.workers, a.epsilon, a.psi))


if __name__ == "__main__":
    main()
