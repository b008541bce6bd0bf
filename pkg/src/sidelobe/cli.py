"""Command-line interface.

Exit status: 0 on success/PASS, 1 on usage or resource errors, 2 when a
verified property fails.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import time
from typing import Optional

from . import bounds, exact, stochastic
from .errors import DomainError, PropertyFailure, ResourceGuardError, SequenceParseError
from .records import ExperimentRecord, append_record, record_path
from .seqcore import parse_sequences, psl, spectrum_direct

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
WORKERS_ENV = "SIDELOBE_WORKERS"
COR3_DEFAULT_EPSILON = 0.01
SUITES = ("prop1-exact", "prop1-mc", "chernoff", "fact", "cor4-const", "independence", "union-bound")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_int_list(text: str) -> list[int]:
    """'18', '2..20', '1000..10000:1000' or a comma list of those."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, _, rest = part.partition("..")
            hi, _, step = rest.partition(":")
            step = int(step) if step else 1
            if step < 1:
                raise UsageError(f"bad step in {part!r}")
            out.extend(range(int(lo), int(hi) + 1, step))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _default_workers():
    return int(os.environ.get(WORKERS_ENV, "1"))


def _seed(args):
    if args.seed is None:
        args.seed = secrets.randbits(64)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _dump(obj) -> str:
    return json.dumps(obj, separators=(", ", ": ")) + "\n"


# --- commands -----------------------------------------------------------------


def cmd_psl(args):
    if args.sequences:
        lines = args.sequences
    elif args.file:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = sys.stdin.read().splitlines()
    seqs = list(parse_sequences(lines))
    if args.spectrum:
        out = ["index,n,psl,k,c_k"]
        for i, s in enumerate(seqs):
            mu = psl(s) if s.n >= 2 else ""
            for k, c in enumerate(spectrum_direct(s).values):
                out.append(f"{i},{s.n},{mu},{k},{c}")
    else:
        out = ["index,n,psl"]
        for i, s in enumerate(seqs):
            out.append(f"{i},{s.n},{psl(s)}")
    return EXIT_OK, "\n".join(out) + "\n", None


def cmd_table(args):
    if args.n_list:
        ns = parse_int_list(args.n_list)
    else:
        if args.start is None or args.stop is None:
            raise UsageError("give --from and --to, or --n-list")
        if args.step < 1:
            raise UsageError("--step must be >= 1")
        if args.start > args.stop:
            raise UsageError("--from must not exceed --to")
        ns = list(range(args.start, args.stop + 1, args.step))
    if min(ns) < 3:
        raise UsageError("table rows need n >= 3")
    rows = [bounds.table_row(n).render(args.full_precision) for n in ns]
    return EXIT_OK, bounds.TABLE_HEADER + "\n" + "\n".join(rows) + "\n", None


def _spec_from_args(args, n):
    kind = args.kind
    eps = args.epsilon
    if kind == "cor3" and eps is None:
        eps = COR3_DEFAULT_EPSILON
    if kind == "custom":
        if args.K is None:
            raise UsageError("custom needs --K (the value of psi)")
        return bounds.BoundSpec.custom(n, args.K)
    if kind == "cor4":
        return bounds.BoundSpec.cor4(n)
    if eps is None:
        raise UsageError(f"{kind} needs --epsilon")
    return bounds.BoundSpec(kind, n, epsilon=eps)


def cmd_bounds_eval(args):
    spec = _spec_from_args(args, args.n)
    return EXIT_OK, _dump(bounds.evaluate(spec)), None


def cmd_mc_exceed(args):
    seed = _seed(args)
    cfg = stochastic.SamplerConfig(args.n, args.trials, seed, args.workers)
    est = stochastic.estimate_exceedance(cfg, args.threshold)
    out = est.as_dict()
    return EXIT_OK, _dump(out), ({"n": args.n, "trials": args.trials, "seed": seed,
                                   "threshold": args.threshold}, out)


def cmd_mc_hist(args):
    seed = _seed(args)
    cfg = stochastic.SamplerConfig(args.n, args.trials, seed, args.workers)
    eps = _floats(args.epsilon) if args.epsilon else []
    hist = stochastic.psl_histogram(cfg, eps)
    if eps:
        for e, frac in hist.in_interval.items():
            print(f"in-interval fraction (epsilon={e}): {frac}", file=sys.stderr)
    outputs = {"counts": {str(k): v for k, v in hist.rows()},
               "in_interval": {str(k): v for k, v in hist.in_interval.items()}}
    return EXIT_OK, hist.to_csv(), ({"n": args.n, "trials": args.trials, "seed": seed,
                                     "epsilon": eps}, outputs)


def cmd_exact_mumin(args):
    res = exact.mu_min_exact(args.n, prune=args.prune, override=args.override)
    out = res.as_dict()
    stable = {k: v for k, v in out.items() if k != "elapsed_s"}
    return EXIT_OK, _dump(out), ({"n": args.n, "prune": args.prune}, stable)


def cmd_exact_exceed(args):
    res = exact.exact_exceedance(args.n, args.threshold, workers=args.workers,
                                 override=args.override)
    out = res.as_dict()
    return EXIT_OK, _dump(out), ({"n": args.n, "threshold": args.threshold}, out)


def _verify_prop1_exact(args):
    ns = parse_int_list(args.n or "2..20")
    grid = [x.strip() for x in args.psi_grid.split(",")]
    rows = exact.proposition1_exact_check(ns, grid, override=args.override)
    bad = [r.as_dict() for r in rows if not r.passed]
    return not bad, {"checked": len(rows), "violations": bad}


def _verify_prop1_mc(args):
    seed = _seed(args)
    results = []
    for n in parse_int_list(args.n or "256,1024,4096"):
        cfg = stochastic.SamplerConfig(n, args.trials, seed, args.workers)
        sample = stochastic.psl_sample(cfg)
        kinds = [args.kind] if args.kind else ["cor2", "cor4"]
        for kind in kinds:
            ns = argparse.Namespace(kind=kind, epsilon=args.epsilon if args.epsilon is not None
                                    else (0.5 if kind == "cor2" else None), K=args.K)
            rep = stochastic.verify_proposition1(cfg, _spec_from_args(ns, n), sample)
            results.append(rep.as_dict())
    return all(r["passed"] for r in results), {"seed": seed, "results": results}


def _verify_chernoff(args):
    rows = exact.chernoff_exact_check(args.k_max)
    bad = [{"k": r.k, "lambda": r.lam, "exact": str(r.exact), "bound": r.bound}
           for r in rows if not r.passed]
    out = {"checked": len(rows), "violations": bad}
    ok = not bad
    if args.trials:
        seed = _seed(args)
        rep = stochastic.chernoff_empirical(args.k, args.lam, args.trials, seed, args.workers)
        out["empirical"] = rep.as_dict()
        ok = ok and rep.passed
    return ok, out


def _verify_fact(args):
    Ks = _floats(args.K) if args.K else [-1.0, 0.0, 0.5, bounds.COR4_K, 2.0]
    reports = [bounds.verify_fact(K, bounds.fact_grid(K, args.points)) for K in Ks]
    for r in reports:
        print(f"K={r.K}: grid minimum {r.grid_min:.6f} at n={r.argmin:.6g} "
              f"(bound {r.lower_bound:.6f})", file=sys.stderr)
    return all(r.passed for r in reports), {"reports": [r.as_dict() for r in reports]}


def _verify_cor4(args):
    rep = bounds.corollary4_constant_check()
    print(f"e^{bounds.COR4_K} - 1/e = {rep.constant:.7f} > {bounds.COR4_MARGIN}", file=sys.stderr)
    return rep.passed, rep.as_dict()


def _verify_independence(args):
    ns = parse_int_list(args.n or "2..16")
    reports = [exact.term_distribution_check(n) for n in ns]
    return all(r.passed for r in reports), {"reports": [r.as_dict() for r in reports]}


def _verify_union(args):
    if args.n is None or args.lam is None:
        raise UsageError("union-bound needs --n and --lambda")
    reports = [exact.exceedance_union_bound_check(n, args.lam) for n in parse_int_list(args.n)]
    return all(r.passed for r in reports), {"reports": [r.as_dict() for r in reports]}


_VERIFY = {
    "prop1-exact": _verify_prop1_exact,
    "prop1-mc": _verify_prop1_mc,
    "chernoff": _verify_chernoff,
    "fact": _verify_fact,
    "cor4-const": _verify_cor4,
    "independence": _verify_independence,
    "union-bound": _verify_union,
}


def cmd_verify(args):
    passed, report = _VERIFY[args.suite](args)
    report = {"suite": args.suite, "passed": passed, **report}
    print(("PASS " if passed else "FAIL ") + args.suite, file=sys.stderr)
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("func", "record_file", "no_record") and v is not None}
    return (EXIT_OK if passed else EXIT_FAIL), _dump(report), (inputs, report)


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sidelobe", description=__doc__.splitlines()[0])
    p.add_argument("--record-file", help="JSON-lines record file (default: $SIDELOBE_RECORD_FILE "
                                         "or ./sidelobe_records.jsonl)")
    p.add_argument("--no-record", action="store_true", help="do not append an experiment record")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("psl", help="PSL of +/- sequences")
    sp.add_argument("sequences", nargs="*")
    sp.add_argument("--file", help="one sequence per line")
    sp.add_argument("--spectrum", action="store_true", help="emit every c_k (long format)")
    sp.set_defaults(func=cmd_psl)

    sp = sub.add_parser("table", help="sqrt(2n log n) against the 0.862 bound")
    sp.add_argument("--from", dest="start", type=int)
    sp.add_argument("--to", dest="stop", type=int)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--n-list", help="e.g. 1000..10000:1000")
    sp.add_argument("--full-precision", action="store_true")
    sp.set_defaults(func=cmd_table)

    bp = sub.add_parser("bounds", help="closed-form bounds").add_subparsers(
        dest="bounds_command", required=True, parser_class=_Parser)
    sp = bp.add_parser("eval")
    sp.add_argument("--kind", choices=bounds.KINDS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--K", type=float, help="psi value for --kind custom")
    sp.set_defaults(func=cmd_bounds_eval)

    mp = sub.add_parser("mc", help="Monte Carlo").add_subparsers(
        dest="mc_command", required=True, parser_class=_Parser)
    for name, func in (("exceed", cmd_mc_exceed), ("hist", cmd_mc_hist)):
        sp = mp.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--trials", type=int, required=True)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int, default=_default_workers())
        if name == "exceed":
            sp.add_argument("--threshold", type=float, required=True)
        else:
            sp.add_argument("--epsilon", help="comma list; report in-interval fractions")
        sp.set_defaults(func=func)

    ep = sub.add_parser("exact", help="exhaustive computations").add_subparsers(
        dest="exact_command", required=True, parser_class=_Parser)
    sp = ep.add_parser("mumin")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--prune", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--override", action="store_true", help="lift the size cap")
    sp.set_defaults(func=cmd_exact_mumin)
    sp = ep.add_parser("exceed")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--threshold", type=float, required=True)
    sp.add_argument("--workers", type=int, default=_default_workers())
    sp.add_argument("--override", action="store_true", help="lift the size cap")
    sp.set_defaults(func=cmd_exact_exceed)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--n", help="n, range a..b[:step] or comma list")
    sp.add_argument("--psi-grid", default="0.5,1,2,logn")
    sp.add_argument("--kind", choices=bounds.KINDS)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--K", help="for fact: comma list; for prop1-mc custom: psi value")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=_default_workers())
    sp.add_argument("--k-max", type=int, default=20)
    sp.add_argument("--k", type=int, default=100)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--points", type=int, default=10_000)
    sp.add_argument("--override", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def _fix_verify_args(args):
    if args.func is not cmd_verify:
        return
    if args.suite == "prop1-mc":
        args.trials = args.trials or 100_000
        if args.K is not None:
            args.K = float(args.K)
    if args.suite == "chernoff" and args.trials and args.lam is None:
        args.lam = 30.0


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    _fix_verify_args(args)
    start = time.perf_counter()
    try:
        code, text, rec = args.func(args)
    except (UsageError, DomainError, ResourceGuardError, SequenceParseError, ValueError) as exc:
        kind = "parse error" if isinstance(exc, SequenceParseError) else "error"
        print(f"sidelobe: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PropertyFailure as exc:
        print(f"sidelobe: property failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(text)
    if rec is not None and not args.no_record:
        inputs, outputs = rec
        elapsed = (time.perf_counter() - start) * 1000
        append_record(ExperimentRecord.create(argv, inputs, outputs, elapsed),
                      record_path(args.record_file))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
