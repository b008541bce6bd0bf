"""Exhaustive computations over all of B_n for small n.

Counts are exact integers and proportions are Fractions; floats appear only
when a result is rendered.  Enumeration walks a Gray code so each step flips
one sign and updates the whole spectrum in O(n).  The symmetric scan only
scores canonical orbit representatives (smallest packed value among the
eight images under negation, reversal and alternation) and weights each by
its exact orbit size.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from .bounds import BoundSpec, chernoff_tail, proposition1_bound, threshold as bound_threshold
from .errors import DomainError, ResourceGuardError
from .seqcore import BinarySequence, psl

PLAIN_CAP = 24
PRUNED_CAP = 28
SPLIT_BITS = 4


def _guard(n, cap, override, what):
    if n < 2:
        raise DomainError(f"{what} needs n >= 2")
    if n > cap and not override:
        raise ResourceGuardError(f"{what}: n = {n} exceeds cap {cap} (pass override to force)")


@dataclass(frozen=True)
class PslDistribution:
    """Exact number of sequences of length n at each PSL value."""

    n: int
    counts: dict
    min_psl: int
    witness: int
    scanned: int
    method: str

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def count_above(self, threshold: float) -> int:
        return sum(c for mu, c in self.counts.items() if mu > threshold)


def _partition(n, symmetric):
    # Top two bits of a canonical representative are zero.
    free = n - 2 if symmetric else n
    b = min(SPLIT_BITS, free)
    return free - b, b


def _scan_part(args):
    n, m, prefix, symmetric = args
    if symmetric:
        hist, best, best_x, scanned = _kernels.scan_symmetric(n, m, prefix)
    else:
        hist, best, best_x = _kernels.scan_plain(n, m, prefix)
        scanned = 1 << m
    return hist, int(best), int(best_x), int(scanned)


def _scan(n, symmetric, workers):
    m, b = _partition(n, symmetric)
    jobs = [(n, m, p, symmetric) for p in range(1 << b)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_part, jobs))
    else:
        parts = [_scan_part(j) for j in jobs]
    hist = np.zeros(n, dtype=np.int64)
    best, best_x, scanned = n, 0, 0
    # merge in prefix order so the witness does not depend on worker count
    for h, bst, bx, sc in parts:
        hist += h
        scanned += sc
        if bst < best:
            best, best_x = bst, bx
    counts = {int(mu): int(c) for mu, c in enumerate(hist) if c}
    return PslDistribution(n, counts, best, best_x, scanned,
                           "symmetric" if symmetric else "plain")


@lru_cache(maxsize=64)
def _cached_distribution(n, symmetric):
    return _scan(n, symmetric, 1)


def psl_distribution(n: int, method: str = "symmetric", workers: int = 1,
                     override: bool = False) -> PslDistribution:
    if method not in ("symmetric", "plain"):
        raise DomainError(f"unknown method {method!r}")
    _guard(n, PLAIN_CAP, override, "enumeration")
    symmetric = method == "symmetric"
    if workers > 1:
        return _scan(n, symmetric, workers)
    return _cached_distribution(n, symmetric)


@dataclass(frozen=True)
class ExactExceedance:
    n: int
    threshold: float
    count: int
    proportion: Fraction
    method: str = "symmetric"

    def as_dict(self):
        return {
            "n": self.n,
            "threshold": self.threshold,
            "count": self.count,
            "total": 2**self.n,
            "proportion": str(self.proportion),
            "proportion_decimal": float(self.proportion),
        }


def exact_exceedance(n: int, threshold: float, method: str = "symmetric",
                     workers: int = 1, override: bool = False) -> ExactExceedance:
    """Exact number and proportion of A in B_n with PSL(A) > threshold."""
    dist = psl_distribution(n, method, workers, override)
    count = dist.count_above(threshold)
    return ExactExceedance(n, float(threshold), count, Fraction(count, 2**n), method)


@dataclass(frozen=True)
class MuMinResult:
    n: int
    mu_min: int
    witness: BinarySequence
    representatives_scanned: int
    elapsed: float
    method: str

    def as_dict(self):
        return {
            "n": self.n,
            "mu_min": self.mu_min,
            "witness": str(self.witness),
            "representatives_scanned": self.representatives_scanned,
            "elapsed_s": self.elapsed,
            "method": self.method,
        }


def mu_min_exact(n: int, prune: bool = True, override: bool = False) -> MuMinResult:
    """Minimum PSL over B_n with a witness.

    With ``prune`` the search asks, for m = 1, 2, ..., whether any sequence
    has PSL <= m, filling positions from both ends and cutting a branch as
    soon as a fully determined outer correlation exceeds m.  Without it,
    the symmetric exhaustive scan is used.
    """
    start = time.perf_counter()
    if prune:
        _guard(n, PRUNED_CAP, override, "pruned search")
        nodes = 0
        for m in range(1, n):
            found, signs, visited = _kernels.psl_at_most(n, m)
            nodes += int(visited)
            if found:
                witness = BinarySequence.from_signs(signs)
                break
        else:  # m = n - 1 always succeeds
            raise AssertionError("unreachable")
        method, scanned = "pruned", nodes
    else:
        _guard(n, PLAIN_CAP, override, "exhaustive scan")
        dist = psl_distribution(n, "symmetric", override=override)
        witness = BinarySequence.from_int(dist.witness, n)
        m, method, scanned = dist.min_psl, "symmetric-scan", dist.scanned
    assert psl(witness) == m
    return MuMinResult(n, m, witness, scanned, time.perf_counter() - start, method)


def rademacher_tail_exact(k: int, lam: float) -> Fraction:
    """P[|sum of k fair signs| > lam], by binomial counting."""
    if k < 1:
        raise DomainError("k must be >= 1")
    hits = sum(math.comb(k, i) for i in range(k + 1) if abs(k - 2 * i) > lam)
    return Fraction(hits, 2**k)


@dataclass
class TermReport:
    n: int
    rows: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def as_dict(self):
        return {"n": self.n, "shifts_checked": len(self.rows),
                "mismatches": self.mismatches, "passed": self.passed}


def term_distribution_check(n: int) -> TermReport:
    """Compare the law of c_{n-k} over B_n with that of a sum of k fair signs.

    P[c_{n-k} = k - 2i] must equal C(k, i) / 2^k exactly, for every k.
    """
    if not 2 <= n <= 16:
        raise ResourceGuardError("term_distribution_check needs 2 <= n <= 16")
    table = _kernels.term_tables(n)
    total = 2**n
    report = TermReport(n)
    for k in range(1, n):
        row = table[n - k]
        observed = {v - n: Fraction(int(row[v]), total) for v in range(2 * n + 1) if row[v]}
        expected = {k - 2 * i: Fraction(math.comb(k, i), 2**k) for i in range(k + 1)}
        report.rows.append((k, observed))
        if observed != expected:
            report.mismatches.append({"k": k, "observed": {str(a): str(b) for a, b in observed.items()}})
    return report


@dataclass
class UnionReport:
    n: int
    lam: float
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs

    def as_dict(self):
        return {"n": self.n, "lambda": self.lam, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "lhs_decimal": float(self.lhs), "rhs_decimal": float(self.rhs),
                "passed": self.passed}


def exceedance_union_bound_check(n: int, lam: float) -> UnionReport:
    """P[PSL > lam] against sum_k P[|c_{n-k}| > lam], both exact."""
    if n > 20:
        raise ResourceGuardError("union bound check needs n <= 20")
    lhs = exact_exceedance(n, lam).proportion
    rhs = sum((rademacher_tail_exact(k, lam) for k in range(1, n)), Fraction(0))
    return UnionReport(n, float(lam), lhs, rhs)


@dataclass
class ChernoffRow:
    k: int
    lam: float
    exact: Fraction
    bound: float

    @property
    def passed(self) -> bool:
        return self.exact <= Fraction(self.bound)


def chernoff_exact_check(k_max: int = 20) -> list[ChernoffRow]:
    """Exact tails for k <= k_max and lam in {0.5, 1, ..., k}."""
    rows = []
    for k in range(1, k_max + 1):
        for half in range(1, 2 * k + 1):
            lam = half / 2
            rows.append(ChernoffRow(k, lam, rademacher_tail_exact(k, lam), chernoff_tail(k, lam)))
    return rows


@dataclass
class Prop1ExactRow:
    n: int
    psi: float
    threshold: float
    proportion: Fraction
    bound: float

    @property
    def passed(self) -> bool:
        return self.proportion <= Fraction(self.bound)

    def as_dict(self):
        return {"n": self.n, "psi": self.psi, "threshold": self.threshold,
                "proportion": str(self.proportion), "bound": self.bound,
                "passed": self.passed}


def parse_psi(token, n: int) -> float:
    """A psi grid entry: a number, or the literal 'logn'."""
    if isinstance(token, str) and token.replace(" ", "").lower() in ("logn", "log(n)", "log_n"):
        return math.log(n)
    return float(token)


def proposition1_exact_check(n_values: Iterable[int], psi_grid: Iterable,
                             override: bool = False) -> list[Prop1ExactRow]:
    rows = []
    psi_grid = list(psi_grid)
    for n in n_values:
        for token in psi_grid:
            spec = BoundSpec.custom(n, parse_psi(token, n))
            thr = bound_threshold(spec)
            ex = exact_exceedance(n, thr, override=override)
            rows.append(Prop1ExactRow(n, spec.psi, thr, ex.proportion, proposition1_bound(spec)))
    return rows


def cor4_mu_min_check(n_values: Iterable[int], prune: bool = True) -> list[tuple[MuMinResult, float]]:
    out = []
    for n in n_values:
        res = mu_min_exact(n, prune=prune)
        out.append((res, bound_threshold(BoundSpec.cor4(n))))
    return out

