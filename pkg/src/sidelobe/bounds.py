"""Closed-form tail bounds and thresholds for the peak sidelobe level.

All logarithms are natural.  A threshold is ``sqrt(2 n psi(n))``; the bound
on the proportion of sequences whose PSL exceeds it is
``2n / (psi e^psi)``, evaluated in log space so large psi never overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError

COR4_K = 0.862
COR4_MARGIN = Decimal("2.00001")
KINDS = ("cor2", "cor3", "cor4", "custom")


@dataclass(frozen=True)
class BoundSpec:
    """A choice of psi(n).  n is normally an integer but any real n >= 2 works.

    cor2:   log n - (1 - epsilon) log log n
    cor3:   log n - log log n + log 2 + epsilon
    cor4:   log n - log log n + 0.862
    custom: the constant K itself (e.g. K = log n, or a fixed 0.5)
    """

    kind: str
    n: int
    epsilon: Optional[float] = None
    K: Optional[float] = None
    psi: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if not self.n >= 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if self.kind in ("cor2", "cor3"):
            if self.epsilon is None or not self.epsilon > 0:
                raise DomainError(f"{self.kind} needs epsilon > 0")
            if self.K is not None:
                raise DomainError(f"{self.kind} takes no K")
        else:
            if self.epsilon is not None:
                raise DomainError(f"{self.kind} takes no epsilon")
        if self.kind == "cor4":
            if self.K is None:
                object.__setattr__(self, "K", COR4_K)
            elif self.K != COR4_K:
                raise DomainError(f"cor4 fixes K = {COR4_K}")
        if self.kind == "custom" and self.K is None:
            raise DomainError("custom needs K (the value of psi)")
        value = _psi(self.kind, self.n, self.epsilon, self.K)
        if not value > 0 or not math.isfinite(value):
            raise DomainError(f"psi({self.n}) = {value} is not positive")
        object.__setattr__(self, "psi", value)

    @classmethod
    def cor2(cls, n, epsilon):
        return cls("cor2", n, epsilon=epsilon)

    @classmethod
    def cor3(cls, n, epsilon):
        return cls("cor3", n, epsilon=epsilon)

    @classmethod
    def cor4(cls, n):
        return cls("cor4", n)

    @classmethod
    def custom(cls, n, psi):
        return cls("custom", n, K=psi)

    @classmethod
    def log_n(cls, n):
        return cls("custom", n, K=math.log(n))


def _psi(kind, n, epsilon, K):
    ln = math.log(n)
    if kind == "custom":
        return float(K)
    lln = math.log(ln)
    if kind == "cor2":
        return ln - (1.0 - epsilon) * lln
    if kind == "cor3":
        return ln - lln + math.log(2.0) + epsilon
    return ln - lln + K


def psi_value(spec: BoundSpec) -> float:
    return spec.psi


def threshold(spec: BoundSpec) -> float:
    return math.sqrt(2.0 * spec.n * spec.psi)


def log_proposition1_bound(spec: BoundSpec) -> float:
    return math.log(2.0 * spec.n) - math.log(spec.psi) - spec.psi


def proposition1_bound(spec: BoundSpec) -> float:
    """Upper bound 2n / (psi e^psi) on P[PSL > threshold(spec)]."""
    return math.exp(log_proposition1_bound(spec))


def _check_expr_domain(n, epsilon):
    if n < 3:
        raise DomainError("n must be >= 3")
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")


def proportion_expr_cor2(n: float, epsilon: float) -> float:
    """2 (log n)^(1-eps) / (log n - (1-eps) log log n)."""
    _check_expr_domain(n, epsilon)
    ln = math.log(n)
    den = ln - (1.0 - epsilon) * math.log(ln)
    if den <= 0:
        raise DomainError("non-positive denominator")
    return 2.0 * ln ** (1.0 - epsilon) / den


def proportion_expr_cor3(n: float, epsilon: float) -> float:
    """log n / (e^eps (log n - log log n + log 2 + eps))."""
    _check_expr_domain(n, epsilon)
    ln = math.log(n)
    den = math.exp(epsilon) * (ln - math.log(ln) + math.log(2.0) + epsilon)
    if den <= 0:
        raise DomainError("non-positive denominator")
    return ln / den


def chernoff_tail(k: int, lam: float) -> float:
    """2 exp(-lam^2 / 2k): tail bound for |sum of k fair signs| > lam."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return 2.0 * math.exp(-lam * lam / (2.0 * k))


def fact_value(K: float, n):
    """(K - log log n) / log n, vectorised over n > 1."""
    ln = np.log(np.asarray(n, dtype=np.float64))
    return (K - np.log(ln)) / ln


def fact_lower_bound(K: float) -> float:
    return -math.exp(-(K + 1.0))


def fact_minimizer(K: float) -> float:
    """n at which (K - log log n)/log n is smallest: log n = e^(K+1)."""
    return math.exp(math.exp(K + 1.0))


def fact_grid(K: float, points: int = 10_000, lo: float = 2.0, hi: float = 1e12,
              bracket: int = 201, rel_width: float = 1e-3) -> np.ndarray:
    """Log-spaced grid on [lo, hi] joined with a dense bracket around the minimizer.

    The bracket is uniform in log n over e^(K+1) * (1 +- rel_width).
    """
    grid = np.geomspace(lo, hi, points)
    x_star = math.exp(K + 1.0)
    local = np.exp(np.linspace(x_star * (1 - rel_width), x_star * (1 + rel_width), bracket))
    local = local[(local > 1.0) & (local >= lo) & (local <= hi)]
    return np.unique(np.concatenate([grid, local]))


@dataclass
class FactReport:
    K: float
    lower_bound: float
    grid_min: float
    argmin: float
    points: int
    brackets_minimizer: bool
    gap: float
    violations: list = field(default_factory=list)
    tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        if self.violations:
            return False
        return not self.brackets_minimizer or self.gap <= self.tolerance

    def as_dict(self):
        return {
            "K": self.K,
            "lower_bound": self.lower_bound,
            "grid_min": self.grid_min,
            "argmin": self.argmin,
            "points": self.points,
            "brackets_minimizer": self.brackets_minimizer,
            "gap": self.gap,
            "violations": [list(v) for v in self.violations[:10]],
            "passed": self.passed,
        }


def verify_fact(K: float, n_grid: Sequence[float], tolerance: float = 1e-6) -> FactReport:
    """Check (K - log log n)/log n >= -1/e^(K+1) on a grid of n > 1.

    Violations are points where the value falls below -1/e^(K+1) by more than
    rounding (4 ulp of the bound).  If the grid has points on both sides of
    the minimizer, the grid minimum must also sit within ``tolerance`` of the
    bound.
    """
    grid = np.asarray(n_grid, dtype=np.float64)
    if grid.size == 0 or np.any(grid <= 1.0):
        raise DomainError("grid points must exceed 1")
    values = fact_value(K, grid)
    bound = fact_lower_bound(K)
    slack = 4 * np.spacing(abs(bound))
    bad = np.flatnonzero(values < bound - slack)
    i = int(np.argmin(values))
    n_star = fact_minimizer(K)
    return FactReport(
        K=K,
        lower_bound=bound,
        grid_min=float(values[i]),
        argmin=float(grid[i]),
        points=int(grid.size),
        brackets_minimizer=bool(grid.min() <= n_star <= grid.max()),
        gap=float(values[i] - bound),
        violations=[(float(grid[j]), float(values[j])) for j in bad],
        tolerance=tolerance,
    )


@dataclass
class Cor4Report:
    constant: Decimal
    constant_ok: bool
    grid_points: int
    worst_ratio: float
    worst_n: int
    max_bound: float
    chain_ok: bool
    bound_ok: bool

    @property
    def passed(self) -> bool:
        return self.constant_ok and self.chain_ok and self.bound_ok

    def as_dict(self):
        return {
            "constant": str(self.constant.quantize(Decimal("1e-12"))),
            "exceeds": str(COR4_MARGIN),
            "constant_ok": self.constant_ok,
            "grid_points": self.grid_points,
            "worst_ratio": self.worst_ratio,
            "worst_n": self.worst_n,
            "max_bound": self.max_bound,
            "chain_ok": self.chain_ok,
            "bound_ok": self.bound_ok,
            "passed": self.passed,
        }


def cor4_constant(prec: int = 50) -> Decimal:
    """e^0.862 - 1/e in decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = prec
        return Decimal(str(COR4_K)).exp() - Decimal(-1).exp()


def log_int_grid(lo: int, hi: int, count: int) -> np.ndarray:
    """At least ``count`` distinct, roughly log-spaced integers in [lo, hi].

    Rounding a geometric grid merges points at the low end, so the grid is
    made denser until enough distinct integers survive.
    """
    if count > hi - lo + 1:
        raise DomainError("range holds fewer than count integers")
    m = count
    while True:
        grid = np.unique(np.rint(np.geomspace(lo, hi, m)).astype(np.int64))
        if grid.size >= count:
            return grid
        m += max(1, (count - grid.size) // 2)


def corollary4_constant_check(n_grid=None) -> Cor4Report:
    """Check e^K - 1/e > 2.00001 and psi e^psi >= (e^K - 1/e) n on a grid.

    Default grid: 1000 distinct log-spaced integers in [2, 10^6].
    """
    const = cor4_constant()
    if n_grid is None:
        n_grid = log_int_grid(2, 10**6, 1000)
    floor = float(const)
    worst_ratio, worst_n, max_bound = math.inf, 0, 0.0
    chain_ok = bound_ok = True
    for n in n_grid:
        spec = BoundSpec.cor4(int(n))
        # psi e^psi / n, in log space
        ratio = math.exp(math.log(spec.psi) + spec.psi - math.log(n))
        if ratio < worst_ratio:
            worst_ratio, worst_n = ratio, int(n)
        if ratio < floor:
            chain_ok = False
        b = proposition1_bound(spec)
        max_bound = max(max_bound, b)
        if not b < 1.0:
            bound_ok = False
    return Cor4Report(const, const > COR4_MARGIN, len(n_grid), worst_ratio, worst_n,
                      max_bound, chain_ok, bound_ok)


def schmidt_interval(n: int, epsilon: float) -> tuple[float, float]:
    """((sqrt2 - eps) sqrt(n log n), (sqrt2 + eps) sqrt(n log n)).

    epsilon = 0 is accepted for display (both ends equal sqrt(2 n log n)).
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if epsilon < 0 or epsilon >= math.sqrt(2.0):
        raise DomainError("epsilon must lie in [0, sqrt 2)")
    scale = math.sqrt(n * math.log(n))
    return ((math.sqrt(2.0) - epsilon) * scale, (math.sqrt(2.0) + epsilon) * scale)


@dataclass(frozen=True)
class TableRow:
    n: int
    schmidt_value: float
    cor4_value: float

    def render(self, full_precision: bool = False) -> str:
        if full_precision:
            return f"{self.n},{self.schmidt_value!r},{self.cor4_value!r}"
        return f"{self.n},{self.schmidt_value:.2f},{self.cor4_value:.2f}"


TABLE_HEADER = "n,sqrt_2nlogn,cor4_bound"


def table_row(n: int) -> TableRow:
    if n < 3:
        raise DomainError("table rows need n >= 3")
    return TableRow(n, math.sqrt(2.0 * n * math.log(n)), threshold(BoundSpec.cor4(n)))


def evaluate(spec: BoundSpec) -> dict:
    return {
        "n": spec.n,
        "psi": spec.psi,
        "threshold": threshold(spec),
        "proportion_bound": proposition1_bound(spec),
    }
