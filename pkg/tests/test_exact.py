import itertools
import math
from fractions import Fraction

import pytest

from oracles import (
    exceedance_bruteforce,
    mu_min_bruteforce,
    orbit_naive,
    psl_counts_bruteforce,
    rademacher_tail_enum,
)
from sidelobe.bounds import BoundSpec, proposition1_bound, threshold
from sidelobe.errors import ResourceGuardError
from sidelobe.exact import (
    chernoff_exact_check,
    exact_exceedance,
    exceedance_union_bound_check,
    mu_min_exact,
    proposition1_exact_check,
    psl_distribution,
    rademacher_tail_exact,
    term_distribution_check,
)
from sidelobe.seqcore import BARKER_13, BinarySequence, psl


@pytest.mark.parametrize("n", range(2, 11))
def test_distribution_matches_bruteforce(n):
    ref = psl_counts_bruteforce(n)
    assert psl_distribution(n, "plain").counts == ref
    assert psl_distribution(n, "symmetric").counts == ref


@pytest.mark.parametrize("n", range(11, 17))
def test_symmetric_equals_plain(n):
    sym = psl_distribution(n, "symmetric")
    plain = psl_distribution(n, "plain")
    assert sym.counts == plain.counts
    assert sym.total == plain.total == 2**n
    # roughly an eighth of B_n is scored
    assert sym.scanned < 2**n / 7
    for thr in [0.5 + i * (n - 1) / 10 for i in range(10)]:
        a = exact_exceedance(n, thr, "symmetric")
        b = exact_exceedance(n, thr, "plain")
        assert a.count == b.count


def test_exceedance_examples():
    r = exact_exceedance(2, 0.5)
    assert (r.count, r.proportion) == (4, 1)
    r = exact_exceedance(4, 2.5)
    assert r.proportion == exceedance_bruteforce(4, 2.5)
    assert r.count == 4  # the constant and alternating orbits
    assert r.as_dict()["proportion"] == "1/4"


@pytest.mark.parametrize("n", range(2, 21))
def test_threshold_half_is_everything(n):
    assert exact_exceedance(n, 0.5).proportion == 1


@pytest.mark.parametrize("n", [3, 6, 9])
def test_extremal_count_computed(n):
    assert exact_exceedance(n, n - 1.5).proportion == exceedance_bruteforce(n, n - 1.5)


def test_workers_do_not_change_counts():
    a = psl_distribution(14, "symmetric", workers=1)
    b = psl_distribution(14, "symmetric", workers=2)
    assert a.counts == b.counts and a.witness == b.witness


def test_resource_guards():
    with pytest.raises(ResourceGuardError):
        exact_exceedance(25, 3.0)
    with pytest.raises(ResourceGuardError):
        mu_min_exact(29)
    with pytest.raises(ResourceGuardError):
        mu_min_exact(25, prune=False)
    with pytest.raises(ResourceGuardError):
        term_distribution_check(17)
    with pytest.raises(ResourceGuardError):
        exceedance_union_bound_check(21, 3.0)


def test_override_lifts_pruned_cap():
    assert mu_min_exact(29, override=True).mu_min >= 1


@pytest.mark.parametrize("n", range(2, 21))
def test_proposition1_exact_small_n(n):
    rows = proposition1_exact_check([n], [0.5, 1, 2, "logn"])
    assert len(rows) == 4
    for r in rows:
        assert r.passed, r
        assert r.proportion == exact_exceedance(n, r.threshold).proportion


def test_proposition1_bruteforce_oracle_n8():
    for psi in (0.5, 1.0, 2.0, math.log(8)):
        spec = BoundSpec.custom(8, psi)
        assert exceedance_bruteforce(8, threshold(spec)) <= Fraction(proposition1_bound(spec))


def test_mu_min_13_is_barker():
    r = mu_min_exact(13)
    assert r.mu_min == 1
    assert psl(r.witness) == 1
    barker = tuple(BinarySequence.from_string(BARKER_13).signs().tolist())
    assert barker in orbit_naive(r.witness.signs().tolist())


def test_mu_min_2():
    assert mu_min_exact(2).mu_min == 1
    assert mu_min_exact(2, prune=False).mu_min == 1


@pytest.mark.parametrize("n", range(2, 13))
def test_mu_min_bruteforce(n):
    assert mu_min_exact(n).mu_min == mu_min_bruteforce(n)


@pytest.mark.parametrize("n", range(2, 21))
def test_pruned_equals_scan(n):
    a = mu_min_exact(n, prune=True)
    b = mu_min_exact(n, prune=False)
    assert a.mu_min == b.mu_min
    assert psl(a.witness) == psl(b.witness) == a.mu_min
    assert 1 <= a.mu_min <= n - 1


@pytest.mark.parametrize("n", range(2, 25))
def test_mu_min_below_cor4(n):
    r = mu_min_exact(n)
    assert r.mu_min <= threshold(BoundSpec.cor4(n))


def test_term_distribution_small_examples():
    rep = term_distribution_check(3)
    k1 = dict(rep.rows)[1]
    assert k1 == {1: Fraction(1, 2), -1: Fraction(1, 2)}
    rep = term_distribution_check(5)
    assert dict(rep.rows)[3] == {3: Fraction(1, 8), 1: Fraction(3, 8), -1: Fraction(3, 8), -3: Fraction(1, 8)}


@pytest.mark.parametrize("n", range(2, 9))
def test_term_tables_vs_enumeration(n):
    rep = term_distribution_check(n)
    for k, observed in rep.rows:
        counts = {}
        for a in itertools.product((1, -1), repeat=n):
            c = sum(a[j] * a[j + n - k] for j in range(k))
            counts[c] = counts.get(c, 0) + 1
        assert observed == {v: Fraction(c, 2**n) for v, c in counts.items()}


def test_term_distribution_n16():
    rep = term_distribution_check(16)
    assert rep.passed and len(rep.rows) == 15


@pytest.mark.parametrize("k", range(1, 13))
def test_rademacher_tail_vs_enumeration(k):
    for half in range(0, 2 * k + 3):
        assert rademacher_tail_exact(k, half / 2) == rademacher_tail_enum(k, half / 2)


def test_chernoff_exact_check_all_pass():
    rows = chernoff_exact_check(20)
    assert len(rows) == sum(2 * k for k in range(1, 21))
    assert all(r.passed for r in rows)


def test_union_bound_examples():
    r = exceedance_union_bound_check(8, 3.0)
    assert r.lhs == exceedance_bruteforce(8, 3.0)
    assert r.rhs == sum((rademacher_tail_enum(k, 3.0) for k in range(1, 8)), Fraction(0))
    assert r.passed
    r = exceedance_union_bound_check(8, 7.0)
    assert r.lhs == 0 and r.passed
    r = exceedance_union_bound_check(16, math.sqrt(32))
    assert r.passed


@pytest.mark.parametrize("n", range(2, 21))
def test_union_bound_all_small(n):
    for lam in (0.5, 1.5, 2.5, math.sqrt(2 * n), n / 2):
        assert exceedance_union_bound_check(n, lam).passed
