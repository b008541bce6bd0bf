import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import autocorr_naive, orbit_naive, psl_naive, spectrum_naive
from sidelobe.errors import DomainError, NumericPrecisionError, SequenceParseError
from sidelobe.seqcore import (
    BARKER_13,
    BinarySequence,
    alternating,
    autocorrelation,
    canonical,
    constant,
    parse_sequences,
    psl,
    psl_rows,
    spectrum_direct,
    spectrum_rows,
    spectrum_transform,
    symmetry_images,
    symmetry_orbit,
)

signs = st.lists(st.sampled_from([1, -1]), min_size=1, max_size=300)
signs2 = st.lists(st.sampled_from([1, -1]), min_size=2, max_size=300)

BARKER = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1]


def test_barker_string_matches_signs():
    assert BinarySequence.from_string(BARKER_13).signs().tolist() == BARKER


@given(signs)
def test_pack_round_trip(a):
    seq = BinarySequence.from_signs(a)
    assert seq.signs().tolist() == a
    assert BinarySequence.from_string(str(seq)) == seq
    assert BinarySequence.from_int(seq.as_int(), seq.n) == seq


def test_packing_convention_bit0_is_plus():
    seq = BinarySequence.from_string("+-")
    assert seq.as_int() == 0b10
    assert int(seq.words[0]) == 2


@pytest.mark.parametrize("bad", [[], [1, 0, -1], [2], [1, -1, 3]])
def test_rejects_invalid_elements(bad):
    with pytest.raises(DomainError):
        BinarySequence.from_signs(bad)


def test_rejects_stray_high_bits():
    with pytest.raises(DomainError):
        BinarySequence(3, np.array([0b1000], dtype=np.uint64))


def test_sequence_is_immutable():
    seq = constant(5)
    with pytest.raises(ValueError):
        seq.words[0] = 1


@pytest.mark.parametrize("k,expected", [(0, 3), (1, 2), (2, 1)])
def test_autocorrelation_constant(k, expected):
    assert autocorrelation(constant(3), k) == expected


def test_autocorrelation_pair():
    assert autocorrelation(BinarySequence.from_signs([1, -1]), 1) == -1


def test_autocorrelation_barker_sidelobes():
    seq = BinarySequence.from_signs(BARKER)
    for k in range(1, 13):
        # parity forces c_k = 0 at odd k
        assert autocorrelation(seq, k) == autocorr_naive(BARKER, k) == (k % 2 == 0)


@pytest.mark.parametrize("k", [-1, 3, 10])
def test_autocorrelation_range(k):
    with pytest.raises(IndexError):
        autocorrelation(constant(3), k)


def test_spectrum_examples():
    assert spectrum_direct(constant(3)).values == (3, 2, 1)
    assert spectrum_transform(constant(3)).values == (3, 2, 1)
    assert spectrum_direct(alternating(4)).values == (4, -3, 2, -1)
    assert spectrum_transform(alternating(4)).values == (4, -3, 2, -1)
    b = spectrum_direct(BinarySequence.from_signs(BARKER))
    assert b.values == (13, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1)


@given(signs)
def test_spectrum_direct_matches_naive_and_invariants(a):
    spec = spectrum_direct(BinarySequence.from_signs(a))
    assert list(spec.values) == spectrum_naive(a)
    spec.check()


@given(signs)
def test_transform_agrees_with_direct(a):
    seq = BinarySequence.from_signs(a)
    assert spectrum_transform(seq) == spectrum_direct(seq)


def test_transform_word_boundaries():
    rng = np.random.default_rng(11)
    for n in (1, 63, 64, 65, 127, 128, 129, 191, 192, 193, 1000, 4096):
        seq = BinarySequence.from_signs(rng.choice([-1, 1], n))
        assert spectrum_transform(seq) == spectrum_direct(seq)


def test_transform_signals_precision_failure(monkeypatch):
    import sidelobe.seqcore as sc

    real = sc.scipy.fft.irfft

    def noisy(*args, **kw):
        return real(*args, **kw) + 0.5

    monkeypatch.setattr(sc.scipy.fft, "irfft", noisy)
    with pytest.raises(NumericPrecisionError):
        spectrum_transform(constant(8))


def test_psl_rows_falls_back_to_direct(monkeypatch):
    import sidelobe.seqcore as sc

    rng = np.random.default_rng(5)
    rows = [BinarySequence.from_signs(rng.choice([-1, 1], 300)) for _ in range(4)]
    words = np.stack([r.words for r in rows])
    expected = [psl(r) for r in rows]
    real = sc._transform_rows

    def broken(signs):
        values, bad = real(signs)
        values = values + 7
        bad[:] = True
        return values, bad

    monkeypatch.setattr(sc, "_transform_rows", broken)
    assert psl_rows(words, 300).tolist() == expected


@given(st.integers(1, 200), st.lists(st.integers(0, 2**64 - 1), min_size=4, max_size=4))
def test_spectrum_rows_both_methods(n, raw):
    nw = (n + 63) // 64
    words = np.array((raw * nw)[: 2 * nw], dtype=np.uint64).reshape(2, nw)
    if n % 64:
        words[:, -1] &= np.uint64((1 << (n % 64)) - 1)
    expected = [spectrum_naive(BinarySequence(n, w).signs().tolist()) for w in words]
    assert spectrum_rows(words, n).tolist() == expected
    assert spectrum_rows(words, n, "transform").tolist() == expected


def test_spectrum_rows_rejects_unknown_method():
    with pytest.raises(DomainError):
        spectrum_rows(constant(4).words[None, :], 4, "magic")


def test_psl_examples():
    for n in (2, 3, 10, 100):
        assert psl(constant(n)) == n - 1
        assert psl(constant(n, -1)) == n - 1
    assert psl(BinarySequence.from_string(BARKER_13)) == 1
    with pytest.raises(DomainError):
        psl(constant(1))


@given(signs2)
def test_psl_at_least_one_and_matches_naive(a):
    mu = psl(BinarySequence.from_signs(a))
    assert mu >= 1
    assert mu == psl_naive(a)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_psl_kernel_vs_triple_loop_exhaustive(n):
    for a in itertools.product((1, -1), repeat=n):
        assert psl(BinarySequence.from_signs(a)) == psl_naive(a)


@given(st.lists(st.lists(st.sampled_from([1, -1]), min_size=250, max_size=250),
                min_size=1, max_size=5))
def test_psl_rows_transform_path(rows):
    words = np.stack([BinarySequence.from_signs(r).words for r in rows])
    assert psl_rows(words, 250).tolist() == [psl_naive(r) for r in rows]


def test_orbit_of_pair():
    orbit = symmetry_orbit(BinarySequence.from_string("++"))
    assert {str(s) for s in orbit} == {"++", "--", "+-", "-+"}


@given(signs)
def test_orbit_matches_closure_and_preserves_psl(a):
    seq = BinarySequence.from_signs(a)
    orbit = symmetry_orbit(seq)
    assert {tuple(s.signs().tolist()) for s in orbit} == orbit_naive(a)
    assert 8 % len(orbit) == 0
    if seq.n >= 2:
        assert {psl(s) for s in orbit} == {psl(seq)}


@given(signs)
def test_alternation_flips_odd_shifts(a):
    seq = BinarySequence.from_signs(a)
    alt = symmetry_images(seq)[2]
    base = spectrum_direct(seq).values
    assert spectrum_direct(alt).values == tuple((-1) ** k * c for k, c in enumerate(base))


@given(signs)
def test_canonical_idempotent_and_minimal(a):
    seq = BinarySequence.from_signs(a)
    c = canonical(seq)
    assert canonical(c) == c
    assert c.as_int() == min(s.as_int() for s in symmetry_orbit(seq))


def test_orbit_psl_invariant_exhaustive_small():
    for n in range(2, 9):
        for a in itertools.product((1, -1), repeat=n):
            seq = BinarySequence.from_signs(a)
            assert {psl(s) for s in symmetry_orbit(seq)} == {psl(seq)}


def test_orbit_psl_invariant_random_large():
    rng = np.random.default_rng(3)
    for n in (500, 2048):
        seq = BinarySequence.from_signs(rng.choice([-1, 1], n))
        assert {psl(s) for s in symmetry_images(seq)} == {psl(seq)}


def test_parse_sequences_reports_position():
    with pytest.raises(SequenceParseError) as info:
        list(parse_sequences(["+++", "+x+"]))
    assert (info.value.line, info.value.column) == (2, 2)
    assert [str(s) for s in parse_sequences(["++-", "", " -+ "])] == ["++-", "-+"]
