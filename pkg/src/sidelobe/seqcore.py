"""Binary sequences, aperiodic autocorrelations and peak sidelobe level.

Packing convention: element j lives in bit ``j % 64`` of word ``j // 64``
(little-endian uint64 words).  A clear bit is +1, a set bit is -1, so the
sign of bit value b is ``1 - 2*b``.  Unused high bits of the last word are
always zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
import scipy.fft

from . import _kernels
from .errors import DomainError, NumericPrecisionError, SequenceParseError

MAX_LENGTH = 1 << 20


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    n = bits.shape[-1]
    nw = (n + 63) // 64
    padded = np.zeros(bits.shape[:-1] + (nw * 64,), dtype=np.uint8)
    padded[..., :n] = bits
    return np.packbits(padded, axis=-1, bitorder="little").view("<u8").astype(np.uint64)


def _unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, axis=-1, bitorder="little")[..., :n]


@dataclass(frozen=True, eq=False)
class BinarySequence:
    """Immutable +/-1 sequence stored bit-packed."""

    n: int
    words: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_LENGTH:
            raise DomainError(f"length must be in [1, {MAX_LENGTH}], got {self.n}")
        words = np.array(self.words, dtype=np.uint64)
        if words.shape != ((self.n + 63) // 64,):
            raise DomainError("word count does not match length")
        tail = self.n % 64
        if tail and int(words[-1]) >> tail:
            raise DomainError("bits set beyond sequence length")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "BinarySequence":
        arr = np.asarray(list(signs) if not isinstance(signs, np.ndarray) else signs)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("need a non-empty 1-D sign vector")
        if not np.all((arr == 1) | (arr == -1)):
            raise DomainError("elements must be +1 or -1")
        return cls(arr.size, _pack_bits((arr == -1).astype(np.uint8)))

    @classmethod
    def from_string(cls, text: str) -> "BinarySequence":
        return parse_sequence_line(text, 1)

    @classmethod
    def from_int(cls, value: int, n: int) -> "BinarySequence":
        if value < 0 or value >> n:
            raise DomainError(f"{value} does not fit in {n} bits")
        nw = (n + 63) // 64
        raw = value.to_bytes(nw * 8, "little")
        return cls(n, np.frombuffer(raw, dtype="<u8").astype(np.uint64))

    def signs(self) -> np.ndarray:
        return 1 - 2 * _unpack_bits(self.words, self.n).astype(np.int64)

    def as_int(self) -> int:
        return int.from_bytes(self.words.astype("<u8").tobytes(), "little")

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs())

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, BinarySequence):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def __repr__(self):
        s = str(self)
        if len(s) > 40:
            s = s[:37] + "..."
        return f"BinarySequence(n={self.n}, {s!r})"


@dataclass(frozen=True)
class AutocorrelationSpectrum:
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.n:
            raise DomainError("spectrum length must equal n")

    def sidelobes(self) -> tuple[int, ...]:
        return self.values[1:]

    def check(self) -> None:
        """Raise AssertionError unless the parity/magnitude invariants hold."""
        assert self.values[0] == self.n
        for k, c in enumerate(self.values):
            assert abs(c) <= self.n - k
            assert (c - (self.n - k)) % 2 == 0


BARKER_13 = "+++++--++-+-+"


def parse_sequence_line(text: str, line: int = 1) -> BinarySequence:
    text = text.strip()
    if not text:
        raise DomainError(f"line {line}: empty sequence")
    bits = np.empty(len(text), dtype=np.uint8)
    for col, ch in enumerate(text, start=1):
        if ch == "+":
            bits[col - 1] = 0
        elif ch == "-":
            bits[col - 1] = 1
        else:
            raise SequenceParseError(line, col, ch)
    return BinarySequence(len(text), _pack_bits(bits))


def parse_sequences(lines: Iterable[str]) -> Iterator[BinarySequence]:
    """One sequence per line; blank lines are skipped."""
    for i, raw in enumerate(lines, start=1):
        if raw.strip():
            yield parse_sequence_line(raw, i)


def autocorrelation(seq: BinarySequence, k: int) -> int:
    if not 0 <= k <= seq.n - 1:
        raise IndexError(f"shift {k} outside [0, {seq.n - 1}]")
    a = seq.signs()
    return int(np.dot(a[: seq.n - k], a[k:]))


def spectrum_direct(seq: BinarySequence) -> AutocorrelationSpectrum:
    values = _kernels.spectrum_packed(seq.words, seq.n)
    return AutocorrelationSpectrum(seq.n, tuple(int(v) for v in values))


def _transform_rows(signs: np.ndarray):
    """Rounded autocorrelations of each row plus a per-row failure mask."""
    n = signs.shape[-1]
    size = scipy.fft.next_fast_len(2 * n - 1, real=True)
    spec = scipy.fft.rfft(signs.astype(np.float64), n=size, axis=-1)
    raw = scipy.fft.irfft(spec.real**2 + spec.imag**2, n=size, axis=-1)[..., :n]
    rounded = np.rint(raw)
    residual = np.abs(raw - rounded)
    values = rounded.astype(np.int64)
    parity = (values - (n - np.arange(n))) % 2 != 0
    bad = (residual >= 0.5).any(axis=-1) | parity.any(axis=-1)
    return values, bad


def spectrum_transform(seq: BinarySequence) -> AutocorrelationSpectrum:
    """FFT autocorrelation, rounded to integers.

    Raises NumericPrecisionError when any pre-rounding residual reaches 0.5
    or rounding breaks the parity c_k = n - k (mod 2).
    """
    values, bad = _transform_rows(seq.signs())
    if bad:
        raise NumericPrecisionError(f"transform rounding unreliable at n={seq.n}")
    return AutocorrelationSpectrum(seq.n, tuple(int(v) for v in values))


def psl(seq: BinarySequence) -> int:
    if seq.n < 2:
        raise DomainError("peak sidelobe level needs n >= 2")
    return int(_kernels.psl_packed(seq.words, seq.n))


def psl_rows(words: np.ndarray, n: int, direct_below: int = 192) -> np.ndarray:
    """PSL of every row of a packed (rows, nw) array.

    Short sequences use the popcount kernel; longer ones the transform,
    with rows that fail the rounding check recomputed directly.
    """
    if n < 2:
        raise DomainError("peak sidelobe level needs n >= 2")
    words = np.ascontiguousarray(words, dtype=np.uint64)
    if n < direct_below:
        return _kernels.psl_packed_rows(words, n)
    signs = 1.0 - 2.0 * _unpack_bits(words, n)
    values, bad = _transform_rows(signs)
    out = np.abs(values[:, 1:]).max(axis=1)
    if bad.any():
        idx = np.flatnonzero(bad)
        out[idx] = _kernels.psl_packed_rows(words[idx], n)
    return out


def spectrum_rows(words: np.ndarray, n: int, method: str = "direct") -> np.ndarray:
    """Spectra of a (rows, nw) batch of packed sequences, shape (rows, n).

    method="transform" raises NumericPrecisionError if any row fails the
    rounding checks.
    """
    words = np.ascontiguousarray(words, dtype=np.uint64)
    if method == "direct":
        return _kernels.spectrum_packed_rows(words, n)
    if method != "transform":
        raise DomainError(f"unknown method {method!r}")
    values, bad = _transform_rows(1.0 - 2.0 * _unpack_bits(words, n))
    if bad.any():
        raise NumericPrecisionError(f"transform rounding unreliable at n={n}")
    return values


def _negate(a):
    return -a


def _reverse(a):
    return a[::-1]


def _alternate(a):
    out = a.copy()
    out[1::2] *= -1
    return out


def symmetry_images(seq: BinarySequence) -> list[BinarySequence]:
    """The 8 images under <negation, reversal, alternation>, possibly repeated."""
    a = seq.signs()
    images = []
    for b in (a, _reverse(a)):
        for c in (b, _alternate(b)):
            images.append(c)
            images.append(_negate(c))
    return [BinarySequence.from_signs(x) for x in images]


def symmetry_orbit(seq: BinarySequence) -> set[BinarySequence]:
    return set(symmetry_images(seq))


def canonical(seq: BinarySequence) -> BinarySequence:
    """Orbit member with the smallest packed integer value."""
    return min(symmetry_images(seq), key=BinarySequence.as_int)


def constant(n: int, sign: int = 1) -> BinarySequence:
    return BinarySequence.from_signs(np.full(n, sign))


def alternating(n: int) -> BinarySequence:
    return BinarySequence.from_signs(np.where(np.arange(n) % 2 == 0, 1, -1))
