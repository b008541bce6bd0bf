"""Compiled inner loops shared by the sequence, exact and Monte Carlo modules.

All packed words are uint64 with bit j of the sequence at bit (j % 64) of
word j // 64; a set bit is -1.  Every constant that meets a uint64 operand is
itself a uint64 so numba never promotes to float64.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_LO32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S56 = np.uint64(56)

_PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
_PHILOX_M1 = np.uint64(0xCA5A826395121157)
_PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
_PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> _S56)


@njit(cache=True)
def _disagreements(pad, length, k):
    # popcount of A xor (A >> k) over the first `length` positions; pad is
    # the packed sequence followed by one zero word
    q = k // 64
    r = np.uint64(k % 64)
    full = length // 64
    rem = length % 64
    dis = 0
    if r == 0:
        for w in range(full):
            dis += popcount64(pad[w] ^ pad[w + q])
        if rem:
            mask = (_ONE << np.uint64(rem)) - _ONE
            dis += popcount64((pad[full] ^ pad[full + q]) & mask)
    else:
        left = np.uint64(64) - r
        for w in range(full):
            dis += popcount64(pad[w] ^ ((pad[w + q] >> r) | (pad[w + q + 1] << left)))
        if rem:
            mask = (_ONE << np.uint64(rem)) - _ONE
            shifted = (pad[full + q] >> r) | (pad[full + q + 1] << left)
            dis += popcount64((pad[full] ^ shifted) & mask)
    return dis


@njit(cache=True)
def _padded(words):
    pad = np.zeros(words.shape[0] + 1, dtype=np.uint64)
    pad[:words.shape[0]] = words
    return pad


@njit(cache=True)
def spectrum_packed(words, n):
    """c_k = (n - k) - 2 * popcount(A xor (A >> k)) over the n - k overlap."""
    pad = _padded(words)
    out = np.empty(n, dtype=np.int64)
    for k in range(n):
        out[k] = (n - k) - 2 * _disagreements(pad, n - k, k)
    return out


@njit(cache=True)
def psl_packed(words, n):
    pad = _padded(words)
    best = 0
    for k in range(1, n):
        c = abs((n - k) - 2 * _disagreements(pad, n - k, k))
        if c > best:
            best = c
    return best


@njit(cache=True)
def psl_packed_rows(rows, n):
    out = np.empty(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[0]):
        out[i] = psl_packed(rows[i], n)
    return out


@njit(cache=True)
def spectrum_packed_rows(rows, n):
    out = np.empty((rows.shape[0], n), dtype=np.int64)
    for i in range(rows.shape[0]):
        out[i] = spectrum_packed(rows[i], n)
    return out


# --- counter-based generator -------------------------------------------------


@njit(cache=True)
def _mulhilo(a, b):
    a_lo = a & _LO32
    a_hi = a >> _S32
    b_lo = b & _LO32
    b_hi = b >> _S32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    mid = (p0 >> _S32) + (p1 & _LO32) + (p2 & _LO32)
    hi = p3 + (p1 >> _S32) + (p2 >> _S32) + (mid >> _S32)
    return hi, a * b


@njit(cache=True)
def philox4x64(c0, c1, c2, c3, k0, k1):
    for rnd in range(10):
        if rnd > 0:
            k0 = k0 + _PHILOX_W0
            k1 = k1 + _PHILOX_W1
        hi0, lo0 = _mulhilo(_PHILOX_M0, c0)
        hi1, lo1 = _mulhilo(_PHILOX_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


@njit(cache=True)
def philox_trial_words(key_lo, key_hi, first_trial, count, nw):
    """Raw words of trials first_trial .. first_trial+count-1.

    Trial t reads the stream of numpy's Philox(key, counter=[0, 0, 0, t]):
    the b-th output block comes from counter (b + 1, 0, 0, t), lanes in order.
    """
    out = np.empty((count, nw), dtype=np.uint64)
    zero = np.uint64(0)
    for i in range(count):
        t = np.uint64(first_trial + i)
        nblocks = (nw + 3) // 4
        for b in range(nblocks):
            r0, r1, r2, r3 = philox4x64(np.uint64(b + 1), zero, zero, t, key_lo, key_hi)
            base = 4 * b
            if base < nw:
                out[i, base] = r0
            if base + 1 < nw:
                out[i, base + 1] = r1
            if base + 2 < nw:
                out[i, base + 2] = r2
            if base + 3 < nw:
                out[i, base + 3] = r3
    return out


@njit(cache=True)
def rademacher_sums(rows, k):
    """Sum of k signs whose bits are the low k bits of each row."""
    out = np.empty(rows.shape[0], dtype=np.int64)
    full = k // 64
    rem = k % 64
    for i in range(rows.shape[0]):
        ones = 0
        for w in range(full):
            ones += popcount64(rows[i, w])
        if rem:
            ones += popcount64(rows[i, full] & ((_ONE << np.uint64(rem)) - _ONE))
        out[i] = k - 2 * ones
    return out


# --- exhaustive enumeration (n <= 30, sequence held in one int64) -----------


@njit(cache=True)
def _signs_of(x, n):
    a = np.empty(n, dtype=np.int64)
    for j in range(n):
        a[j] = -1 if (x >> j) & 1 else 1
    return a


@njit(cache=True)
def _full_spectrum(a, n):
    c = np.zeros(n, dtype=np.int64)
    for k in range(n):
        s = 0
        for j in range(n - k):
            s += a[j] * a[j + k]
        c[k] = s
    return c


@njit(cache=True)
def _flip(a, c, n, i):
    # a_i -> -a_i; c_k loses 2 * a_i * (a_{i+k} + a_{i-k})
    s = a[i]
    for k in range(1, n):
        d = 0
        if i + k < n:
            d += a[i + k]
        if i - k >= 0:
            d += a[i - k]
        c[k] -= 2 * s * d
    a[i] = -s


@njit(cache=True)
def _ctz(i):
    b = 0
    while (i & 1) == 0:
        i >>= 1
        b += 1
    return b


@njit(cache=True)
def _peak(c, n):
    best = 0
    for k in range(1, n):
        v = abs(c[k])
        if v > best:
            best = v
    return best


@njit(cache=True)
def _reverse(x, n):
    r = 0
    for j in range(n):
        if (x >> j) & 1:
            r |= 1 << (n - 1 - j)
    return r


@njit(cache=True)
def orbit_images(x, n):
    full = (1 << n) - 1
    alt = 0
    for j in range(1, n, 2):
        alt |= 1 << j
    r = _reverse(x, n)
    masks = (0, full, alt, full ^ alt)
    out = np.empty(8, dtype=np.int64)
    for i in range(4):
        out[i] = x ^ masks[i]
        out[4 + i] = r ^ masks[i]
    return out


@njit(cache=True)
def _canonical_weight(x, n):
    """Orbit size if x is the smallest member of its orbit, else 0."""
    imgs = orbit_images(x, n)
    for i in range(8):
        if imgs[i] < x:
            return 0
    imgs.sort()
    size = 1
    for i in range(1, 8):
        if imgs[i] != imgs[i - 1]:
            size += 1
    return size


@njit(cache=True)
def scan_plain(n, m, prefix):
    """Gray-code walk over the low m bits below a fixed prefix.

    Returns (weighted PSL histogram, min PSL, packed witness).
    """
    x = prefix << m
    a = _signs_of(x, n)
    c = _full_spectrum(a, n)
    hist = np.zeros(n, dtype=np.int64)
    best = n
    best_x = x
    for i in range(1 << m):
        if i > 0:
            b = _ctz(i)
            _flip(a, c, n, b)
            x ^= 1 << b
        mu = _peak(c, n)
        hist[mu] += 1
        if mu < best:
            best = mu
            best_x = x
    return hist, best, best_x


@njit(cache=True)
def scan_symmetric(n, m, prefix):
    """As scan_plain, but only canonical orbit representatives are scored,
    each weighted by its exact orbit size."""
    x = prefix << m
    a = _signs_of(x, n)
    c = _full_spectrum(a, n)
    hist = np.zeros(n, dtype=np.int64)
    best = n
    best_x = x
    scanned = 0
    for i in range(1 << m):
        if i > 0:
            b = _ctz(i)
            _flip(a, c, n, b)
            x ^= 1 << b
        w = _canonical_weight(x, n)
        if w == 0:
            continue
        scanned += 1
        mu = _peak(c, n)
        hist[mu] += w
        if mu < best:
            best = mu
            best_x = x
    return hist, best, best_x, scanned


@njit(cache=True)
def term_tables(n):
    """counts[k, v + n] = number of sequences in B_n with c_k = v."""
    counts = np.zeros((n, 2 * n + 1), dtype=np.int64)
    a = _signs_of(0, n)
    c = _full_spectrum(a, n)
    for i in range(1 << n):
        if i > 0:
            _flip(a, c, n, _ctz(i))
        for k in range(n):
            counts[k, c[k] + n] += 1
    return counts


@njit(cache=True)
def _corr(a, n, k):
    s = 0
    for j in range(n - k):
        s += a[j] * a[j + k]
    return s


@njit(cache=True)
def psl_at_most(n, m):
    """Depth-first search for a sequence with PSL <= m.

    Positions are filled from both ends (0, n-1, 1, n-2, ...).  Once t
    elements sit at each end, c_{n-t} is fully determined and is pruned if
    it exceeds m.  a_0 = a_1 = +1 by negation and alternation symmetry.
    Returns (found, signs, nodes visited).
    """
    order = np.empty(n, dtype=np.int64)
    lo, hi = 0, n - 1
    for d in range(n):
        if d % 2 == 0:
            order[d] = lo
            lo += 1
        else:
            order[d] = hi
            hi -= 1
    a = np.zeros(n, dtype=np.int64)
    tried = np.zeros(n + 1, dtype=np.int64)
    nodes = 0
    d = 0
    while d >= 0:
        if tried[d] == 2:
            tried[d] = 0
            a[order[d]] = 0
            d -= 1
            continue
        v = 1 if tried[d] == 0 else -1
        tried[d] += 1
        p = order[d]
        if p <= 1 and v == -1:
            continue
        a[p] = v
        nodes += 1
        placed = d + 1
        ok = True
        if placed == n:
            for k in range(1, n):
                if abs(_corr(a, n, k)) > m:
                    ok = False
                    break
            if ok:
                return True, a.copy(), nodes
            continue
        if placed % 2 == 0:
            k = n - placed // 2
            if k >= 1 and abs(_corr(a, n, k)) > m:
                ok = False
        if ok:
            d += 1
            tried[d] = 0
    return False, a, nodes
