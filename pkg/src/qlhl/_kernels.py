"""Word-packed GF(2) Toeplitz matrix-vector kernels.

Two interchangeable backends compute the same bit-exact result:

- a numba-compiled row-stepping kernel over packed uint64 words,
  O(n * m / 64), used when numba is importable;
- a pure-numpy path that evaluates the Toeplitz block as a binary
  convolution (O(n * m) scalar work in C), used as the fallback.

Set the environment variable QLHL_PURE_NUMPY=1 to force the numpy path
even when numba is installed. `use_backend()` overrides the selection
for a scope, which is how the benchmark compares the two paths inside
one process.

Packing convention: bit index b lives in word b // 64 at position b % 64
(LSB-first within the word). The row register walks the Toeplitz block
one diagonal per output bit; bits shifted past the block width fall into
positions that the zero-padded operand masks out, and are cleared anyway
to keep the register exact.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

_FORCE_NUMPY = os.environ.get("QLHL_PURE_NUMPY", "") not in ("", "0")

if not _FORCE_NUMPY:
    try:
        from numba import njit
        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False
else:
    HAS_NUMBA = False

_backend = "numba" if HAS_NUMBA else "numpy"


def backend() -> str:
    """Name of the currently selected kernel backend."""
    return _backend


@contextmanager
def use_backend(name: str):
    """Temporarily force a backend ('numba' or 'numpy')."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable")
    previous = _backend
    _backend = name
    try:
        yield
    finally:
        _backend = previous


def _pack_words(bits_u8: np.ndarray) -> np.ndarray:
    """Pack 0/1 uint8 entries into uint64 words, bit b at word b//64."""
    n = int(bits_u8.size)
    if n == 0:
        return np.zeros(1, dtype=np.uint64)
    pad = (-n) % 64
    if pad:
        bits_u8 = np.concatenate([bits_u8, np.zeros(pad, dtype=np.uint8)])
    packed = np.packbits(bits_u8, bitorder="little")
    # force little-endian word semantics independent of platform
    return np.frombuffer(packed.tobytes(), dtype="<u8").astype(np.uint64)


def pack_rows(bits_2d: np.ndarray) -> np.ndarray:
    """Pack each row of a 0/1 uint8 matrix into uint64 words.

    Same bit convention as `_pack_words`, applied row-wise. Returns a
    (rows, ceil(cols / 64)) uint64 array.
    """
    rows, cols = bits_2d.shape
    nw = max(1, (cols + 63) // 64)
    pad = nw * 64 - cols
    if pad:
        bits_2d = np.concatenate(
            [bits_2d, np.zeros((rows, pad), dtype=np.uint8)], axis=1)
    packed = np.packbits(bits_2d, axis=1, bitorder="little")
    flat = np.frombuffer(np.ascontiguousarray(packed).tobytes(), dtype="<u8")
    return flat.reshape(rows, nw).astype(np.uint64)


if HAS_NUMBA:

    @njit(cache=True)
    def _parity64(x: np.uint64) -> np.uint64:
        x ^= x >> np.uint64(32)
        x ^= x >> np.uint64(16)
        x ^= x >> np.uint64(8)
        x ^= x >> np.uint64(4)
        x ^= x >> np.uint64(2)
        x ^= x >> np.uint64(1)
        return x & np.uint64(1)

    @njit(cache=True)
    def _getbit(words: np.ndarray, idx: int) -> np.uint64:
        return (words[idx >> 6] >> np.uint64(idx & 63)) & np.uint64(1)

    @njit(cache=True)
    def _toeplitz_rows_packed(seed_words, first_col_start, width, m,
                              operand_words, tail_u8, out_u8):
        """Shared row-stepping multiply.

        Row i of the block is a `width`-bit register; stepping to row i+1
        shifts every bit up one column and inserts the next first-column
        seed bit at column 0. Output bit i is parity(row & operand) xor
        tail[i] (tail is the identity-block contribution, all zeros for
        the plain Toeplitz family).
        """
        nw = max(1, (width + 63) >> 6)
        row = np.zeros(nw, dtype=np.uint64)
        if width > 0:
            # first row: column 0 holds the first first-column bit, the
            # rest of the row continues along the seed tail
            if _getbit(seed_words, first_col_start):
                row[0] |= np.uint64(1)
            for j in range(1, width):
                if _getbit(seed_words, first_col_start + m - 1 + j):
                    row[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        rem = width & 63
        last_mask = (np.uint64(1) << np.uint64(rem)) - np.uint64(1) if rem \
            else ~np.uint64(0)
        for i in range(m):
            acc = np.uint64(0)
            for w in range(nw):
                acc ^= row[w] & operand_words[w]
            out_u8[i] = np.uint8(_parity64(acc) ^ np.uint64(tail_u8[i]))
            if i + 1 < m and width > 0:
                carry = np.uint64(0)
                for w in range(nw):
                    nxt = row[w] >> np.uint64(63)
                    row[w] = (row[w] << np.uint64(1)) | carry
                    carry = nxt
                row[nw - 1] &= last_mask
                if _getbit(seed_words, first_col_start + i + 1):
                    row[0] |= np.uint64(1)


def _modified_numba(seed_u8, n, m, x_u8):
    K = n - m
    out = np.empty(m, dtype=np.uint8)
    seed_words = _pack_words(seed_u8)
    xlow_words = _pack_words(x_u8[:K])
    xhigh = np.ascontiguousarray(x_u8[K:])
    # block rows are indexed by seed bits 0..m-1 (first column) and
    # m..n-2 (rest of the first row); first_col_start = 0
    _toeplitz_rows_packed(seed_words, 0, K, m, xlow_words, xhigh, out)
    return out


def _regular_numba(seed_u8, n, m, x_u8):
    out = np.empty(m, dtype=np.uint8)
    # reindex so that the first column starts at 0 in the shared kernel:
    # rows use seed bits n-1.. (first column) and 0..n-2 (first row tail,
    # reversed); easiest is to remap the seed into the kernel's layout.
    remapped = np.empty(m + n - 1, dtype=np.uint8)
    remapped[:m] = seed_u8[n - 1:]            # first column: T[i][0]=s[i+n-1]
    if n > 1:
        # first-row tail: T[0][j] = s[n-1-j] for j = 1..n-1
        remapped[m:] = seed_u8[n - 2::-1]
    seed_words = _pack_words(remapped)
    x_words = _pack_words(x_u8)
    tail = np.zeros(m, dtype=np.uint8)
    _toeplitz_rows_packed(seed_words, 0, n, m, x_words, tail, out)
    return out


def _modified_numpy(seed_u8, n, m, x_u8):
    K = n - m
    xhigh = x_u8[K:].astype(np.uint8)
    if K == 0:
        return xhigh.copy()
    # Toeplitz-times-vector as a convolution: lay the block's defining
    # diagonals on one axis a[], with a[K-1+p] the diagonal offset p
    a = np.empty(n - 1, dtype=np.int64)
    if K >= 2:
        a[: K - 1] = seed_u8[n - K: n - 1][::-1]  # above-diagonal entries
    a[K - 1:] = seed_u8[:m]                       # main and below: s[i-j]
    conv = np.convolve(a, x_u8[:K].astype(np.int64))
    return ((conv[K - 1: K - 1 + m] & 1) ^ xhigh).astype(np.uint8)


def _regular_numpy(seed_u8, n, m, x_u8):
    # T[i][j] = s[i-j+n-1]: row i of T.x is coefficient n-1+i of the
    # polynomial product seed(t) * x(t) over GF(2)
    conv = np.convolve(seed_u8.astype(np.int64), x_u8.astype(np.int64))
    return (conv[n - 1: n - 1 + m] & 1).astype(np.uint8)


if HAS_NUMBA:

    @njit(cache=True)
    def _chained_mac_numba(row_words, block_words, t, taps):
        nblocks, nw = block_words.shape
        top = np.uint64(1) << np.uint64(t - 1)
        mask = ~np.uint64(0) if t == 64 \
            else (np.uint64(1) << np.uint64(t)) - np.uint64(1)
        state = np.uint64(0)
        for blk in range(nblocks):
            fb = taps if state & top else np.uint64(0)
            state = ((state << np.uint64(1)) & mask) ^ fb
            for i in range(t):
                acc = row_words[i, 0] & block_words[blk, 0]
                for w in range(1, nw):
                    acc ^= row_words[i, w] & block_words[blk, w]
                state ^= _parity64(acc) << np.uint64(i)
        return state


def _chained_mac_numpy(row_words, block_words, t, taps):
    shifts = np.arange(t, dtype=np.uint64)
    top = 1 << (t - 1)
    mask = (1 << t) - 1
    state = 0
    for blk in range(block_words.shape[0]):
        acc = np.bitwise_xor.reduce(
            row_words & block_words[blk][None, :], axis=1)
        bits = (np.bitwise_count(acc) & 1).astype(np.uint64)
        mixed = int(np.bitwise_or.reduce(bits << shifts)) if t else 0
        fb = taps if state & top else 0
        state = ((state << 1) & mask) ^ fb ^ mixed
    return state


def chained_mac(row_words: np.ndarray, block_words: np.ndarray,
                t: int, taps: int) -> int:
    """Run the chained compression over packed message blocks.

    Per block the t-bit running state takes one Galois step (shift left,
    feeding the dropped top bit back through `taps`, the low coefficients
    of a primitive degree-t polynomial) and absorbs the block through the
    packed hash rows: state <- step(state) xor rows * block over GF(2).
    The Galois step is a fixed invertible map, so a difference injected
    into any block survives to the final state unless the hash rows
    themselves annihilate it.

    Args:
        row_words: (t, nw) packed hash rows over the block columns.
        block_words: (nblocks, nw) packed data blocks.
        t: state width in bits, at most 64.
        taps: feedback bit mask, bit i for the x**i coefficient.

    Returns:
        Final state as an int with row-i parity at bit position i.
    """
    if not 0 < t <= 64:
        raise ValueError("state width must be 1..64 bits")
    if _backend == "numba":
        return int(_chained_mac_numba(row_words, block_words, t,
                                      np.uint64(taps)))
    return int(_chained_mac_numpy(row_words, block_words, t, taps))


def matvec_bits(modified: bool, seed_u8: np.ndarray, n: int, m: int,
                x_u8: np.ndarray) -> np.ndarray:
    """Multiply the seeded hash matrix by input bits, returning m bits.

    Args:
        modified: True for the [T | I] family, False for plain Toeplitz.
        seed_u8: seed bits as a 0/1 uint8 array (n-1 or m+n-1 entries).
        n: input length in bits.
        m: output length in bits.
        x_u8: input bits as a 0/1 uint8 array of n entries.

    Returns:
        Output bits as a 0/1 uint8 array of m entries.
    """
    if _backend == "numba":
        if modified:
            return _modified_numba(seed_u8, n, m, x_u8)
        return _regular_numba(seed_u8, n, m, x_u8)
    if modified:
        return _modified_numpy(seed_u8, n, m, x_u8)
    return _regular_numpy(seed_u8, n, m, x_u8)
