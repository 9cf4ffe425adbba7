"""Tests for the packed-word kernels and backend selection."""

import os
import subprocess
import sys

import numpy as np
import pytest

from qlhl import _kernels
from qlhl.bits import BitString
from qlhl.toeplitz import ExtractorParams, SeededHash, extract, extract_fast


def _random_case(rng, max_n=512):
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, n + 1))
    modified = bool(rng.integers(0, 2))
    params = (ExtractorParams.modified(n, m) if modified
              else ExtractorParams.regular(n, m))
    seed = rng.integers(0, 2, params.seed_len, dtype=np.uint8)
    x = rng.integers(0, 2, n, dtype=np.uint8)
    return modified, seed, n, m, x


def test_pack_rows_is_lsb_first_per_row():
    bits = np.zeros((2, 70), dtype=np.uint8)
    bits[0, 0] = 1    # word 0 bit 0
    bits[0, 65] = 1   # word 1 bit 1
    bits[1, 63] = 1   # word 0 bit 63
    words = _kernels.pack_rows(bits)
    assert words.shape == (2, 2)
    assert words[0, 0] == 1 and words[0, 1] == 2
    assert words[1, 0] == 1 << 63 and words[1, 1] == 0


def test_backend_reports_active_kernel():
    assert _kernels.backend() in ("numba", "numpy")
    with _kernels.use_backend("numpy"):
        assert _kernels.backend() == "numpy"
    with pytest.raises(ValueError):
        with _kernels.use_backend("cuda"):
            pass


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not installed")
def test_backends_agree_on_matvec():
    rng = np.random.default_rng(11)
    for _ in range(200):
        modified, seed, n, m, x = _random_case(rng)
        with _kernels.use_backend("numba"):
            fast = _kernels.matvec_bits(modified, seed, n, m, x)
        with _kernels.use_backend("numpy"):
            slow = _kernels.matvec_bits(modified, seed, n, m, x)
        assert np.array_equal(fast, slow)


def test_numpy_backend_matches_reference_extract():
    rng = np.random.default_rng(12)
    with _kernels.use_backend("numpy"):
        for _ in range(50):
            modified, seed, n, m, x = _random_case(rng, max_n=128)
            params = (ExtractorParams.modified(n, m) if modified
                      else ExtractorParams.regular(n, m))
            h = SeededHash(params, BitString.from_u8(seed))
            assert extract_fast(h, BitString.from_u8(x)) == \
                extract(h, BitString.from_u8(x))


def _chained_reference(rows, blocks, t, taps):
    # bit-at-a-time model: invertible shift step, then absorb T . block
    state = 0
    for blk in blocks:
        fb = taps if state >> (t - 1) & 1 else 0
        state = ((state << 1) & ((1 << t) - 1)) ^ fb
        for i, row in enumerate(rows):
            state ^= (int(np.dot(row, blk)) & 1) << i
    return state


@pytest.mark.parametrize("t", [1, 2, 7, 16, 33, 64])
def test_chained_mac_matches_bit_model(t):
    rng = np.random.default_rng(13)
    taps = {1: 0x1, 2: 0x3, 7: 0x3, 16: 0x2d, 33: 0x53, 64: 0x1b}[t]
    b = int(rng.integers(1, 150))
    rows = rng.integers(0, 2, (t, b), dtype=np.uint8)
    blocks = rng.integers(0, 2, (5, b), dtype=np.uint8)
    want = _chained_reference(rows, blocks, t, taps)
    row_words = _kernels.pack_rows(rows)
    block_words = _kernels.pack_rows(blocks)
    assert _kernels.chained_mac(row_words, block_words, t, taps) == want
    with _kernels.use_backend("numpy"):
        assert _kernels.chained_mac(row_words, block_words, t, taps) == want


def test_chained_mac_rejects_bad_state_width():
    words = np.zeros((1, 1), dtype=np.uint64)
    with pytest.raises(ValueError):
        _kernels.chained_mac(words, words, 0, 0x1)
    with pytest.raises(ValueError):
        _kernels.chained_mac(words, words, 65, 0x1)


def test_pure_numpy_env_flag_disables_numba():
    env = dict(os.environ, QLHL_PURE_NUMPY="1")
    code = ("import qlhl._kernels as k; "
            "assert k.backend() == 'numpy', k.backend(); print('ok')")
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "ok"
