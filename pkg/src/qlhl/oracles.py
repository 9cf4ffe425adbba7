"""Exact small-size evaluators for hash universality and output distance.

These functions enumerate seeds and inputs exhaustively, so they are the
ground truth that the analytical bounds and the fast kernels are checked
against. All of them refuse sizes past hard guards rather than silently
taking hours.

Integer encodings match `bits.BitString`: an L-bit string maps to the
integer whose bit (L-1-q) is string index q (index 0 is the most
significant bit). Distributions over L-bit strings are numpy arrays of
length 2**L indexed by that integer value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .bits import BitString
from .toeplitz import ExtractorParams, Family

# enumeration guards: seeds are enumerated as 2**seed_len integers and
# inputs as 2**input_len, so both exponents stay small
MAX_COLLISION_SEED_LEN = 22
MAX_COLLISION_INPUT_LEN = 20
MAX_DIST_INPUT_LEN = 12
MAX_DIST_SEED_LEN = 20


def _check_guard(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise ValueError(f"{what} {value} exceeds enumeration guard {limit}")


def _row_masks(params: ExtractorParams,
               delta: BitString) -> tuple[list[int], list[int]]:
    """Per-output-row seed masks for the difference vector `delta`.

    Output bit i of H_s(delta) equals parity(popcount(sv & mask[i])) xor
    affine[i], where sv is the seed integer with bit b = seed index
    (d-1-b), i.e. the BitString encoding.
    """
    n = params.input_len
    m = params.output_len
    d = params.seed_len
    masks = [0] * m
    affine = [0] * m
    if params.family is Family.REGULAR:
        for i in range(m):
            acc = 0
            for j in range(n):
                if delta[j]:
                    acc |= 1 << (d - 1 - (i - j + n - 1))
            masks[i] = acc
        return masks, affine
    K = n - m
    for i in range(m):
        acc = 0
        for j in range(K):
            if delta[j]:
                q = i - j if i >= j else m - 1 + (j - i)
                acc |= 1 << (d - 1 - q)
        masks[i] = acc
        affine[i] = delta[K + i]
    return masks, affine


def zero_hash_probability(params: ExtractorParams,
                          delta: BitString) -> Fraction:
    """Exact Pr over uniform seeds that H_s(delta) = 0, by enumeration."""
    if len(delta) != params.input_len:
        raise ValueError("delta length must equal input_len")
    _check_guard(params.input_len, MAX_COLLISION_INPUT_LEN, "input_len")
    _check_guard(params.seed_len, MAX_COLLISION_SEED_LEN, "seed_len")
    d = params.seed_len
    masks, affine = _row_masks(params, delta)
    seeds = np.arange(1 << d, dtype=np.uint64)
    ok = np.ones(1 << d, dtype=bool)
    for i in range(params.output_len):
        bit = np.bitwise_count(seeds & np.uint64(masks[i])) & 1
        ok &= bit == affine[i]
    return Fraction(int(ok.sum()), 1 << d)


def collision_probability(params: ExtractorParams, x1: BitString,
                          x2: BitString) -> Fraction:
    """Exact Pr over uniform seeds that H_s(x1) = H_s(x2).

    The hash is GF(2)-linear in its input for every seed, so the
    probability depends only on the difference x1 xor x2.
    """
    if len(x1) != params.input_len or len(x2) != params.input_len:
        raise ValueError("inputs must have length input_len")
    if x1 == x2:
        return Fraction(1)
    return zero_hash_probability(params, x1 ^ x2)


def _column_values_all_seeds(params: ExtractorParams) -> np.ndarray:
    """Column j of the Toeplitz block as an m-bit integer, for all seeds.

    Returns an array of shape (2**d, K) (regular family: K = n) where
    entry [sv, j] has bit (m-1-i) equal to matrix entry [i][j] under
    seed integer sv.
    """
    n = params.input_len
    m = params.output_len
    d = params.seed_len
    K = n - m if params.family is Family.MODIFIED else n
    seeds = np.arange(1 << d, dtype=np.uint64)
    cols = np.zeros((1 << d, K), dtype=np.uint32)
    for j in range(K):
        for i in range(m):
            if params.family is Family.MODIFIED:
                q = i - j if i >= j else m - 1 + (j - i)
            else:
                q = i - j + n - 1
            bit = ((seeds >> np.uint64(d - 1 - q)) & 1).astype(np.uint32)
            cols[:, j] |= bit << np.uint32(m - 1 - i)
    return cols


def _per_seed_output_dists(
        params: ExtractorParams,
        input_dist: np.ndarray) -> Iterator[np.ndarray]:
    """Yield the exact output distribution for each seed integer in order."""
    n = params.input_len
    m = params.output_len
    modified = params.family is Family.MODIFIED
    K = n - m if modified else n
    cols = _column_values_all_seeds(params)
    tvals = np.arange(1 << m, dtype=np.uint32)
    for sv in range(1 << params.seed_len):
        # subset-xor dynamic program: block output for every head value
        t_all = np.zeros(1 << K, dtype=np.uint32)
        row = cols[sv]
        for p in range(K):
            # integer bit p of the head toggles input column K-1-p
            t_all[1 << p: 2 << p] = t_all[: 1 << p] ^ row[K - 1 - p]
        if modified:
            z_all = (t_all[:, None] ^ tvals[None, :]).ravel()
        else:
            z_all = t_all
        yield np.bincount(z_all, weights=input_dist, minlength=1 << m)


def _check_dist_args(params: ExtractorParams, input_dist: np.ndarray,
                     seed_dist: Optional[np.ndarray]) -> np.ndarray:
    _check_guard(params.input_len, MAX_DIST_INPUT_LEN, "input_len")
    _check_guard(params.seed_len, MAX_DIST_SEED_LEN, "seed_len")
    if input_dist.shape != (1 << params.input_len,):
        raise ValueError("input_dist must have 2**input_len entries")
    if seed_dist is None:
        seed_dist = np.full(1 << params.seed_len,
                            1.0 / (1 << params.seed_len))
    elif seed_dist.shape != (1 << params.seed_len,):
        raise ValueError("seed_dist must have 2**seed_len entries")
    return seed_dist


def exact_extraction_distance(params: ExtractorParams,
                              input_dist: np.ndarray,
                              seed_dist: Optional[np.ndarray] = None
                              ) -> float:
    """Exact distance of (output, seed) from (uniform, seed).

    Computes sum_s P[s] * (1/2) sum_z |P[z | s] - 2**-m|, the trace
    distance between the joint distribution of hash output and seed and
    an ideal uniform output carrying the same seed marginal.

    Args:
        params: hash family and dimensions.
        input_dist: probabilities over all 2**n inputs (integer-indexed).
        seed_dist: optional seed weights, uniform when omitted.

    Returns:
        The joint distance as a float in [0, 1].
    """
    seed_dist = _check_dist_args(params, input_dist, seed_dist)
    m = params.output_len
    u = 1.0 / (1 << m)
    total = 0.0
    for sv, out in enumerate(_per_seed_output_dists(params, input_dist)):
        w = float(seed_dist[sv])
        if w:
            total += w * 0.5 * float(np.abs(out - u).sum())
    return total


def exact_output_distance(params: ExtractorParams,
                          input_dist: np.ndarray,
                          seed_dist: Optional[np.ndarray] = None) -> float:
    """Exact distance of the output marginal (seed averaged out) from uniform.

    This is the quantity that stays small even for a nonuniform seed as
    long as the seed's entropy deficit is paid for; it never exceeds the
    joint distance from `exact_extraction_distance`.
    """
    seed_dist = _check_dist_args(params, input_dist, seed_dist)
    m = params.output_len
    mix = np.zeros(1 << m)
    for sv, out in enumerate(_per_seed_output_dists(params, input_dist)):
        w = float(seed_dist[sv])
        if w:
            mix += w * out
    return 0.5 * float(np.abs(mix - 1.0 / (1 << m)).sum())


def matrix_rank_gf2(mat: np.ndarray) -> int:
    """Rank of a 0/1 matrix over GF(2) by row elimination."""
    rows = [int.from_bytes(np.packbits(r.astype(np.uint8)).tobytes(), "big")
            for r in np.atleast_2d(mat)]
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        cur = r
        while cur:
            high = cur.bit_length()
            if high in pivots:
                cur ^= pivots[high]
            else:
                pivots[high] = cur
                rank += 1
                break
    return rank
