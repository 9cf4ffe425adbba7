"""One-time authentication from hash-then-pad, plus a chained variant.

One-shot MAC: tag = H_s(msg) xor pad, where H_s is the seed-efficient
[T | I] family and the key (seed plus pad) is fresh per message. For a
message of n bits and a t-bit tag the key costs n - 1 + t bits.

Caveat that shapes the chained variant: [T | I] sends a difference
confined to the last t message bits straight through the identity block,
so for those differences the one-shot tag difference is fixed rather
than uniform. The chained MAC therefore routes every data bit through
the Toeplitz block:

- the stream is a 64-bit big-endian bit-length header, the message, and
  zero padding to a block boundary, cut into blocks of b data bits;
- per block the t-bit state takes one Galois step (multiplication by x
  modulo a fixed primitive degree-t polynomial, an invertible map) and
  absorbs the block: state' = step(state) xor T . block;
- the tag is the final state xor the pad.

Because the step is invertible, a difference injected into any single
block reaches the tag unless T itself annihilates it, which over the
seed happens with probability 2^-t. Differences spread over several
blocks face the usual chained-hashing bound of (block count) * 2^-t.

The chained key is a single n-bit block: the first n - t bits seed the
compression, the last t bits are the pad. Block data width is
b = n - 2t + 1, so the key must be longer than twice the tag.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .. import _kernels
from ..bits import BitString
from ..toeplitz import ExtractorParams, SeededHash, extract_fast, hash_matrix


class MacKey(NamedTuple):
    """One-shot key halves: the hash seed and the tag pad."""

    hash_seed: BitString
    pad: BitString


def one_shot_key_len(msg_len: int, tag_len: int) -> int:
    """Key bits consumed by one one-shot tag."""
    if msg_len < 1:
        raise ValueError("message must be at least 1 bit")
    if not 1 <= tag_len <= msg_len:
        raise ValueError("tag length must be 1..message length")
    return msg_len - 1 + tag_len


def split_mac_key(key: BitString, msg_len: int, tag_len: int) -> MacKey:
    """Split raw key material into (hash_seed, pad)."""
    need = one_shot_key_len(msg_len, tag_len)
    if len(key) != need:
        raise ValueError(f"one-shot key must be {need} bits for a "
                         f"{msg_len}-bit message and {tag_len}-bit tag, "
                         f"got {len(key)}")
    return MacKey(hash_seed=key[0:msg_len - 1], pad=key[msg_len - 1:need])


def its_mac_auth(key: MacKey, msg: BitString) -> BitString:
    """Tag a message with a fresh one-shot key.

    Args:
        key: (hash_seed, pad) with |hash_seed| = |msg| - 1 and |pad| the
            tag width.
        msg: message bits.

    Returns:
        tag = H_seed(msg) xor pad.
    """
    tag_len = len(key.pad)
    if len(key.hash_seed) != len(msg) - 1:
        raise ValueError(f"hash seed must be {len(msg) - 1} bits for a "
                         f"{len(msg)}-bit message, got {len(key.hash_seed)}")
    if not 1 <= tag_len <= len(msg):
        raise ValueError("pad length must be 1..message length")
    h = SeededHash(ExtractorParams.modified(len(msg), tag_len), key.hash_seed)
    return extract_fast(h, msg) ^ key.pad


def its_mac_verify(key: MacKey, msg: BitString, tag: BitString) -> bool:
    """Check a one-shot tag; the key must match the one used to tag."""
    if len(tag) != len(key.pad):
        return False
    return its_mac_auth(key, msg) == tag


# low coefficients of one primitive polynomial per degree; bit i is the
# x**i coefficient, so e.g. degree 8 -> 0x1d -> x^8+x^4+x^3+x^2+1
_GALOIS_TAPS = {
    1: 0x1, 2: 0x3, 3: 0x3, 4: 0x3, 5: 0x5, 6: 0x3, 7: 0x3, 8: 0x1d,
    9: 0x11, 10: 0x9, 11: 0x5, 12: 0x53, 13: 0x1b, 14: 0x2b, 15: 0x3,
    16: 0x2d, 17: 0x9, 18: 0x27, 19: 0x27, 20: 0x9, 21: 0x5, 22: 0x3,
    23: 0x21, 24: 0x1b, 25: 0x9, 26: 0x47, 27: 0x27, 28: 0x9, 29: 0x5,
    30: 0x53, 31: 0x9, 32: 0xaf, 33: 0x53, 34: 0xe7, 35: 0x5, 36: 0x77,
    37: 0x3f, 38: 0x63, 39: 0x11, 40: 0x39, 41: 0x9, 42: 0x3f, 43: 0x59,
    44: 0x65, 45: 0x1b, 46: 0x12f, 47: 0x21, 48: 0xb7, 49: 0x71, 50: 0x1d,
    51: 0x4b, 52: 0x9, 53: 0x47, 54: 0x7d, 55: 0x47, 56: 0x95, 57: 0x2d,
    58: 0x63, 59: 0x7b, 60: 0x3, 61: 0x27, 62: 0x69, 63: 0x3, 64: 0x1b,
}


def transcript_mac_block_bits(key_len: int, tag_len: int) -> int:
    """Data bits consumed per compression block."""
    b = key_len - 2 * tag_len + 1
    if b < 1:
        raise ValueError(
            f"chained MAC needs key length >= 2 * tag length "
            f"(got key {key_len}, tag {tag_len})")
    return b


def transcript_mac(fk: BitString, message: bytes, tag_len: int) -> BitString:
    """Tag arbitrary-length bytes with one n-bit one-time key.

    Args:
        fk: fresh key material; its length n fixes the block geometry.
        message: bytes to authenticate.
        tag_len: tag width t, at most 64 bits.

    Returns:
        The t-bit tag.
    """
    n = len(fk)
    t = tag_len
    if not 1 <= t <= 64:
        raise ValueError("tag length must be 1..64 bits")
    b = transcript_mac_block_bits(n, t)
    hash_seed = fk[0:n - t]
    pad = fk[n - t:n]
    h = SeededHash(ExtractorParams.modified(b + t, t), hash_seed)
    # data only ever feeds the Toeplitz block: keep its b columns
    row_words = _kernels.pack_rows(hash_matrix(h)[:, :b])

    header = np.unpackbits(
        np.frombuffer((len(message) * 8).to_bytes(8, "big"), dtype=np.uint8))
    body = np.unpackbits(np.frombuffer(message, dtype=np.uint8))
    stream = np.concatenate([header, body])
    fill = (-stream.size) % b
    if fill:
        stream = np.concatenate([stream, np.zeros(fill, dtype=np.uint8)])
    blocks = stream.reshape(-1, b)
    state = _kernels.chained_mac(row_words, _kernels.pack_rows(blocks), t,
                                 _GALOIS_TAPS[t])
    shifts = np.arange(t, dtype=np.uint64)
    tag_u8 = ((np.uint64(state) >> shifts) & np.uint64(1)).astype(np.uint8)
    return BitString.from_u8(tag_u8) ^ pad


def transcript_mac_verify(fk: BitString, message: bytes,
                          tag: BitString) -> bool:
    """Check a chained tag computed with the same key."""
    return transcript_mac(fk, message, len(tag)) == tag
