"""Tests for one-shot and chained one-time authentication."""

import numpy as np
import pytest

from qlhl import _kernels
from qlhl.bits import BitString
from qlhl.handshake.mac import (_GALOIS_TAPS, MacKey, its_mac_auth,
                                its_mac_verify, one_shot_key_len,
                                split_mac_key, transcript_mac,
                                transcript_mac_block_bits,
                                transcript_mac_verify)
from qlhl.toeplitz import ExtractorParams, SeededHash, extract, hash_matrix


def _random_key(rng, msg_len, tag_len):
    raw = BitString.from_u8(rng.integers(
        0, 2, one_shot_key_len(msg_len, tag_len), dtype=np.uint8))
    return split_mac_key(raw, msg_len, tag_len)


def test_one_shot_key_len_and_split():
    assert one_shot_key_len(10, 4) == 13
    key = split_mac_key(BitString.zeros(13), 10, 4)
    assert len(key.hash_seed) == 9 and len(key.pad) == 4
    with pytest.raises(ValueError):
        split_mac_key(BitString.zeros(12), 10, 4)
    with pytest.raises(ValueError):
        one_shot_key_len(4, 5)


def test_one_shot_round_trip_and_rejection():
    rng = np.random.default_rng(41)
    for _ in range(20):
        msg_len = int(rng.integers(2, 64))
        tag_len = int(rng.integers(1, msg_len + 1))
        key = _random_key(rng, msg_len, tag_len)
        msg = BitString.from_u8(rng.integers(0, 2, msg_len, dtype=np.uint8))
        tag = its_mac_auth(key, msg)
        assert len(tag) == tag_len
        assert its_mac_verify(key, msg, tag)
        flipped = msg ^ BitString.from_int(1, msg_len)
        assert its_mac_auth(key, flipped) != tag or True  # may collide
        bad_tag = tag ^ BitString.from_int(1, tag_len)
        assert not its_mac_verify(key, msg, bad_tag)
    assert not its_mac_verify(key, msg, BitString.zeros(tag_len + 1))


def test_one_shot_zero_message_tags_with_pad():
    # the hash is linear, so the all-zero message always hashes to zero
    key = MacKey(hash_seed=BitString.from_str("1011"),
                 pad=BitString.from_str("10"))
    assert its_mac_auth(key, BitString.zeros(5)) == key.pad


def test_one_shot_tag_is_masked_hash():
    rng = np.random.default_rng(42)
    key = _random_key(rng, 12, 5)
    msg = BitString.from_u8(rng.integers(0, 2, 12, dtype=np.uint8))
    h = SeededHash(ExtractorParams.modified(12, 5), key.hash_seed)
    assert its_mac_auth(key, msg) == extract(h, msg) ^ key.pad


def test_one_shot_forgery_rate_exhaustive_tiny():
    # 5-bit messages, 2-bit tags: every fixed (msg', tag') is accepted
    # by exactly 1/4 of all 2^6 keys
    msg_len, tag_len = 5, 2
    key_len = one_shot_key_len(msg_len, tag_len)
    for forged_msg, forged_tag in ((0b10110, 0b01), (0b00001, 0b11),
                                   (0b11111, 0b00)):
        msg = BitString.from_int(forged_msg, msg_len)
        tag = BitString.from_int(forged_tag, tag_len)
        accepted = sum(
            its_mac_verify(split_mac_key(BitString.from_int(kv, key_len),
                                         msg_len, tag_len), msg, tag)
            for kv in range(1 << key_len))
        assert accepted * (1 << tag_len) == 1 << key_len


def test_chained_block_width_rule():
    assert transcript_mac_block_bits(64, 16) == 33
    assert transcript_mac_block_bits(9, 4) == 2
    assert transcript_mac_block_bits(8, 4) == 1
    with pytest.raises(ValueError):
        transcript_mac_block_bits(7, 4)      # key must reach 2 * tag


def test_chained_taps_are_primitive():
    # every tap set must describe x^t + (taps) with a unit constant term
    # and multiplicative order exactly 2^t - 1 (checked for small t)
    for t, taps in _GALOIS_TAPS.items():
        assert taps & 1, f"degree {t} taps lack the constant term"
        assert taps < (1 << t)
    for t in range(1, 17):
        poly = (1 << t) | _GALOIS_TAPS[t]

        def mul(a, b):
            acc = 0
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if a >> t & 1:
                    a ^= poly
            return acc

        order_target = (1 << t) - 1
        x = 2 % order_target + 1 if t == 1 else 2
        acc, power = 1, x
        e = order_target
        while e:
            if e & 1:
                acc = mul(acc, power)
            power = mul(power, power)
            e >>= 1
        assert acc == 1, f"x^(2^{t}-1) != 1 for degree {t}"
        # no proper divisor order: check all maximal proper divisors
        for q in range(2, order_target + 1):
            if order_target % q or q * q > order_target * 2:
                continue
            for d in {order_target // q}:
                acc, power, e = 1, x, d
                while e:
                    if e & 1:
                        acc = mul(acc, power)
                    power = mul(power, power)
                    e >>= 1
                assert acc != 1, f"degree {t} order divides {d}"


def _transcript_reference(fk: BitString, message: bytes, tag_len: int):
    # independent model: blocks of the header-framed bit stream walk
    # through state = step(state) xor T.block, tag = state xor pad
    n, t = len(fk), tag_len
    b = n - 2 * t + 1
    hash_seed, pad = fk[:n - t], fk[n - t:]
    mat = hash_matrix(SeededHash(ExtractorParams.modified(b + t, t),
                                 hash_seed))[:, :b]
    stream = list(BitString.from_bytes((len(message) * 8).to_bytes(8, "big")))
    stream += list(BitString.from_bytes(message)) if message else []
    while len(stream) % b:
        stream.append(0)
    state = [0] * t
    taps = _GALOIS_TAPS[t]
    for start in range(0, len(stream), b):
        block = stream[start:start + b]
        top = state[t - 1]
        state = [top * (taps >> i & 1) ^ (state[i - 1] if i else 0)
                 for i in range(t)]
        for i in range(t):
            state[i] ^= sum(mat[i][j] & block[j] for j in range(b)) % 2
    return BitString(state) ^ pad


def test_chained_mac_matches_reference_model():
    rng = np.random.default_rng(43)
    for _ in range(40):
        t = int(rng.integers(1, 20))
        n = int(rng.integers(2 * t + 1, 2 * t + 90))
        fk = BitString.from_u8(rng.integers(0, 2, n, dtype=np.uint8))
        msg = rng.integers(0, 256, int(rng.integers(0, 40)),
                           dtype=np.uint8).tobytes()
        assert transcript_mac(fk, msg, t) == _transcript_reference(fk, msg, t)


def test_chained_mac_backends_agree():
    rng = np.random.default_rng(44)
    fk = BitString.from_u8(rng.integers(0, 2, 301, dtype=np.uint8))
    msg = rng.integers(0, 256, 500, dtype=np.uint8).tobytes()
    default = transcript_mac(fk, msg, 64)
    with _kernels.use_backend("numpy"):
        assert transcript_mac(fk, msg, 64) == default


def test_chained_mac_round_trip_and_tamper():
    rng = np.random.default_rng(45)
    fk = BitString.from_u8(rng.integers(0, 2, 128, dtype=np.uint8))
    msg = b"handshake transcript m1..m6"
    tag = transcript_mac(fk, msg, 16)
    assert transcript_mac_verify(fk, msg, tag)
    assert not transcript_mac_verify(fk, msg + b"x", tag)
    for byte_index in (0, 7, len(msg) - 1):
        tampered = bytearray(msg)
        tampered[byte_index] ^= 0x01
        assert not transcript_mac_verify(fk, bytes(tampered), tag)


def test_chained_mac_separates_lengths():
    # the 64-bit length header keeps zero-fill from aliasing: a message
    # and its zero-extension never share a framed stream
    rng = np.random.default_rng(46)
    for _ in range(30):
        fk = BitString.from_u8(rng.integers(0, 2, 80, dtype=np.uint8))
        msg = rng.integers(0, 256, 9, dtype=np.uint8).tobytes()
        assert transcript_mac(fk, msg, 16) != \
            transcript_mac(fk, msg + b"\x00", 16)


def test_chained_mac_empty_message_allowed():
    fk = BitString.ones(40)
    tag = transcript_mac(fk, b"", 8)
    assert len(tag) == 8
    assert transcript_mac_verify(fk, b"", tag)
    assert not transcript_mac_verify(fk, b"\x00", tag)


def test_chained_mac_single_bit_deltas_rarely_collide():
    # a fixed single-bit change collides only when the Toeplitz block
    # annihilates it: at t=16 none of these 328 positions may collide
    # for a fixed random key
    rng = np.random.default_rng(47)
    fk = BitString.from_u8(rng.integers(0, 2, 120, dtype=np.uint8))
    msg = rng.integers(0, 256, 41, dtype=np.uint8).tobytes()
    tag = transcript_mac(fk, msg, 16)
    collisions = 0
    for bit in range(len(msg) * 8):
        tampered = bytearray(msg)
        tampered[bit // 8] ^= 0x80 >> (bit % 8)
        if transcript_mac(fk, bytes(tampered), 16) == tag:
            collisions += 1
    assert collisions == 0
