"""Tests for secret-key mixing in private- and public-seed modes."""

import numpy as np
import pytest

from qlhl.bits import BitString, concat
from qlhl.bootstrap import Infeasible
from qlhl.bounds import ThreatCase
from qlhl.combiner import (CombineMode, CombineRequest, OrderingViolation,
                           combine_private, combine_public,
                           combine_public_many, model_pqc_key,
                           residual_after_reveal, xor_combine_baseline,
                           xor_vs_extractor_report)
from qlhl.ledger import EntropyKind, SecurityLevel, SourceSpec
from qlhl.toeplitz import ExtractorParams, SeededHash, extract

E32 = SecurityLevel(32.0)


def _key(rng, length, label, kind=EntropyKind.MIN):
    bits = BitString.from_u8(rng.integers(0, 2, length, dtype=np.uint8))
    return bits, SourceSpec.secure(label, length, SecurityLevel.zero(), kind)


def _private_request(rng, len1=128, len2=127, **kwargs):
    key1, spec1 = _key(rng, len1, "k1")
    key2, spec2 = _key(rng, len2, "k2")
    return CombineRequest(key1=key1, spec1=spec1, key2=key2, spec2=spec2,
                          mode=CombineMode.PRIVATE_SEED, eps_hash=E32,
                          **kwargs)


def test_private_combine_fixture_length():
    # 255 total bits under NoReveal at 2^-32: floor(128 - 62) = 66 out
    rng = np.random.default_rng(31)
    result = combine_private(_private_request(rng))
    assert len(result.output) == 66
    assert result.out_spec.is_secure
    assert result.report.max_output_len == 66
    assert result.residuals["key1"].remaining_hmin == 128 - 66


def test_private_combine_matches_manual_split():
    # seed = key1[:a1] || key2[:a2], input = the two complements
    rng = np.random.default_rng(32)
    req = _private_request(rng, requested_len=40)
    result = combine_private(req)
    part_seed_len = (128 + 127 - 1) // 2
    a1 = int((part_seed_len / (128 + 127)) * 128)
    a2 = part_seed_len - a1
    seed = concat(req.key1[:a1], req.key2[:a2])
    input_bits = concat(req.key1[a1:], req.key2[a2:])
    params = ExtractorParams.modified(len(input_bits), 40)
    assert result.output == extract(SeededHash(params, seed), input_bits)


def test_private_combine_even_total_needs_truncation():
    rng = np.random.default_rng(33)
    with pytest.raises(ValueError):
        combine_private(_private_request(rng, len2=128))
    result = combine_private(_private_request(rng, len2=128,
                                              auto_truncate=True))
    assert len(result.output) == 66


def test_private_combine_zero_keys_give_zero_output():
    spec = SourceSpec.secure("z", 128, SecurityLevel.zero())
    spec2 = SourceSpec.secure("z2", 127, SecurityLevel.zero())
    req = CombineRequest(key1=BitString.zeros(128), spec1=spec,
                         key2=BitString.zeros(127), spec2=spec2,
                         mode=CombineMode.PRIVATE_SEED, eps_hash=E32)
    result = combine_private(req)
    assert result.output == BitString.zeros(66)


def test_private_combine_requested_len_checked():
    rng = np.random.default_rng(34)
    result = combine_private(_private_request(rng, requested_len=10))
    assert len(result.output) == 10
    with pytest.raises(ValueError):
        combine_private(_private_request(rng, requested_len=67))


def test_controlled_key_combination_refused():
    rng = np.random.default_rng(35)
    with pytest.raises(Infeasible):
        combine_private(_private_request(rng,
                                         threat=ThreatCase.CONTROLLED_KEY))


def test_output_kind_tracks_surviving_key():
    rng = np.random.default_rng(36)
    key1, spec1 = _key(rng, 128, "its", EntropyKind.MIN)
    key2, spec2 = _key(rng, 127, "pqc", EntropyKind.HILL)

    def run(**kwargs):
        return combine_private(CombineRequest(
            key1=key1, spec1=spec1, key2=key2, spec2=spec2,
            mode=CombineMode.PRIVATE_SEED, eps_hash=E32, **kwargs))

    assert run().out_spec.kind == EntropyKind.HILL
    revealed_pqc = run(threat=ThreatCase.REVEALED_KEY, revealed_key=2)
    assert revealed_pqc.out_spec.kind == EntropyKind.MIN
    revealed_its = run(threat=ThreatCase.REVEALED_KEY, revealed_key=1)
    assert revealed_its.out_spec.kind == EntropyKind.HILL


def test_public_combine_fixture_lengths():
    rng = np.random.default_rng(37)
    key1, spec1 = _key(rng, 128, "k1")
    key2, spec2 = _key(rng, 256, "k2")
    seed = BitString.from_u8(rng.integers(0, 2, 383, dtype=np.uint8))
    base = dict(key1=key1, spec1=spec1, key2=key2, spec2=spec2,
                mode=CombineMode.PUBLIC_SEED, eps_hash=E32, seed=seed,
                seed_after_keys=True)
    no_reveal = combine_public(CombineRequest(**base))
    assert len(no_reveal.output) == 322
    revealed = combine_public(CombineRequest(
        **base, threat=ThreatCase.REVEALED_KEY, revealed_key=2))
    assert len(revealed.output) == 66
    # the output is the plain seeded extraction of key1 || key2
    params = ExtractorParams.modified(384, 322)
    assert no_reveal.output == extract(SeededHash(params, seed),
                                       concat(key1, key2))


def test_public_combine_enforces_seed_freshness_and_size():
    rng = np.random.default_rng(38)
    key1, spec1 = _key(rng, 16, "k1")
    key2, spec2 = _key(rng, 17, "k2")
    seed = BitString.from_u8(rng.integers(0, 2, 32, dtype=np.uint8))
    base = dict(key1=key1, spec1=spec1, key2=key2, spec2=spec2,
                mode=CombineMode.PUBLIC_SEED,
                eps_hash=SecurityLevel(4.0), seed=seed)
    with pytest.raises(OrderingViolation):
        combine_public(CombineRequest(**base))
    with pytest.raises(ValueError):
        combine_public(CombineRequest(**dict(base, seed=seed[:10]),
                                      seed_after_keys=True))
    ok = combine_public(CombineRequest(**base, seed_after_keys=True))
    assert len(ok.output) == 27      # 33 - 8 + 2


def test_public_combine_binds_transcript_without_entropy_credit():
    rng = np.random.default_rng(39)
    key1, spec1 = _key(rng, 16, "k1")
    key2, spec2 = _key(rng, 17, "k2")
    transcript = b"\xa5\x5a"
    seed = BitString.from_u8(rng.integers(0, 2, 33 + 16 - 1, dtype=np.uint8))
    result = combine_public(CombineRequest(
        key1=key1, spec1=spec1, key2=key2, spec2=spec2,
        mode=CombineMode.PUBLIC_SEED, eps_hash=SecurityLevel(4.0),
        seed=seed, seed_after_keys=True, transcript=transcript))
    # the transcript lengthens the input but never the bound
    assert result.report.max_output_len == 27
    params = ExtractorParams.modified(49, 27)
    want = extract(SeededHash(params, seed),
                   concat(key1, key2) + BitString.from_bytes(transcript))
    assert result.output == want


def test_public_combine_many_keys():
    rng = np.random.default_rng(40)
    keys = [_key(rng, ln, f"k{ln}") for ln in (64, 96, 32)]
    total = 64 + 96 + 32
    seed = BitString.from_u8(rng.integers(0, 2, total - 1, dtype=np.uint8))
    pooled = combine_public_many(keys, seed, SecurityLevel.zero(), E32,
                                 seed_after_keys=True)
    assert len(pooled.output) == total - 64 + 2
    survivors = combine_public_many(keys, seed, SecurityLevel.zero(),
                                    SecurityLevel(8.0), reveal_allowed=True,
                                    seed_after_keys=True)
    assert len(survivors.output) == 32 - 16 + 2
    with pytest.raises(Infeasible):
        combine_public_many(keys, seed, SecurityLevel.zero(), E32,
                            reveal_allowed=True, seed_after_keys=True)
    with pytest.raises(OrderingViolation):
        combine_public_many(keys, seed, SecurityLevel.zero(), E32)


def test_xor_baseline_and_residual_bookkeeping():
    a = BitString.from_str("1100")
    b = BitString.from_str("1010")
    assert xor_combine_baseline(a, b).to01() == "0110"
    with pytest.raises(ValueError):
        xor_combine_baseline(a, BitString.from_str("101"))
    spec = SourceSpec.secure("k", 256, SecurityLevel.zero())
    res = residual_after_reveal(spec, 192, lambda_target=64)
    assert res.remaining_hmin == 64.0 and res.satisfied
    res = residual_after_reveal(spec, 200, lambda_target=64)
    assert not res.satisfied


def test_xor_vs_extractor_contrast_report():
    spec1 = SourceSpec.secure("its", 256, SecurityLevel.zero())
    spec2 = model_pqc_key(256, SecurityLevel.zero())
    doc = xor_vs_extractor_report(spec1, spec2, E32, lambda1=64)
    assert doc["xor_output_len"] == 256
    assert doc["xor_key1_remaining_hmin"] == 0.0
    assert doc["xor_lambda_satisfied"] == "false"
    assert doc["extractor_output_len"] == 192
    assert doc["extractor_key1_remaining_hmin"] >= 64.0
    assert doc["extractor_lambda_satisfied"] == "true"


def test_model_pqc_key_is_computational():
    spec = model_pqc_key(128, SecurityLevel(40.0))
    assert spec.kind == EntropyKind.HILL
    assert spec.hmin == 128.0
    floored = model_pqc_key(128, SecurityLevel(40.0), hill_floor=100)
    assert floored.hmin == 100.0
    with pytest.raises(ValueError):
        model_pqc_key(128, SecurityLevel(40.0), hill_floor=129)
