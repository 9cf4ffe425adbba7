"""Tests for security-level arithmetic and the source accounting ledger."""

import math

import pytest
from hypothesis import given, strategies as st

from qlhl.ledger import (EntropyKind, IndependenceError, SecurityLevel,
                         SourceSpec, concat_sources, eps_add, eps_sum,
                         kv_format, kv_parse, leak, source_from_kv,
                         source_to_kv, split_secure, truncate_source)

levels = st.floats(min_value=0.0, max_value=400.0, allow_nan=False)


def test_security_level_basics():
    a = SecurityLevel(32.0)
    assert a.eps == 2.0 ** -32
    assert SecurityLevel.from_eps(0.25).neg_log2 == 2.0
    assert SecurityLevel.exp2(10).neg_log2 == 10.0
    assert SecurityLevel.zero().is_zero
    assert str(a) == "2^-32"
    assert str(SecurityLevel.zero()) == "0"
    with pytest.raises(ValueError):
        SecurityLevel(-1.0)


def test_eps_add_oracle_value():
    # 2^-10 + 2^-12 = 5 * 2^-12, and -log2(5 * 2^-12) = 12 - log2(5)
    got = eps_add(SecurityLevel(10.0), SecurityLevel(12.0))
    assert got.neg_log2 == pytest.approx(9.678071905112638, abs=1e-12)


def test_eps_add_equal_terms_lose_one_bit():
    got = eps_add(SecurityLevel(20.0), SecurityLevel(20.0))
    assert got.neg_log2 == pytest.approx(19.0, abs=1e-12)


def test_eps_add_zero_identity_and_clamp():
    a = SecurityLevel(17.5)
    assert eps_add(a, SecurityLevel.zero()).neg_log2 == a.neg_log2
    # two eps values summing above 1 clamp at neg_log2 = 0
    assert eps_add(SecurityLevel(0.5), SecurityLevel(0.5)).neg_log2 == 0.0


def test_eps_sum_matches_pairwise():
    parts = [SecurityLevel(16.0)] * 4
    assert eps_sum(parts).neg_log2 == pytest.approx(14.0, abs=1e-12)


def test_ordering_compares_eps_not_exponent():
    small = SecurityLevel(64.0)   # smaller eps
    large = SecurityLevel(8.0)
    assert small < large and small <= large
    assert not large < small


@given(levels, levels)
def test_prop_eps_add_commutes_and_dominates(x, y):
    a, b = SecurityLevel(x), SecurityLevel(y)
    ab, ba = eps_add(a, b), eps_add(b, a)
    assert ab.neg_log2 == pytest.approx(ba.neg_log2, rel=1e-12)
    # the sum is at least as large an eps as either term
    assert ab.neg_log2 <= min(x, y) + 1e-9


@given(levels, levels)
def test_prop_eps_add_matches_float_path(x, y):
    got = eps_add(SecurityLevel(x), SecurityLevel(y)).eps
    assert got == pytest.approx(min(1.0, 2.0 ** -x + 2.0 ** -y), rel=1e-9)


def test_entropy_kind_join_keeps_weaker_guarantee():
    assert EntropyKind.MIN.combine(EntropyKind.SMOOTH) == EntropyKind.SMOOTH
    assert EntropyKind.SMOOTH.combine(EntropyKind.HILL) == EntropyKind.HILL
    assert EntropyKind.MIN.combine(EntropyKind.MIN) == EntropyKind.MIN
    assert EntropyKind.from_name("smooth") == EntropyKind.SMOOTH


def test_source_spec_validation():
    with pytest.raises(ValueError):
        SourceSpec("x", 8, 9.0, SecurityLevel.zero())
    with pytest.raises(ValueError):
        SourceSpec("x", -1, 0.0, SecurityLevel.zero())
    spec = SourceSpec.secure("k", 16, SecurityLevel(32.0))
    assert spec.is_secure and spec.hmin == 16.0


def test_concat_requires_independence_assertion():
    a = SourceSpec.secure("a", 4, SecurityLevel(10.0))
    b = SourceSpec.secure("b", 6, SecurityLevel(12.0))
    with pytest.raises(IndependenceError):
        concat_sources(a, b)
    joined = concat_sources(a, b, independent=True)
    assert joined.length == 10 and joined.hmin == 10.0
    assert joined.eps.neg_log2 == pytest.approx(9.678071905112638, abs=1e-12)


def test_split_secure_round_trips_lengths():
    spec = SourceSpec.secure("k", 10, SecurityLevel(20.0))
    left, right = split_secure(spec, 3)
    assert (left.length, right.length) == (3, 7)
    assert left.is_secure and right.is_secure
    weak = SourceSpec("w", 10, 5.0, SecurityLevel(20.0))
    with pytest.raises(ValueError):
        split_secure(weak, 3)


def test_truncate_and_leak_are_worst_case():
    spec = SourceSpec("w", 10, 7.0, SecurityLevel(20.0))
    assert truncate_source(spec, 4).hmin == 3.0
    assert truncate_source(spec, 4).length == 6
    assert leak(spec, 2.0).hmin == 5.0
    assert leak(spec, 100.0).hmin == 0.0
    with pytest.raises(ValueError):
        truncate_source(spec, 11)


def test_kv_format_round_trip():
    doc = {"alpha": "1/2", "n": 12, "ok": True, "eps": 2.5e-10}
    parsed = kv_parse(kv_format(doc))
    assert parsed["alpha"] == "1/2"
    assert int(parsed["n"]) == 12


def test_source_kv_round_trip():
    spec = SourceSpec("qkd", 256, 254.5, SecurityLevel(64.0),
                      EntropyKind.SMOOTH)
    back = source_from_kv(source_to_kv(spec))
    assert back.label == spec.label
    assert back.length == spec.length
    assert back.hmin == pytest.approx(spec.hmin)
    assert back.eps.neg_log2 == pytest.approx(spec.eps.neg_log2)
    assert back.kind == spec.kind


@given(st.integers(0, 64), st.integers(0, 64))
def test_prop_concat_adds_lengths(la, lb):
    a = SourceSpec.secure("a", la, SecurityLevel(30.0))
    b = SourceSpec.secure("b", lb, SecurityLevel(30.0))
    joined = concat_sources(a, b, independent=True)
    assert joined.length == la + lb
    assert joined.hmin == float(la + lb)
