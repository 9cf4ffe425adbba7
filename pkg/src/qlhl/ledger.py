"""Entropy ledger: source descriptors and their composition algebra.

A source is summarized by four numbers: bit length, conditional min-entropy
hmin (in bits, against the adversary's side information), a security level
(closeness to uniform), and an entropy kind. The algebra implemented here:

- concatenating two conditionally independent sources adds lengths and
  min-entropies and adds the epsilons;
- splitting a fully secure source yields two fully secure parts, each
  carrying the parent's epsilon, mutually independent at that smoothing;
- truncating by q bits costs at worst q bits of min-entropy;
- revealing r bits costs at worst r bits of min-entropy (chain rule).

Epsilons are tracked as -log2(eps) in double precision with exact +inf
(eps = 0), because values like 2^-128 underflow linear doubles. Addition
is a stable two-term log-sum-exp.

Conditional independence is caller-asserted metadata, never inferred: the
library cannot verify independence from descriptors, so combining without
the assertion is a hard error.

Kinds form a small lattice: MIN < SMOOTH < HILL, and
HILL (computational pseudoentropy, the model for PQC keys) absorbs: any
value derived from a HILL source is itself only computationally secure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class IndependenceError(ValueError):
    """Raised when sources are combined without an independence assertion."""


class EntropyKind(enum.Enum):
    MIN = "min"
    SMOOTH = "smooth"
    HILL = "hill"

    @property
    def rank(self) -> int:
        return {"min": 0, "smooth": 1, "hill": 2}[self.value]

    def combine(self, other: "EntropyKind") -> "EntropyKind":
        """Join on the kind lattice; the weaker guarantee wins, HILL absorbs."""
        return self if self.rank >= other.rank else other

    @staticmethod
    def from_name(name: str) -> "EntropyKind":
        for kind in EntropyKind:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown entropy kind {name!r}")


@dataclass(frozen=True, order=False)
class SecurityLevel:
    """A closeness-to-uniform parameter eps, stored as -log2(eps).

    neg_log2 is an extended real in [0, +inf]; +inf means eps = 0 exactly.
    Larger neg_log2 means more secure.
    """

    neg_log2: float

    def __post_init__(self):
        if math.isnan(self.neg_log2) or self.neg_log2 < 0:
            raise ValueError(f"neg_log2 must be in [0, +inf], got {self.neg_log2}")

    @classmethod
    def exp2(cls, n: float) -> "SecurityLevel":
        """eps = 2^-n."""
        return cls(float(n))

    @classmethod
    def from_eps(cls, eps: float) -> "SecurityLevel":
        if eps < 0 or eps > 1:
            raise ValueError(f"eps must be in [0, 1], got {eps}")
        if eps == 0:
            return cls(math.inf)
        return cls(max(0.0, -math.log2(eps)))

    @classmethod
    def zero(cls) -> "SecurityLevel":
        """eps = 0 (perfect)."""
        return cls(math.inf)

    @property
    def eps(self) -> float:
        return 0.0 if math.isinf(self.neg_log2) else 2.0 ** (-self.neg_log2)

    def is_zero(self) -> bool:
        return math.isinf(self.neg_log2)

    def __add__(self, other: "SecurityLevel") -> "SecurityLevel":
        return eps_add(self, other)

    def __le__(self, other: "SecurityLevel") -> bool:
        # "<=" compares the eps values: smaller eps is smaller.
        return self.neg_log2 >= other.neg_log2

    def __lt__(self, other: "SecurityLevel") -> bool:
        return self.neg_log2 > other.neg_log2

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return f"2^-{self.neg_log2:g}"


def eps_add(a: SecurityLevel, b: SecurityLevel) -> SecurityLevel:
    """eps_a + eps_b, exactly in the log domain.

    With x = -log2(eps_a) <= y = -log2(eps_b) (a is the larger eps):
    -log2(2^-x + 2^-y) = x - log2(1 + 2^(x - y)), which is stable for any
    spread of magnitudes. The sum of two sub-unit epsilons may exceed 1;
    the result clamps at neg_log2 = 0 since closeness beyond 1 carries no
    meaning.
    """
    x, y = a.neg_log2, b.neg_log2
    if x > y:
        x, y = y, x
    if math.isinf(x):
        return SecurityLevel(math.inf)
    out = x - math.log2(1.0 + 2.0 ** (x - y))
    return SecurityLevel(max(0.0, out))


def eps_sum(levels) -> SecurityLevel:
    total = SecurityLevel.zero()
    for lv in levels:
        total = eps_add(total, lv)
    return total


@dataclass(frozen=True)
class SourceSpec:
    """Descriptor of a (length, hmin)-source with smoothing eps and kind.

    A fully secure source is exactly the case hmin == length, with eps its
    closeness to uniform-and-independent of the adversary.
    """

    label: str
    length: int
    hmin: float
    eps: SecurityLevel
    kind: EntropyKind = EntropyKind.MIN

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be >= 0")
        if not 0 <= self.hmin <= self.length:
            raise ValueError(
                f"hmin must satisfy 0 <= hmin <= length, got hmin={self.hmin} "
                f"length={self.length}"
            )

    @property
    def is_secure(self) -> bool:
        return self.hmin == self.length

    @classmethod
    def secure(cls, label: str, length: int, eps: SecurityLevel,
               kind: EntropyKind = EntropyKind.MIN) -> "SourceSpec":
        return cls(label, length, float(length), eps, kind)


def concat_sources(a: SourceSpec, b: SourceSpec, *,
                   independent: bool = False) -> SourceSpec:
    """Ledger entry for the concatenation of two independent sources.

    Lengths and min-entropies add; epsilons add; the kind is the join.
    `independent` is the caller's assertion of conditional independence
    given the adversary; omitting it is a hard error, not a default.
    """
    if not independent:
        raise IndependenceError(
            "concat_sources requires the caller to assert conditional "
            "independence of the two sources (pass independent=True)"
        )
    return SourceSpec(
        label=f"{a.label}||{b.label}",
        length=a.length + b.length,
        hmin=a.hmin + b.hmin,
        eps=eps_add(a.eps, b.eps),
        kind=EntropyKind.combine(a.kind, b.kind),
    )


def split_secure(x: SourceSpec, at: int) -> tuple[SourceSpec, SourceSpec]:
    """Split a fully secure source into two fully secure parts.

    Each part keeps the parent's eps, and the pair may be treated as
    mutually conditionally independent at that smoothing. Splitting a
    non-secure source is not supported: the decomposition guarantee only
    holds when hmin equals length.
    """
    if not x.is_secure:
        raise ValueError(
            f"split_secure requires a fully secure source (hmin == length); "
            f"got hmin={x.hmin}, length={x.length}"
        )
    if not 0 <= at <= x.length:
        raise ValueError(f"split point {at} out of range for length {x.length}")
    left = SourceSpec(f"{x.label}[:{at}]", at, float(at), x.eps, x.kind)
    right = SourceSpec(f"{x.label}[{at}:]", x.length - at,
                       float(x.length - at), x.eps, x.kind)
    return left, right


def truncate_source(x: SourceSpec, q: int) -> SourceSpec:
    """Worst-case ledger for dropping q trailing bits: hmin falls by q."""
    if not 0 <= q <= x.length:
        raise ValueError(f"cannot truncate {q} bits from length {x.length}")
    return replace(x, length=x.length - q, hmin=max(0.0, x.hmin - q))


def leak(x: SourceSpec, bits_revealed: float) -> SourceSpec:
    """Chain rule: revealing r bits costs at most r bits of min-entropy."""
    if bits_revealed < 0:
        raise ValueError("bits_revealed must be >= 0")
    return replace(x, hmin=max(0.0, x.hmin - bits_revealed))


# -- flat key-value text format ---------------------------------------------


def kv_format(record: dict) -> str:
    """Serialize a flat mapping as 'key: value' lines."""
    lines = []
    for key, value in record.items():
        if isinstance(value, float) and math.isinf(value):
            value = "inf"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def kv_parse(text: str) -> dict:
    """Parse 'key: value' lines into a string-to-string mapping."""
    record = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        record[key.strip()] = value.strip()
    return record


def source_to_kv(spec: SourceSpec) -> str:
    return kv_format({
        "label": spec.label,
        "length_bits": spec.length,
        "hmin_bits": spec.hmin,
        "neg_log2_eps": spec.eps.neg_log2,
        "kind": spec.kind.value,
    })


def source_from_kv(text: str) -> SourceSpec:
    record = kv_parse(text)
    neg = record.get("neg_log2_eps", "inf")
    return SourceSpec(
        label=record.get("label", "source"),
        length=int(record["length_bits"]),
        hmin=float(record["hmin_bits"]),
        eps=SecurityLevel(float(neg)),
        kind=EntropyKind.from_name(record.get("kind", "min")),
    )
