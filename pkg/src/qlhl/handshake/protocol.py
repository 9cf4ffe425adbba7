"""Two-party hybrid key agreement simulator with an ITS key schedule.

Message flow (I = initiator, R = responder; {x}_P is one-time-pad
encryption of x under pad segment P):

    m1  I -> R   eph_pk, n_I
    m2  R -> I   c_pq, id_qkd, n_R, s1
                   stage 1: k1 || IHTS || RHTS
    m3  R -> I   {cert_R}_RHTS
    m4  I -> R   {c_I}_IHTS, s2
                   stage 2: k2 || IAHTS || RAHTS
    m5  I -> R   {cert_I}_IAHTS
    m6  R -> I   {c_R}_RAHTS, s3
                   stage 3: k3 || fk_I || fk_R
    m7  I -> R   {IF}_IAHTS, s4        IF tags m1..m6 under fk_I
    m8  R -> I   {RF}_RAHTS            RF tags m1..m7 under fk_R
                   stage 4: IATS || RATS || SecState'

Each stage i hashes (keys || label || transcript-core-so-far) with the
public seed s_i carried on the wire. The transcript fed to a stage is
the "core" form (seed fields emptied) so seed lengths are computable
before drawing; MAC tags and the PRF contexts bind the full wire bytes.
Stage seeds are one bit shorter than their input, sized at runtime from
the actual transcript; for stage 4 the seed is drawn at m7 using the
fixed size of m8, whose bytes enter the stage only after the exchange.

Pads are carved as disjoint segments of the named handshake-traffic
secrets in a fixed order on both sides; running out is a hard error,
never silent reuse. The PRF-derived keys (from the KEM secrets and the
previous session state) are computationally secure only; each stage's
information-theoretic floor comes from the one chained/pre-shared key
in its input, and the epsilon ledger of the finals folds the QKD
imperfection plus each stage's seed and extraction failures in order.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from ..bits import BitString
from ..ledger import SecurityLevel
from .mac import transcript_mac
from .providers import (KemKeyPair, MockKem, MockQkdStore, UnknownQkdIdError,
                        prf_expand)
from .schedule import ScheduleParams, budget, schedule_stage
from .wire import WireError, core_of_wire, encode_message, decode_message, \
    field_to_bits

# domain-separation constants: 1..8, each 8 ASCII bytes = 64 bits
LABELS = {i: f"QLHL/L{i}".encode() + b"\0" for i in range(1, 9)}

NONCE_BYTES = 4
QKD_ID_BYTES = 8

# who consumes each message
RECEIVER = {1: "responder", 2: "initiator", 3: "initiator",
            4: "responder", 5: "responder", 6: "initiator",
            7: "responder", 8: "initiator"}


class AbortReason(enum.Enum):
    BAD_MESSAGE = "BadMessage"
    CERT_UNTRUSTED = "CertUntrusted"
    UNKNOWN_QKD_ID = "UnknownQkdId"
    MAC_FAIL_IF = "MacFailIF"
    MAC_FAIL_RF = "MacFailRF"
    CHANNEL_LOSS = "ChannelLoss"


class HandshakeAbort(Exception):
    """A party stopped the run; carries who and why."""

    def __init__(self, reason: AbortReason, party: str, detail: str = ""):
        super().__init__(f"{party} aborted: {reason.value}"
                         + (f" ({detail})" if detail else ""))
        self.reason = reason
        self.party = party
        self.detail = detail


class PadExhaustedError(RuntimeError):
    """A one-time pad was asked for more bits than it holds."""


class ChannelClosed(Exception):
    """The transport dropped before the protocol finished."""


class OneTimePad:
    """Sequentially carved pad segments from one secret; never reuses."""

    def __init__(self, bits: BitString, name: str):
        self._bits = bits
        self._name = name
        self._pos = 0

    def take(self, nbits: int) -> BitString:
        end = self._pos + nbits
        if end > len(self._bits):
            raise PadExhaustedError(
                f"pad {self._name} exhausted: need {nbits} bits at offset "
                f"{self._pos} of {len(self._bits)}")
        segment = self._bits[self._pos:end]
        self._pos = end
        return segment


@dataclass(frozen=True)
class TamperSpec:
    """Flip one bit of one in-flight message.

    bit_index counts from the first (most significant) bit of the framed
    wire bytes, header included.
    """

    message_index: int
    bit_index: int

    def __post_init__(self):
        if not 1 <= self.message_index <= 8:
            raise ValueError("message index must be 1..8")
        if self.bit_index < 0:
            raise ValueError("bit index must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "TamperSpec":
        m = re.fullmatch(r"m([1-8]):bit(\d+)", text.strip())
        if not m:
            raise ValueError(f"tamper spec must look like 'm7:bit3', "
                             f"got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def apply(self, data: bytes) -> bytes:
        if self.bit_index >= 8 * len(data):
            raise ValueError(f"bit {self.bit_index} out of range for a "
                             f"{8 * len(data)}-bit message")
        out = bytearray(data)
        out[self.bit_index // 8] ^= 0x80 >> (self.bit_index % 8)
        return bytes(out)


class InMemoryChannel:
    """In-order exactly-once delivery with optional fault injection.

    transforms is a list of (message_index, fn) applied to matching
    messages in flight; tamper is the single-bit-flip convenience.
    drop_after=k loses every message after the k-th.
    """

    def __init__(self, tamper: Optional[TamperSpec] = None,
                 transforms=(), drop_after: Optional[int] = None):
        self.tamper = tamper
        self.transforms = list(transforms)
        self.drop_after = drop_after
        self.log: list = []

    def deliver(self, data: bytes) -> bytes:
        index = len(self.log) + 1
        if self.drop_after is not None and index > self.drop_after:
            raise ChannelClosed(f"transport closed before m{index}")
        if self.tamper is not None and self.tamper.message_index == index:
            data = self.tamper.apply(data)
        for msg_index, fn in self.transforms:
            if msg_index == index:
                data = fn(data)
        self.log.append(data)
        return data


def default_tag_len(n: int) -> int:
    """Finish-tag width derived from the per-key length."""
    return min(64, max(4, n // 4))


@dataclass(frozen=True)
class HandshakeConfig:
    """Per-party configuration; the two parties share the starred parts.

    Attributes:
        n: per-key length in bits for all nine derived keys.
        eps_prime: per-stage extraction failure probability.
        rng_seed: master seed; every random draw derives from it.
        rng_stream: distinct per party so draws never collide.
        qkd_store: *shared* pre-shared key store.
        long_term: this party's static KEM keypair.
        trusted_certs: *shared* anchor set of certificate blobs.
        sec_state: *shared* secret state from the previous session.
        eps_qkd: imperfection of the pre-shared block.
        eps_seed: per-stage closeness of the public seeds to uniform.
        tag_len: finish-tag width; derived from n when omitted.
    """

    n: int
    eps_prime: SecurityLevel
    rng_seed: int
    rng_stream: int
    qkd_store: MockQkdStore
    long_term: KemKeyPair
    trusted_certs: frozenset
    sec_state: BitString
    eps_qkd: SecurityLevel = field(default_factory=SecurityLevel.zero)
    eps_seed: SecurityLevel = field(default_factory=SecurityLevel.zero)
    tag_len: Optional[int] = None

    def __post_init__(self):
        if not 32 <= self.n <= 512 or self.n % 16:
            raise ValueError("per-key length must be 32..512 and divisible "
                             "by 16 (certificates and ciphertexts are n/2 "
                             "bits and must be whole bytes)")
        t = self.tag_bits
        if not 4 <= t <= 64:
            raise ValueError("tag length must be 4..64 bits")
        if self.n < 3 * t - 1:
            raise ValueError("chained tags need n >= 3*tag_len - 1")
        if self.n // 2 + t > self.n:
            raise ValueError("tag and ciphertext pads exceed one n-bit key")
        if len(self.sec_state) != self.n:
            raise ValueError(f"session state must be {self.n} bits")

    @property
    def tag_bits(self) -> int:
        return self.tag_len if self.tag_len is not None \
            else default_tag_len(self.n)

    @property
    def kem_bytes(self) -> int:
        return self.n // 16


class Finals(NamedTuple):
    """What a party walks away with after a clean run."""

    iats: BitString
    rats: BitString
    sec_state_next: BitString
    out_eps: SecurityLevel
    consumed_qkd: int


class RunResult(NamedTuple):
    initiator_finals: Optional[Finals]
    responder_finals: Optional[Finals]
    outcome: str                      # "Success" or "Abort"
    abort_reason: Optional[AbortReason]
    abort_party: Optional[str]
    params: ScheduleParams
    messages: tuple                   # wire bytes as delivered
    initiator: "Initiator"
    responder: "Responder"


OUTCOME_SUCCESS = "Success"
OUTCOME_ABORT = "Abort"


class _Party:
    """State shared by both roles: transcript, schedule, pads, ledger."""

    role = "party"
    rng_offset = 0

    def __init__(self, cfg: HandshakeConfig, params: ScheduleParams):
        self.cfg = cfg
        self.params = params
        self.rng = np.random.default_rng([cfg.rng_seed, self.rng_offset])
        self.kem = MockKem(cfg.n // 2, self.rng)
        self.transcript: list = []       # full wire bytes, own view
        self.core_transcript: list = []  # seed-stripped twins
        self.intermediate: dict = {}
        self.seed_lens: list = []
        self.eps = cfg.eps_qkd
        self.consumed_qkd = 0
        self.finals: Optional[Finals] = None

    # -- plumbing ---------------------------------------------------------

    def _abort(self, reason: AbortReason, detail: str = ""):
        raise HandshakeAbort(reason, self.role, detail)

    def _append(self, msg: bytes) -> None:
        self.transcript.append(msg)
        self.core_transcript.append(core_of_wire(msg))

    def _full(self, upto: Optional[int] = None) -> bytes:
        return b"".join(self.transcript[:upto])

    def _core_bits_total(self, pending: int = 0) -> int:
        return 8 * (sum(len(c) for c in self.core_transcript) + pending)

    def _expect(self, data: bytes, msg_type: int, nfields: int) -> list:
        try:
            got_type, fields = decode_message(data)
        except WireError as exc:
            self._abort(AbortReason.BAD_MESSAGE, str(exc))
        if got_type != msg_type:
            self._abort(AbortReason.BAD_MESSAGE,
                        f"expected m{msg_type}, got m{got_type}")
        if len(fields) != nfields:
            self._abort(AbortReason.BAD_MESSAGE,
                        f"m{msg_type} must carry {nfields} fields, "
                        f"got {len(fields)}")
        return fields

    def _check_bytes(self, data: bytes, size: int, what: str) -> bytes:
        if len(data) != size:
            self._abort(AbortReason.BAD_MESSAGE,
                        f"{what} must be {size} bytes, got {len(data)}")
        return data

    def _bit_field(self, data: bytes, nbits: int, what: str) -> BitString:
        try:
            return field_to_bits(data, nbits)
        except WireError as exc:
            self._abort(AbortReason.BAD_MESSAGE, f"{what}: {exc}")

    def _rand_bytes(self, size: int) -> bytes:
        return self.rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()

    def _rand_bits(self, nbits: int) -> BitString:
        return BitString.from_u8(
            self.rng.integers(0, 2, size=nbits, dtype=np.uint8))

    # -- schedule ---------------------------------------------------------

    def _run_stage(self, stage: int, keys, label_index: int,
                   seed: BitString) -> list:
        traffic = BitString.from_bytes(b"".join(self.core_transcript))
        outs = schedule_stage(
            stage, keys, BitString.from_bytes(LABELS[label_index]), traffic,
            seed, self.params.stage_out_lens(stage), self.cfg.eps_prime)
        self.seed_lens.append(len(seed))
        self.eps = self.eps + self.cfg.eps_seed + self.cfg.eps_prime
        return outs

    def _stage1(self, ss_pq: bytes, k_qkd: BitString, s1: BitString) -> None:
        full = self._full()
        n = self.cfg.n
        k_pq = prf_expand(ss_pq, LABELS[2] + full, n)
        k_sec = prf_expand(self.cfg.sec_state.to_bytes(), LABELS[1] + full, n)
        k1, ihts, rhts = self._run_stage(1, [k_pq, k_qkd, k_sec], 3, s1)
        self.intermediate.update(k_pq=k_pq, k_SecState=k_sec, k1=k1,
                                 IHTS=ihts, RHTS=rhts)
        self.pad_ihts = OneTimePad(ihts, "IHTS")
        self.pad_rhts = OneTimePad(rhts, "RHTS")

    def _stage2(self, ss_i: bytes, s2: BitString) -> None:
        k_pq_i = prf_expand(ss_i, LABELS[4] + self._full(), self.cfg.n)
        k2, iahts, rahts = self._run_stage(
            2, [self.intermediate["k1"], k_pq_i], 5, s2)
        self.intermediate.update(k_pq_I=k_pq_i, k2=k2, IAHTS=iahts,
                                 RAHTS=rahts)
        self.pad_iahts = OneTimePad(iahts, "IAHTS")
        self.pad_rahts = OneTimePad(rahts, "RAHTS")

    def _stage3(self, ss_r: bytes, s3: BitString) -> None:
        k_pq_r = prf_expand(ss_r, LABELS[6] + self._full(), self.cfg.n)
        k3, fk_i, fk_r = self._run_stage(
            3, [self.intermediate["k2"], k_pq_r], 7, s3)
        self.intermediate.update(k_pq_R=k_pq_r, k3=k3, fk_I=fk_i, fk_R=fk_r)

    def _stage4(self, s4: BitString) -> Finals:
        iats, rats, sec_next = self._run_stage(
            4, [self.intermediate["k3"]], 8, s4)
        self.intermediate.update(IATS=iats, RATS=rats, SecStateNext=sec_next)
        self.finals = Finals(iats, rats, sec_next, self.eps,
                             self.consumed_qkd)
        return self.finals

    # -- seed sizing --------------------------------------------------------

    def _seed_len(self, key_bits: int, pending_core: int,
                  future_core: int = 0) -> int:
        label_bits = 64
        return (key_bits + label_bits
                + self._core_bits_total(pending_core + future_core) - 1)

    def _m8_core_len(self) -> int:
        # m8 = type + payload length + one length-prefixed tag field
        return 5 + 4 + (self.cfg.tag_bits + 7) // 8

    def _stage_key_bits(self, stage: int) -> int:
        n = self.cfg.n
        return {1: n + self.params.qkd_budget + n,
                2: self.params.k1 + n,
                3: self.params.k2 + n,
                4: self.params.k3}[stage]


class Initiator(_Party):
    role = "initiator"
    rng_offset = 1

    def m1(self) -> bytes:
        self.eph = self.kem.keypair()
        msg = encode_message(1, [self.eph.public_key,
                                 self._rand_bytes(NONCE_BYTES)])
        self._append(msg)
        return msg

    def on_m2(self, data: bytes) -> None:
        c_pq, ident, _n_r, seed_field = self._expect(data, 2, 4)
        self._check_bytes(c_pq, self.cfg.kem_bytes, "KEM ciphertext")
        self._check_bytes(ident, QKD_ID_BYTES, "QKD id")
        self._check_bytes(_n_r, NONCE_BYTES, "nonce")
        try:
            k_qkd = self.cfg.qkd_store.fetch(bytes(ident))
        except UnknownQkdIdError as exc:
            self._abort(AbortReason.UNKNOWN_QKD_ID, str(exc))
        self.consumed_qkd = len(k_qkd)
        self._append(data)
        want = self._seed_len(self._stage_key_bits(1), 0)
        s1 = self._bit_field(seed_field, want, "stage-1 seed")
        ss_pq = self.kem.decapsulate(self.eph.secret_key, c_pq)
        self._stage1(ss_pq, k_qkd, s1)

    def on_m3(self, data: bytes) -> None:
        (enc_cert,) = self._expect(data, 3, 1)
        self._check_bytes(enc_cert, self.cfg.kem_bytes, "certificate")
        self._append(data)
        pad = self.pad_rhts.take(8 * self.cfg.kem_bytes)
        cert = (BitString.from_bytes(enc_cert) ^ pad).to_bytes()
        if cert not in self.cfg.trusted_certs:
            self._abort(AbortReason.CERT_UNTRUSTED,
                        "responder certificate not in the anchor set")
        self.peer_cert = cert

    def m4(self) -> bytes:
        c_i, self.ss_i = self.kem.encapsulate(self.peer_cert)
        pad = self.pad_ihts.take(8 * self.cfg.kem_bytes)
        fields = [(BitString.from_bytes(c_i) ^ pad).to_bytes(), b""]
        pending = encode_message(4, fields)
        s2 = self._rand_bits(
            self._seed_len(self._stage_key_bits(2), len(pending)))
        fields[1] = s2.to_bytes()
        msg = encode_message(4, fields)
        self._append(msg)
        self._stage2(self.ss_i, s2)
        return msg

    def m5(self) -> bytes:
        pad = self.pad_iahts.take(8 * self.cfg.kem_bytes)
        cert = BitString.from_bytes(self.cfg.long_term.public_key)
        msg = encode_message(5, [(cert ^ pad).to_bytes()])
        self._append(msg)
        return msg

    def on_m6(self, data: bytes) -> None:
        enc_c_r, seed_field = self._expect(data, 6, 2)
        self._check_bytes(enc_c_r, self.cfg.kem_bytes, "KEM ciphertext")
        self._append(data)
        want = self._seed_len(self._stage_key_bits(3), 0)
        s3 = self._bit_field(seed_field, want, "stage-3 seed")
        pad = self.pad_rahts.take(8 * self.cfg.kem_bytes)
        c_r = (BitString.from_bytes(enc_c_r) ^ pad).to_bytes()
        ss_r = self.kem.decapsulate(self.cfg.long_term.secret_key, c_r)
        self._stage3(ss_r, s3)

    def m7(self) -> bytes:
        t = self.cfg.tag_bits
        tag = transcript_mac(self.intermediate["fk_I"], self._full(6), t)
        enc = tag ^ self.pad_iahts.take(t)
        fields = [enc.to_bytes(), b""]
        pending = encode_message(7, fields)
        self.s4 = self._rand_bits(
            self._seed_len(self._stage_key_bits(4), len(pending),
                           self._m8_core_len()))
        fields[1] = self.s4.to_bytes()
        msg = encode_message(7, fields)
        self._append(msg)
        return msg

    def on_m8(self, data: bytes) -> Finals:
        t = self.cfg.tag_bits
        (enc_tag,) = self._expect(data, 8, 1)
        enc = self._bit_field(enc_tag, t, "finish tag")
        self._append(data)
        tag = enc ^ self.pad_rahts.take(t)
        want = transcript_mac(self.intermediate["fk_R"], self._full(7), t)
        if tag != want:
            self._abort(AbortReason.MAC_FAIL_RF,
                        "responder finish tag does not verify")
        return self._stage4(self.s4)


class Responder(_Party):
    role = "responder"
    rng_offset = 2

    def on_m1(self, data: bytes) -> None:
        eph_pk, nonce = self._expect(data, 1, 2)
        self._check_bytes(eph_pk, self.cfg.kem_bytes, "ephemeral public key")
        self._check_bytes(nonce, NONCE_BYTES, "nonce")
        self._append(data)
        self.peer_eph_pk = bytes(eph_pk)

    def m2(self) -> bytes:
        ident, k_qkd = self.cfg.qkd_store.next_block()
        self.consumed_qkd = len(k_qkd)
        c_pq, ss_pq = self.kem.encapsulate(self.peer_eph_pk)
        fields = [c_pq, ident, self._rand_bytes(NONCE_BYTES), b""]
        pending = encode_message(2, fields)
        s1 = self._rand_bits(
            self._seed_len(self._stage_key_bits(1), len(pending)))
        fields[3] = s1.to_bytes()
        msg = encode_message(2, fields)
        self._append(msg)
        self._stage1(ss_pq, k_qkd, s1)
        return msg

    def m3(self) -> bytes:
        pad = self.pad_rhts.take(8 * self.cfg.kem_bytes)
        cert = BitString.from_bytes(self.cfg.long_term.public_key)
        msg = encode_message(3, [(cert ^ pad).to_bytes()])
        self._append(msg)
        return msg

    def on_m4(self, data: bytes) -> None:
        enc_c_i, seed_field = self._expect(data, 4, 2)
        self._check_bytes(enc_c_i, self.cfg.kem_bytes, "KEM ciphertext")
        self._append(data)
        want = self._seed_len(self._stage_key_bits(2), 0)
        s2 = self._bit_field(seed_field, want, "stage-2 seed")
        pad = self.pad_ihts.take(8 * self.cfg.kem_bytes)
        c_i = (BitString.from_bytes(enc_c_i) ^ pad).to_bytes()
        ss_i = self.kem.decapsulate(self.cfg.long_term.secret_key, c_i)
        self._stage2(ss_i, s2)

    def on_m5(self, data: bytes) -> None:
        (enc_cert,) = self._expect(data, 5, 1)
        self._check_bytes(enc_cert, self.cfg.kem_bytes, "certificate")
        self._append(data)
        pad = self.pad_iahts.take(8 * self.cfg.kem_bytes)
        cert = (BitString.from_bytes(enc_cert) ^ pad).to_bytes()
        if cert not in self.cfg.trusted_certs:
            self._abort(AbortReason.CERT_UNTRUSTED,
                        "initiator certificate not in the anchor set")
        self.peer_cert = cert

    def m6(self) -> bytes:
        c_r, self.ss_r = self.kem.encapsulate(self.peer_cert)
        pad = self.pad_rahts.take(8 * self.cfg.kem_bytes)
        fields = [(BitString.from_bytes(c_r) ^ pad).to_bytes(), b""]
        pending = encode_message(6, fields)
        s3 = self._rand_bits(
            self._seed_len(self._stage_key_bits(3), len(pending)))
        fields[1] = s3.to_bytes()
        msg = encode_message(6, fields)
        self._append(msg)
        self._stage3(self.ss_r, s3)
        return msg

    def on_m7(self, data: bytes) -> None:
        t = self.cfg.tag_bits
        enc_tag, seed_field = self._expect(data, 7, 2)
        enc = self._bit_field(enc_tag, t, "finish tag")
        self._append(data)
        want_len = self._seed_len(self._stage_key_bits(4), 0,
                                  self._m8_core_len())
        self.s4 = self._bit_field(seed_field, want_len, "stage-4 seed")
        tag = enc ^ self.pad_iahts.take(t)
        want = transcript_mac(self.intermediate["fk_I"], self._full(6), t)
        if tag != want:
            self._abort(AbortReason.MAC_FAIL_IF,
                        "initiator finish tag does not verify")

    def m8(self) -> bytes:
        t = self.cfg.tag_bits
        tag = transcript_mac(self.intermediate["fk_R"], self._full(7), t)
        enc = tag ^ self.pad_rahts.take(t)
        msg = encode_message(8, [enc.to_bytes()])
        self._append(msg)
        self._stage4(self.s4)
        return msg


def make_configs(n: int = 256,
                 eps_prime: SecurityLevel = SecurityLevel(64.0),
                 rng_seed: int = 0,
                 eps_qkd: Optional[SecurityLevel] = None,
                 eps_seed: Optional[SecurityLevel] = None,
                 tag_len: Optional[int] = None):
    """Build a matched (initiator_cfg, responder_cfg) pair.

    Shares one QKD store sized to the run's budget, one trust-anchor set
    holding both parties' static certificates, and one previous-session
    state; everything derives deterministically from rng_seed.
    """
    eps_qkd = eps_qkd if eps_qkd is not None else SecurityLevel.zero()
    eps_seed = eps_seed if eps_seed is not None else SecurityLevel.zero()
    params = budget(n, eps_prime)
    fixture_rng = np.random.default_rng([rng_seed, 4])
    store = MockQkdStore(block_bits=params.qkd_budget, eps=eps_qkd,
                         rng=np.random.default_rng([rng_seed, 3]))
    kem = MockKem(n // 2, fixture_rng)
    init_lt = kem.keypair()
    resp_lt = kem.keypair()
    trust = frozenset({init_lt.public_key, resp_lt.public_key})
    sec_state = BitString.from_u8(
        fixture_rng.integers(0, 2, size=n, dtype=np.uint8))
    common = dict(n=n, eps_prime=eps_prime, rng_seed=rng_seed,
                  qkd_store=store, trusted_certs=trust, sec_state=sec_state,
                  eps_qkd=eps_qkd, eps_seed=eps_seed, tag_len=tag_len)
    init_cfg = HandshakeConfig(rng_stream=1, long_term=init_lt, **common)
    resp_cfg = HandshakeConfig(rng_stream=2, long_term=resp_lt, **common)
    return init_cfg, resp_cfg


def run_handshake(init_cfg: HandshakeConfig, resp_cfg: HandshakeConfig,
                  channel: Optional[InMemoryChannel] = None,
                  tamper=None) -> RunResult:
    """Drive both state machines to completion or first abort.

    Args:
        init_cfg, resp_cfg: matched configurations (same n, eps, store).
        channel: transport; a fresh lossless one when omitted.
        tamper: TamperSpec or "m7:bit3"-style string applied in flight.

    Returns:
        RunResult; on Success both finals are present and equal, on
        Abort neither is.
    """
    if (init_cfg.n, init_cfg.eps_prime) != (resp_cfg.n, resp_cfg.eps_prime):
        raise ValueError("parties disagree on key length or eps")
    if isinstance(tamper, str):
        tamper = TamperSpec.parse(tamper)
    if channel is None:
        channel = InMemoryChannel()
    if tamper is not None:
        channel.tamper = tamper
    params = budget(init_cfg.n, init_cfg.eps_prime)
    init = Initiator(init_cfg, params)
    resp = Responder(resp_cfg, params)
    try:
        resp.on_m1(channel.deliver(init.m1()))
        init.on_m2(channel.deliver(resp.m2()))
        init.on_m3(channel.deliver(resp.m3()))
        resp.on_m4(channel.deliver(init.m4()))
        resp.on_m5(channel.deliver(init.m5()))
        init.on_m6(channel.deliver(resp.m6()))
        resp.on_m7(channel.deliver(init.m7()))
        init.on_m8(channel.deliver(resp.m8()))
    except HandshakeAbort as exc:
        return RunResult(None, None, OUTCOME_ABORT, exc.reason, exc.party,
                         params, tuple(channel.log), init, resp)
    except ChannelClosed:
        lost_to = RECEIVER[len(channel.log) + 1]
        return RunResult(None, None, OUTCOME_ABORT, AbortReason.CHANNEL_LOSS,
                         lost_to, params, tuple(channel.log), init, resp)
    filled = replace(params, seed_lens=tuple(init.seed_lens))
    return RunResult(init.finals, resp.finals, OUTCOME_SUCCESS, None, None,
                     filled, tuple(channel.log), init, resp)


def dump_transcript(messages) -> str:
    """Ordered hex records of delivered messages, one per line."""
    return "".join(f"m{i} {m.hex()}\n" for i, m in enumerate(messages, 1))
