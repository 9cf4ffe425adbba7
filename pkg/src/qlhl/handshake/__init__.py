"""Hybrid key-agreement simulator: wire codec, providers, MACs,
key schedule, and the two-party protocol driver."""

from .mac import (MacKey, its_mac_auth, its_mac_verify, one_shot_key_len,
                  split_mac_key, transcript_mac, transcript_mac_verify)
from .protocol import (AbortReason, ChannelClosed, Finals, HandshakeAbort,
                       HandshakeConfig, InMemoryChannel, Initiator,
                       OneTimePad, OUTCOME_ABORT, OUTCOME_SUCCESS,
                       PadExhaustedError, Responder, RunResult, TamperSpec,
                       default_tag_len, dump_transcript, make_configs,
                       run_handshake)
from .providers import (KemKeyPair, MockKem, MockQkdStore,
                        UnknownQkdIdError, prf_expand)
from .schedule import (KEY_NAMES, BudgetExceeded, ScheduleParams, budget,
                       schedule_stage)
from .wire import (SEED_FIELD_INDEX, WireError, core_form, core_of_wire,
                   decode_message, encode_message, field_to_bits)

__all__ = [
    "AbortReason", "BudgetExceeded", "ChannelClosed", "Finals",
    "HandshakeAbort", "HandshakeConfig", "InMemoryChannel", "Initiator",
    "KemKeyPair", "KEY_NAMES", "MacKey", "MockKem", "MockQkdStore",
    "OneTimePad", "OUTCOME_ABORT", "OUTCOME_SUCCESS", "PadExhaustedError",
    "Responder", "RunResult", "ScheduleParams", "SEED_FIELD_INDEX",
    "TamperSpec", "UnknownQkdIdError", "WireError", "budget", "core_form",
    "core_of_wire", "decode_message", "default_tag_len", "dump_transcript",
    "encode_message", "field_to_bits", "its_mac_auth", "its_mac_verify",
    "make_configs", "one_shot_key_len", "prf_expand", "run_handshake",
    "schedule_stage", "split_mac_key", "transcript_mac",
    "transcript_mac_verify",
]
