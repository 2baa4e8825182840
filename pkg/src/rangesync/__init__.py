"""Range-fingerprint set reconciliation.

Two peers holding sets of fixed-width byte strings converge on the union by
exchanging fingerprints of cyclic key ranges, recursively narrowing on the
ranges that disagree, with communication proportional to the size of the
symmetric difference rather than the sets themselves.

Layers, bottom up: ``items`` (byte-string items and cyclic ranges),
``schemes`` (monoidal fingerprints), ``tree`` / ``treap`` (stores with
O(log n) range fingerprints), ``protocol`` (message handling and recursion
policy), ``wire`` (binary codec and stream driver), ``harness`` (simulator,
scenario generators, benchmarks), ``cli``.
"""

from .errors import ConfigError, DecodeError, ProtocolError
from .items import (DEFAULT_ITEM_WIDTH, RangeBounds, item_compare,
                    item_from_int, item_in_range, item_to_int, validate_item,
                    zero_item)
from .schemes import (SCHEME_NAMES, FingerprintScheme, lift_oracle,
                      make_count_scheme, make_sum_scheme, make_xor_scheme)
from .tree import MonoidTree, RangeCursor
from .treap import MerkleTreap, adversarial_sequence
from .stores import make_store, scheme_for_id, scheme_id_for
from .protocol import (FingerprintPart, ItemSetPart, Message, Session,
                       SessionConfig, split_range, validate_message)
from .stats import TranscriptStats
from .wire import (decode_handshake, decode_message, encode_handshake,
                   encode_message, encode_part, read_frame, run_session,
                   write_frame)
from .setfile import read_set_file, write_set_file
from .harness import (SCENARIO_KINDS, ScenarioSpec, bench, gen_scenario,
                      round_bound, simulate, volume_bound)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DecodeError", "ProtocolError",
    "DEFAULT_ITEM_WIDTH", "RangeBounds", "item_compare", "item_from_int",
    "item_in_range", "item_to_int", "validate_item", "zero_item",
    "SCHEME_NAMES", "FingerprintScheme", "lift_oracle",
    "make_count_scheme", "make_sum_scheme", "make_xor_scheme",
    "MonoidTree", "RangeCursor", "MerkleTreap", "adversarial_sequence",
    "make_store", "scheme_for_id", "scheme_id_for",
    "FingerprintPart", "ItemSetPart", "Message", "Session", "SessionConfig",
    "split_range", "validate_message", "TranscriptStats",
    "decode_handshake", "decode_message", "encode_handshake",
    "encode_message", "encode_part", "read_frame", "run_session", "write_frame",
    "read_set_file", "write_set_file",
    "SCENARIO_KINDS", "ScenarioSpec", "bench", "gen_scenario",
    "round_bound", "simulate", "volume_bound",
    "__version__",
]
