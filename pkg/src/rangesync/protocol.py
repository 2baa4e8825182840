"""Recursive range reconciliation sessions.

Two peers each hold a set of fixed-width items in a store that can
fingerprint any cyclic range.  The initiator sends the fingerprint of the
full key space; whenever a received range fingerprint disagrees with the
local one, the range is either answered with its raw items (small ranges,
the recursion anchor) or split into subranges that are fingerprinted in
turn.  Ranges whose fingerprints agree are dropped immediately, so traffic
concentrates on the differences.

A message is a nonempty batch of parts, each scoped to a cyclic range
[lower, upper); ranges within one message never overlap and arrive sorted
by lower boundary.  Two part kinds exist:

* ``FingerprintPart``: the sender's fingerprint of the range.
* ``ItemSetPart``: the sender's complete item list for the range.  Its
  ``final`` flag steers termination: a part with ``final=False`` asks the
  receiver to reply with the items it has that the sender lacks; a part
  with ``final=True`` is itself such a reply and is never answered.

``handle_message`` returns the reply message, or None once it has nothing
left to say, which is the session-completion signal (carried on the wire as
an explicit empty frame by the transport layer).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ConfigError, ProtocolError
from .items import item_in_range, validate_item, zero_item
from .schemes import SCHEME_NAMES

SPLIT_STRATEGIES = ("equal", "random_shift", "random")


@dataclass(frozen=True)
class FingerprintPart:
    lower: bytes
    upper: bytes
    fingerprint: bytes


@dataclass(frozen=True)
class ItemSetPart:
    lower: bytes
    upper: bytes
    items: tuple[bytes, ...]
    final: bool  # True: reply part, do not answer; False: complement requested

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


Part = Union[FingerprintPart, ItemSetPart]


@dataclass(frozen=True)
class Message:
    parts: tuple[Part, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class SessionConfig:
    """Per-session knobs; both peers may use different values except for
    scheme and item_width, which the wire handshake pins to equality."""

    scheme: str = "xor256"
    item_width: int = 32
    branching: int = 2
    threshold: int = 1
    split_strategy: str = "equal"
    max_shift: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEME_NAMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.item_width < 1:
            raise ConfigError("item_width must be positive")
        if self.branching < 2:
            raise ConfigError("branching must be at least 2")
        if self.threshold < 1:
            raise ConfigError("threshold must be at least 1")
        if self.split_strategy not in SPLIT_STRATEGIES:
            raise ConfigError(f"unknown split strategy {self.split_strategy!r}")
        if self.max_shift < 0:
            raise ConfigError("max_shift must be nonnegative")


def _is_wrapped(part: Part) -> bool:
    return part.upper < part.lower


def validate_message(msg: Message, item_width: int, digest_len: int) -> None:
    """Structural sanity of a message against the session's dimensions.

    Raises ProtocolError on: empty part list, wrong item or digest widths,
    items out of their part's range or not cyclically ascending from the
    lower boundary, duplicated items, parts not sorted ascending by lower
    boundary, overlapping parts, a full-range part sharing the message with
    others, or more than one wrapped part.
    """
    parts = msg.parts
    if not parts:
        raise ProtocolError("message must contain at least one part")
    full_seen = False
    wrapped_seen = False
    for part in parts:
        if len(part.lower) != item_width or len(part.upper) != item_width:
            raise ProtocolError("range boundary width mismatch")
        if part.lower == part.upper:
            full_seen = True
        elif part.upper < part.lower:
            if wrapped_seen:
                raise ProtocolError("more than one wrapped part")
            wrapped_seen = True
        if isinstance(part, FingerprintPart):
            if len(part.fingerprint) != digest_len:
                raise ProtocolError("fingerprint length mismatch")
        elif isinstance(part, ItemSetPart):
            if not isinstance(part.final, bool):
                raise ProtocolError("item set flag must be a boolean")
            prev_key = None
            for item in part.items:
                if len(item) != item_width:
                    raise ProtocolError("item width mismatch")
                if not item_in_range(item, part.lower, part.upper):
                    raise ProtocolError("item outside its part's range")
                # ascending in cyclic order starting at the lower boundary
                key = (0 if item >= part.lower else 1, item)
                if prev_key is not None and key <= prev_key:
                    raise ProtocolError("items not ascending from range start")
                prev_key = key
        else:
            raise ProtocolError("unknown part kind")
    if full_seen and len(parts) > 1:
        raise ProtocolError("full-range part must be the only part")
    for prev, cur in zip(parts, parts[1:]):
        if cur.lower <= prev.lower:
            raise ProtocolError("parts not sorted by lower boundary")
        if not _is_wrapped(prev) and prev.upper > cur.lower:
            raise ProtocolError("parts overlap")
        if _is_wrapped(prev):
            raise ProtocolError("wrapped part must come last")
    if wrapped_seen and len(parts) > 1:
        last = parts[-1]
        if not _is_wrapped(last):
            raise ProtocolError("wrapped part must come last")
        if last.upper > parts[0].lower:
            raise ProtocolError("wrapped part overlaps the first part")


def split_range(store, lower: bytes, upper: bytes, count: int,
                branching: int, strategy: str, max_shift: int,
                rng: random.Random) -> list[bytes]:
    """Boundaries m_0 .. m_k with m_0 = lower, m_k = upper, splitting the
    range into k = min(branching, count) nonempty subranges.

    Interior boundaries sit on stored items, found by rank so the work per
    boundary is O(log n).  ``equal`` places them at ranks ceil(j*count/k);
    ``random_shift`` perturbs each equal rank by a uniform offset in
    [-max_shift, +max_shift]; ``random`` draws interior ranks uniformly.
    The random variants clamp ranks into [1, count-1] and drop duplicates,
    which can merge subranges but keeps every survivor nonempty.
    """
    if count < 2:
        raise ValueError("splitting needs at least two local items")
    k = min(branching, count)
    if strategy == "equal":
        ranks = [(j * count + k - 1) // k for j in range(1, k)]
    elif strategy == "random_shift":
        ranks = []
        for j in range(1, k):
            base = (j * count + k - 1) // k
            shifted = base + rng.randint(-max_shift, max_shift)
            ranks.append(min(max(shifted, 1), count - 1))
        ranks = sorted(set(ranks))
    elif strategy == "random":
        ranks = sorted({rng.randint(1, count - 1) for _ in range(k - 1)})
    else:
        raise ValueError(f"unknown split strategy {strategy!r}")
    boundaries = [lower]
    for rank in ranks:
        boundary = store.rank_in_range(lower, rank)
        if boundary != boundaries[-1]:
            boundaries.append(boundary)
    boundaries.append(upper)
    return boundaries


class Session:
    """One peer's half of a reconciliation session over a single store."""

    def __init__(self, store, config: SessionConfig, role: str):
        if role not in ("initiator", "responder"):
            raise ConfigError(f"role must be initiator or responder, got {role!r}")
        if store.item_width != config.item_width:
            raise ConfigError("store and config disagree on item width")
        self.store = store
        self.config = config
        self.role = role
        self.completed = False
        # distinct per-role streams so both peers may share a config seed
        self._rng = random.Random(config.seed * 2 + (0 if role == "initiator" else 1))

    @property
    def is_complete(self) -> bool:
        return self.completed

    def mark_completed(self) -> None:
        self.completed = True

    def initiate(self) -> Message:
        """Opening message: one fingerprint part covering the full key space."""
        if self.completed:
            raise ProtocolError("session already completed")
        if len(self.store):
            anchor = self.store.min_item()
        else:
            anchor = zero_item(self.config.item_width)
        return Message((FingerprintPart(anchor, anchor,
                                        self.store.aggregate_range(anchor, anchor)),))

    def handle_message(self, msg: Message) -> Optional[Message]:
        """Apply one incoming message and build the reply.

        Incoming items are inserted into the store before any fingerprint in
        the same message is evaluated.  Returns None when the reply would be
        empty, marking the session complete.
        """
        if self.completed:
            raise ProtocolError("session already completed")
        validate_message(msg, self.config.item_width, self.store.digest_len)
        for part in msg.parts:
            if isinstance(part, ItemSetPart):
                for item in part.items:
                    self.store.insert(item)
        response: list[Part] = []
        for part in msg.parts:
            if isinstance(part, ItemSetPart):
                self._answer_item_set(part, response)
            else:
                self._answer_fingerprint(part, response)
        if not response:
            self.completed = True
            return None
        response.sort(key=lambda p: p.lower)
        return Message(tuple(response))

    def _answer_item_set(self, part: ItemSetPart, response: list[Part]) -> None:
        if part.final:
            return
        received = set(part.items)
        complement = tuple(item for item in self.store.items_in_range(part.lower, part.upper)
                           if item not in received)
        if complement:
            response.append(ItemSetPart(part.lower, part.upper, complement, final=True))

    def _answer_fingerprint(self, part: FingerprintPart, response: list[Part]) -> None:
        local = self.store.aggregate_range(part.lower, part.upper)
        if local == part.fingerprint:
            return
        count = self.store.count_in_range(part.lower, part.upper)
        cfg = self.config
        if count <= cfg.threshold or part.fingerprint == self.store.empty_fingerprint:
            # anchor: ship everything we have, even an empty list, so the
            # peer learns the range is settled on our side and sends its own
            items = tuple(self.store.items_in_range(part.lower, part.upper))
            response.append(ItemSetPart(part.lower, part.upper, items, final=False))
            return
        boundaries = split_range(self.store, part.lower, part.upper, count,
                                 cfg.branching, cfg.split_strategy, cfg.max_shift,
                                 self._rng)
        for lo, hi in zip(boundaries, boundaries[1:]):
            sub_count = self.store.count_in_range(lo, hi)
            if sub_count > cfg.threshold:
                response.append(FingerprintPart(lo, hi, self.store.aggregate_range(lo, hi)))
            else:
                sub_items = tuple(self.store.items_in_range(lo, hi))
                response.append(ItemSetPart(lo, hi, sub_items, final=False))
