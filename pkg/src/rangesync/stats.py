"""Session transcript statistics.

Byte counts cover everything a peer writes to its stream: its handshake,
the framing headers, part payloads, and its single completion frame.  The
completion frame that first signals the end of the session is also counted
as a message for its sender; the answering echo is counted in bytes only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

from .protocol import FingerprintPart

STATS_VERSION = 1


@dataclass
class TranscriptStats:
    messages_total: int = 0
    messages_from_initiator: int = 0
    messages_from_responder: int = 0
    parts_fingerprint: int = 0
    parts_itemset: int = 0
    items_transmitted: int = 0
    bytes_from_initiator: int = 0
    bytes_from_responder: int = 0
    max_parts_in_message: int = 0
    edges_traversed: int = 0
    duration: float = field(default=0.0, compare=False)

    def record_message(self, msg, nbytes: int, from_initiator: bool) -> None:
        """Account one data frame in the given direction."""
        if from_initiator:
            self.messages_from_initiator += 1
            self.bytes_from_initiator += nbytes
        else:
            self.messages_from_responder += 1
            self.bytes_from_responder += nbytes
        if len(msg.parts) > self.max_parts_in_message:
            self.max_parts_in_message = len(msg.parts)
        for part in msg.parts:
            if isinstance(part, FingerprintPart):
                self.parts_fingerprint += 1
            else:
                self.parts_itemset += 1
                self.items_transmitted += len(part.items)

    def finalize(self) -> "TranscriptStats":
        self.messages_total = self.messages_from_initiator + self.messages_from_responder
        return self

    def to_dict(self) -> dict:
        out = {"stats_version": STATS_VERSION}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out
