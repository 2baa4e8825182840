"""Binary encoding and the stream transport driver.

Frame layout (all integers big-endian, no varints):

* handshake: magic "RBSR", version 0x01, item_width (1 byte), scheme_id
  (1 byte), digest_len (2 bytes) — 9 bytes; both peers send one and the
  two must be identical byte for byte.
* frame: part_count (4 bytes), then that many parts.  part_count 0 is the
  completion frame (DONE) and carries no payload; real messages are never
  empty, so the value is unambiguous.
* fingerprint part: tag 0x00, lower, upper (raw items), digest bytes.
* item-set part: tag 0x01, lower, upper, item count (4 bytes), raw items,
  flag byte (0x00 requests the peer's complement, 0x01 closes the range).

All widths are fixed by the handshake, so the encoding is canonical: two
distinct byte strings never decode to the same message.  Decoding enforces
a 16 MiB frame budget before allocating anything a length field promises.

``run_session`` drives one protocol session over any reliable ordered byte
stream in strict request/response alternation.  A session ends with a DONE
exchange: whichever side runs out of things to say sends DONE, the peer
answers DONE, both close.  The first DONE is counted as a message (it is
the only way its sender speaks in that round); the echo is counted in bytes
only.
"""

from __future__ import annotations

import struct
import time

from .errors import DecodeError, ProtocolError
from .protocol import FingerprintPart, ItemSetPart, Message, Part, Session
from .stats import TranscriptStats

MAGIC = b"RBSR"
VERSION = 0x01
HANDSHAKE = struct.Struct("!4sBBBH")
HANDSHAKE_LEN = HANDSHAKE.size  # 9
FRAME_HEADER = struct.Struct("!I")
DONE_FRAME = FRAME_HEADER.pack(0)
MAX_FRAME_BYTES = 16 * 1024 * 1024

TAG_FINGERPRINT = 0x00
TAG_ITEMSET = 0x01


def encode_handshake(item_width: int, scheme_id: int, digest_len: int) -> bytes:
    return HANDSHAKE.pack(MAGIC, VERSION, item_width, scheme_id, digest_len)


def decode_handshake(data: bytes) -> tuple[int, int, int]:
    """(item_width, scheme_id, digest_len); DecodeError on bad magic/version."""
    if len(data) != HANDSHAKE_LEN:
        raise DecodeError("handshake truncated", offset=len(data))
    magic, version, item_width, scheme_id, digest_len = HANDSHAKE.unpack(data)
    if magic != MAGIC:
        raise DecodeError("bad handshake magic", offset=0)
    if version != VERSION:
        raise DecodeError(f"unsupported version {version:#x}", offset=4)
    return item_width, scheme_id, digest_len


def encode_part(part: Part) -> bytes:
    if isinstance(part, FingerprintPart):
        return b"\x00" + part.lower + part.upper + part.fingerprint
    if isinstance(part, ItemSetPart):
        if len(part.items) >= 1 << 32:
            raise ValueError("too many items for one part")
        return (b"\x01" + part.lower + part.upper
                + FRAME_HEADER.pack(len(part.items))
                + b"".join(part.items)
                + (b"\x01" if part.final else b"\x00"))
    raise ValueError(f"unknown part kind {type(part).__name__}")


def encode_message(msg: Message) -> bytes:
    """Complete data frame: part count header plus encoded parts."""
    if not msg.parts:
        raise ValueError("cannot encode an empty message")
    if len(msg.parts) >= 1 << 32:
        raise ValueError("too many parts for one frame")
    body = b"".join(encode_part(part) for part in msg.parts)
    frame = FRAME_HEADER.pack(len(msg.parts)) + body
    if len(frame) > MAX_FRAME_BYTES:
        raise ValueError("message exceeds the frame size limit")
    return frame


class _Source:
    """Counted byte source enforcing the frame budget before each read."""

    __slots__ = ("_read", "offset")

    def __init__(self, read_fn):
        self._read = read_fn
        self.offset = 0

    def take(self, n: int) -> bytes:
        if self.offset + n > MAX_FRAME_BYTES:
            raise DecodeError("frame exceeds the 16 MiB limit", offset=self.offset)
        data = self._read(n)
        if len(data) != n:
            raise DecodeError("unexpected end of data", offset=self.offset + len(data))
        self.offset += n
        return data


def _bytes_reader(data: bytes):
    view = memoryview(data)
    pos = 0

    def read(n: int) -> bytes:
        nonlocal pos
        chunk = view[pos:pos + n]
        pos += len(chunk)
        return bytes(chunk)

    return read


def _stream_reader(stream):
    def read(n: int) -> bytes:
        chunks = []
        got = 0
        while got < n:
            chunk = stream.read(n - got)
            if not chunk:
                break
            chunks.append(chunk)
            got += len(chunk)
        return b"".join(chunks)

    return read


def _decode_parts(source: _Source, part_count: int, item_width: int,
                  digest_len: int) -> list[Part]:
    # cheapest possible part keeps an absurd part_count from passing the budget
    min_part = 1 + 2 * item_width + min(digest_len, 5)
    if 4 + part_count * min_part > MAX_FRAME_BYTES:
        raise DecodeError("frame exceeds the 16 MiB limit", offset=source.offset)
    parts: list[Part] = []
    for _ in range(part_count):
        tag_offset = source.offset
        tag = source.take(1)[0]
        lower = source.take(item_width)
        upper = source.take(item_width)
        if tag == TAG_FINGERPRINT:
            parts.append(FingerprintPart(lower, upper, source.take(digest_len)))
        elif tag == TAG_ITEMSET:
            (count,) = FRAME_HEADER.unpack(source.take(4))
            if source.offset + count * item_width + 1 > MAX_FRAME_BYTES:
                raise DecodeError("frame exceeds the 16 MiB limit", offset=source.offset)
            items = tuple(source.take(item_width) for _ in range(count))
            flag_offset = source.offset
            flag = source.take(1)[0]
            if flag not in (0, 1):
                raise DecodeError(f"invalid flag byte {flag:#x}", offset=flag_offset)
            parts.append(ItemSetPart(lower, upper, items, final=bool(flag)))
        else:
            raise DecodeError(f"unknown part tag {tag:#x}", offset=tag_offset)
    return parts


def decode_message(data: bytes, item_width: int, digest_len: int) -> Message:
    """Inverse of encode_message; rejects empty frames and trailing bytes."""
    if len(data) > MAX_FRAME_BYTES:
        raise DecodeError("frame exceeds the 16 MiB limit", offset=MAX_FRAME_BYTES)
    source = _Source(_bytes_reader(data))
    (part_count,) = FRAME_HEADER.unpack(source.take(4))
    if part_count == 0:
        raise DecodeError("part count zero is the completion frame, not a message", offset=0)
    parts = _decode_parts(source, part_count, item_width, digest_len)
    if source.offset != len(data):
        raise DecodeError("trailing bytes after message", offset=source.offset)
    return Message(tuple(parts))


def read_frame(stream, item_width: int, digest_len: int) -> tuple[Message | None, int]:
    """Read one frame; (None, 4) for the completion frame, else (msg, nbytes)."""
    source = _Source(_stream_reader(stream))
    (part_count,) = FRAME_HEADER.unpack(source.take(4))
    if part_count == 0:
        return None, source.offset
    parts = _decode_parts(source, part_count, item_width, digest_len)
    return Message(tuple(parts)), source.offset


def write_frame(stream, msg: Message | None) -> int:
    data = DONE_FRAME if msg is None else encode_message(msg)
    stream.write(data)
    return len(data)


def run_session(stream, session: Session) -> TranscriptStats:
    """Drive ``session`` over a connected read/write byte stream until the
    DONE exchange completes.

    The stream must be reliable and ordered (a socket makefile, a pipe, an
    in-memory pair).  Exactly one peer may hold the initiator role.  Stats
    count both directions; edges_traversed covers only the local store.
    """
    start = time.perf_counter()
    store = session.store
    i_am_initiator = session.role == "initiator"
    stats = TranscriptStats()
    if hasattr(store, "reset_edge_count"):
        store.reset_edge_count()

    def my_bytes(n: int) -> None:
        if i_am_initiator:
            stats.bytes_from_initiator += n
        else:
            stats.bytes_from_responder += n

    def peer_bytes(n: int) -> None:
        if i_am_initiator:
            stats.bytes_from_responder += n
        else:
            stats.bytes_from_initiator += n

    def my_done_message() -> None:
        if i_am_initiator:
            stats.messages_from_initiator += 1
        else:
            stats.messages_from_responder += 1

    def peer_done_message() -> None:
        if i_am_initiator:
            stats.messages_from_responder += 1
        else:
            stats.messages_from_initiator += 1

    mine = encode_handshake(store.item_width, store.scheme_id, store.digest_len)
    stream.write(mine)
    stream.flush()
    my_bytes(HANDSHAKE_LEN)
    theirs = _Source(_stream_reader(stream)).take(HANDSHAKE_LEN)
    peer_bytes(HANDSHAKE_LEN)
    decode_handshake(theirs)  # structural check with a useful error
    if theirs != mine:
        raise ProtocolError(
            "handshake mismatch: local %s peer %s" % (mine.hex(), theirs.hex()))

    sent_done = False
    if i_am_initiator:
        msg = session.initiate()
        nbytes = write_frame(stream, msg)
        stream.flush()
        stats.record_message(msg, nbytes, from_initiator=True)

    while True:
        msg, nbytes = read_frame(stream, store.item_width, store.digest_len)
        if msg is None:
            if sent_done:
                # echo of our completion frame
                peer_bytes(nbytes)
                break
            peer_bytes(nbytes)
            peer_done_message()
            session.mark_completed()
            my_bytes(write_frame(stream, None))
            stream.flush()
            break
        stats.record_message(msg, nbytes, from_initiator=not i_am_initiator)
        reply = session.handle_message(msg)
        if reply is None:
            my_bytes(write_frame(stream, None))
            stream.flush()
            my_done_message()
            sent_done = True
            continue
        nbytes = write_frame(stream, reply)
        stream.flush()
        stats.record_message(reply, nbytes, from_initiator=i_am_initiator)

    if hasattr(store, "edges_traversed"):
        stats.edges_traversed = store.edges_traversed
    stats.duration = time.perf_counter() - start
    return stats.finalize()
