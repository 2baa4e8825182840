"""Item set files: magic "RSET", 1-byte item width, 8-byte big-endian count,
then the items themselves, sorted ascending, no separators."""

from __future__ import annotations

import os
import struct

_HEADER = struct.Struct("!4sBQ")
_MAGIC = b"RSET"


def write_set_file(path: str | os.PathLike, items, item_width: int) -> None:
    """Write items (deduplicated, sorted) to ``path``."""
    unique = sorted(set(bytes(i) for i in items))
    for item in unique:
        if len(item) != item_width:
            raise ValueError(f"item width {len(item)} does not match declared {item_width}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, item_width, len(unique)))
        for item in unique:
            fh.write(item)


def read_set_file(path: str | os.PathLike) -> tuple[int, list[bytes]]:
    """(item_width, sorted items); ValueError on any malformation."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, item_width, count = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise ValueError(f"{path}: not a set file (bad magic)")
    if item_width < 1:
        raise ValueError(f"{path}: invalid item width 0")
    body = data[_HEADER.size:]
    if len(body) != count * item_width:
        raise ValueError(f"{path}: expected {count} items of width {item_width}, "
                         f"got {len(body)} bytes")
    items = [body[i * item_width:(i + 1) * item_width] for i in range(count)]
    for prev, cur in zip(items, items[1:]):
        if cur <= prev:
            raise ValueError(f"{path}: items not strictly ascending")
    return item_width, items
