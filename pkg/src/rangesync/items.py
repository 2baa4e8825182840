"""Fixed-width items and cyclic half-open ranges.

Items are plain ``bytes`` values of one session-wide width, ordered
lexicographically (for equal widths that coincides with big-endian integer
order).  A range ``[lower, upper)`` is half open and cyclic:

* ``lower < upper``: the usual interval, ``lower <= s < upper``;
* ``upper < lower``: the interval wraps around the top of the item space,
  it contains everything *not* in ``[upper, lower)``;
* ``lower == upper``: the full item space.

Range boundaries are ordinary items and do not have to be stored in any set.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ITEM_WIDTH = 32


def validate_item(item: bytes, width: int) -> bytes:
    """Return ``item`` unchanged, raising ``ValueError`` on a width mismatch."""
    if not isinstance(item, (bytes, bytearray)):
        raise ValueError(f"item must be bytes, got {type(item).__name__}")
    if len(item) != width:
        raise ValueError(f"item width {len(item)} does not match configured width {width}")
    return bytes(item)


def zero_item(width: int) -> bytes:
    return bytes(width)


def item_compare(a: bytes, b: bytes) -> int:
    """Three-way comparison of two items of equal width: -1, 0 or 1."""
    if len(a) != len(b):
        raise ValueError(f"cannot compare items of widths {len(a)} and {len(b)}")
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def item_from_int(value: int, width: int) -> bytes:
    return value.to_bytes(width, "big")


def item_to_int(item: bytes) -> int:
    return int.from_bytes(item, "big")


def item_in_range(item: bytes, lower: bytes, upper: bytes) -> bool:
    """Membership test against the cyclic range ``[lower, upper)``."""
    if lower < upper:
        return lower <= item < upper
    if upper < lower:
        return item >= lower or item < upper
    return True


@dataclass(frozen=True)
class RangeBounds:
    """A cyclic half-open range, ``lower`` included and ``upper`` excluded."""

    lower: bytes
    upper: bytes

    def contains(self, item: bytes) -> bool:
        return item_in_range(item, self.lower, self.upper)

    def is_full(self) -> bool:
        return self.lower == self.upper


def range_contains(bounds: RangeBounds, item: bytes) -> bool:
    return item_in_range(item, bounds.lower, bounds.upper)


def range_is_full(bounds: RangeBounds) -> bool:
    return bounds.lower == bounds.upper
