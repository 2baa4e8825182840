"""Store construction from a fingerprint scheme name.

Every store exposes the same surface regardless of backend: insert, delete,
membership, ordered iteration, rank lookups, count_in_range/items_in_range,
aggregate_range, min_item/max_item, plus item_width, digest_len, scheme_id
and empty_fingerprint for the wire handshake.
"""

from __future__ import annotations

from .errors import ConfigError
from .items import DEFAULT_ITEM_WIDTH
from .schemes import (SCHEME_ID_SUM256, SCHEME_ID_TREAP256, SCHEME_ID_XOR256,
                      SCHEME_NAMES, make_sum_scheme, make_xor_scheme)
from .treap import MerkleTreap
from .tree import MonoidTree

_SCHEME_IDS = {
    "xor256": SCHEME_ID_XOR256,
    "sum256": SCHEME_ID_SUM256,
    "treap256": SCHEME_ID_TREAP256,
}


def make_store(scheme: str, item_width: int = DEFAULT_ITEM_WIDTH):
    """Empty store for the named scheme; ConfigError on unknown names."""
    if scheme == "xor256":
        return MonoidTree(make_xor_scheme(), item_width=item_width)
    if scheme == "sum256":
        return MonoidTree(make_sum_scheme(), item_width=item_width)
    if scheme == "treap256":
        return MerkleTreap(item_width=item_width)
    raise ConfigError(f"unknown scheme {scheme!r}, expected one of {', '.join(SCHEME_NAMES)}")


def scheme_id_for(scheme: str) -> int:
    try:
        return _SCHEME_IDS[scheme]
    except KeyError:
        raise ConfigError(f"unknown scheme {scheme!r}") from None


def scheme_for_id(scheme_id: int) -> str:
    for name, known in _SCHEME_IDS.items():
        if known == scheme_id:
            return name
    raise ConfigError(f"unknown scheme id {scheme_id:#x}")
