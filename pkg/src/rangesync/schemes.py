"""Monoidal fingerprint schemes.

A scheme is a monoid on fixed-length digests together with a projection from
items into the monoid.  The fingerprint of a set is the fold of ``combine``
over the projections of its members in ascending item order, starting from
``neutral``.  ``lift_oracle`` below computes exactly that fold and serves as
the ground truth the tree-based range computations are checked against.

Wire-registered schemes (see ``stores``):

===========  =========  ==========
name         scheme id  digest len
===========  =========  ==========
xor256         0x01        32
sum256         0x02        32
treap256       0x03        32  (not monoidal, implemented in ``treap``)
===========  =========  ==========

The counting scheme is internal plumbing and never appears on the wire.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import ConfigError

# names accepted by session configs and the CLI --scheme flag
SCHEME_NAMES = ("xor256", "sum256", "treap256")

SCHEME_ID_XOR256 = 0x01
SCHEME_ID_SUM256 = 0x02
SCHEME_ID_TREAP256 = 0x03


@dataclass(frozen=True)
class FingerprintScheme:
    """A commutative-or-not monoid over digests plus an item projection.

    ``combine`` must be associative with ``neutral`` as the identity, and for
    reconciliation use ``combine(x, .)`` must be a bijection for every ``x``
    so that fingerprints never collapse under aggregation.
    """

    name: str
    digest_len: int
    neutral: bytes
    combine: Callable[[bytes, bytes], bytes] = field(repr=False)
    project: Callable[[bytes], bytes] = field(repr=False)
    scheme_id: int | None = None  # None: internal only, never on the wire


def lift_oracle(scheme: FingerprintScheme, items: Iterable[bytes]) -> bytes:
    """Fold ``combine`` over ``project`` of strictly ascending ``items``.

    This is the reference definition of a set's fingerprint.  Input must be
    sorted strictly ascending; anything else raises ``ValueError``.
    """
    acc = scheme.neutral
    prev = None
    for item in items:
        if prev is not None and item <= prev:
            raise ValueError("lift_oracle requires strictly ascending input")
        prev = item
        acc = scheme.combine(acc, scheme.project(item))
    return acc


def _hash_constructor(hash_name: str):
    try:
        probe = hashlib.new(hash_name, b"")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"unknown hash {hash_name!r}") from exc
    if probe.digest_size != 32:
        raise ConfigError(
            f"hash {hash_name!r} has a {probe.digest_size * 8}-bit digest, expected 256 bits"
        )
    direct = getattr(hashlib, hash_name, None)
    if direct is not None:
        return direct
    return lambda data: hashlib.new(hash_name, data)


def make_xor_scheme(hash_name: str = "sha256") -> FingerprintScheme:
    """Bytewise XOR of 256-bit item hashes.  Fast, commutative, order-blind."""
    hasher = _hash_constructor(hash_name)

    def project(item: bytes) -> bytes:
        return hasher(item).digest()

    def combine(a: bytes, b: bytes) -> bytes:
        return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(32, "big")

    return FingerprintScheme(
        name="xor256",
        digest_len=32,
        neutral=bytes(32),
        combine=combine,
        project=project,
        scheme_id=SCHEME_ID_XOR256,
    )


def make_sum_scheme(hash_name: str = "sha256") -> FingerprintScheme:
    """Addition of item hashes modulo 2**256, big-endian digests."""
    hasher = _hash_constructor(hash_name)
    modulus = 1 << 256

    def project(item: bytes) -> bytes:
        return hasher(item).digest()

    def combine(a: bytes, b: bytes) -> bytes:
        return ((int.from_bytes(a, "big") + int.from_bytes(b, "big")) % modulus).to_bytes(32, "big")

    return FingerprintScheme(
        name="sum256",
        digest_len=32,
        neutral=bytes(32),
        combine=combine,
        project=project,
        scheme_id=SCHEME_ID_SUM256,
    )


def make_count_scheme() -> FingerprintScheme:
    """Item counting as a monoid: 8-byte big-endian counters, wrapping add."""
    one = (1).to_bytes(8, "big")
    modulus = 1 << 64

    def project(item: bytes) -> bytes:
        return one

    def combine(a: bytes, b: bytes) -> bytes:
        return ((int.from_bytes(a, "big") + int.from_bytes(b, "big")) % modulus).to_bytes(8, "big")

    return FingerprintScheme(
        name="count",
        digest_len=8,
        neutral=bytes(8),
        combine=combine,
        project=project,
        scheme_id=None,
    )
