"""History-independent treap with Merkle subtree labels.

Shape is a pure function of the stored set: each item's heap priority is a
hash of the item itself, so any insertion order produces the same tree and
therefore the same root label.  That root label doubles as a pseudorandom
fingerprint of the whole set, and labels of key-contiguous subsets can be
computed in O(log n) without rebuilding, because the restriction of a treap
to a contiguous key range is again the unique treap on that subset.

Hash conventions (wire compatibility; both reconciling parties must agree):

* priority(v)      = sha256(0x00 || v), compared as big-endian integers,
  ties broken toward the larger item
* label hash  h(m) = sha256(0x01 || m)
* empty set        = h("")
* leaf label       = h(value); internal label = h(in-order concatenation of
  the present child labels and h(value))
* wrapped range    = h(0x02 || high-part label || low-part label), with
  absent halves omitted
"""

from __future__ import annotations

import hashlib
import random

from ._bst import OrderedStoreMixin
from .items import DEFAULT_ITEM_WIDTH, validate_item
from .schemes import SCHEME_ID_TREAP256

PRIORITY_BITS = 256


def priority_of(item: bytes) -> bytes:
    return hashlib.sha256(b"\x00" + item).digest()


def label_hash(payload: bytes) -> bytes:
    return hashlib.sha256(b"\x01" + payload).digest()


EMPTY_LABEL = label_hash(b"")


def _combine_parts(left: bytes | None, middle: bytes, right: bytes | None) -> bytes:
    """Label of a vertex from its child labels (absent children skipped).

    A childless vertex keeps its bare item hash.
    """
    if left is None:
        if right is None:
            return middle
        return label_hash(middle + right)
    if right is None:
        return label_hash(left + middle)
    return label_hash(left + middle + right)


class _TreapNode:
    __slots__ = ("value", "item_hash", "priority", "left", "right", "parent",
                 "size", "max_value", "label")

    def __init__(self, value: bytes, parent: "_TreapNode | None"):
        self.value = value
        self.item_hash = label_hash(value)
        self.priority = priority_of(value)
        self.left = None
        self.right = None
        self.parent = parent
        self.size = 1
        self.max_value = value
        self.label = self.item_hash


class MerkleTreap(OrderedStoreMixin):
    """Set of fixed-width items fingerprinted by Merkle treap labels."""

    scheme_id = SCHEME_ID_TREAP256
    digest_len = 32
    scheme_name = "treap256"

    def __init__(self, item_width: int = DEFAULT_ITEM_WIDTH):
        if item_width < 1:
            raise ValueError("item_width must be positive")
        self.item_width = item_width
        self._root: _TreapNode | None = None
        self.edges_traversed = 0

    @property
    def empty_fingerprint(self) -> bytes:
        return EMPTY_LABEL

    @property
    def root_label(self) -> bytes:
        return self._root.label if self._root is not None else EMPTY_LABEL

    def reset_edge_count(self) -> None:
        self.edges_traversed = 0

    # -- maintenance ----------------------------------------------------------

    def _update(self, node: _TreapNode) -> None:
        left, right = node.left, node.right
        node.size = 1 + (left.size if left is not None else 0) + (right.size if right is not None else 0)
        node.max_value = right.max_value if right is not None else node.value
        node.label = _combine_parts(left.label if left is not None else None,
                                    node.item_hash,
                                    right.label if right is not None else None)

    @staticmethod
    def _key(node: _TreapNode) -> tuple[bytes, bytes]:
        return node.priority, node.value

    def insert(self, item: bytes) -> bool:
        """Add ``item``; returns False if it was already present."""
        item = validate_item(item, self.item_width)
        if self._root is None:
            self._root = _TreapNode(item, None)
            return True
        node = self._root
        while True:
            if item == node.value:
                return False
            if item < node.value:
                if node.left is None:
                    fresh = _TreapNode(item, node)
                    node.left = fresh
                    break
                node = node.left
            else:
                if node.right is None:
                    fresh = _TreapNode(item, node)
                    node.right = fresh
                    break
                node = node.right
        # restore the heap property by rotating the new vertex upward
        node = fresh
        key = self._key(node)
        while node.parent is not None and key > self._key(node.parent):
            parent = node.parent
            if parent.left is node:
                self._rotate_right(parent)
            else:
                self._rotate_left(parent)
        walk = node.parent
        while walk is not None:
            self._update(walk)
            walk = walk.parent
        return True

    def delete(self, item: bytes) -> bool:
        """Remove ``item``; returns False if it was not present."""
        item = validate_item(item, self.item_width)
        node = self._root
        while node is not None and node.value != item:
            node = node.left if item < node.value else node.right
        if node is None:
            return False
        # sink the vertex until it has at most one child
        while node.left is not None and node.right is not None:
            if self._key(node.left) > self._key(node.right):
                self._rotate_right(node)
            else:
                self._rotate_left(node)
        child = node.left if node.left is not None else node.right
        parent = node.parent
        if child is not None:
            child.parent = parent
        if parent is None:
            self._root = child
        elif parent.left is node:
            parent.left = child
        else:
            parent.right = child
        while parent is not None:
            self._update(parent)
            parent = parent.parent
        return True

    # -- range fingerprints -----------------------------------------------------

    def aggregate_range(self, lower: bytes, upper: bytes) -> bytes:
        """Fingerprint of the stored items inside the cyclic range [lower, upper).

        Equals the root label of a treap built from scratch on exactly those
        items; a wrapped range hashes the labels of its two halves together
        under a dedicated tag.
        """
        lower = validate_item(lower, self.item_width)
        upper = validate_item(upper, self.item_width)
        if lower == upper:
            return self.root_label
        if lower < upper:
            part = self._range_label(lower, upper)
            return part if part is not None else EMPTY_LABEL
        high = self._range_label(lower, None)
        low = self._range_label(None, upper)
        if high is None and low is None:
            return EMPTY_LABEL
        return label_hash(b"\x02" + (high or b"") + (low or b""))

    def _range_label(self, lower: bytes | None, upper: bytes | None) -> bytes | None:
        """Sub-treap label for [lower, upper) with None meaning unbounded;
        None result means the range holds no items."""
        edges = 0
        node = self._root
        while node is not None:
            if lower is not None and node.value < lower:
                node = node.right
                edges += 1
            elif upper is not None and node.value >= upper:
                node = node.left
                edges += 1
            else:
                break
        if node is None:
            self.edges_traversed += edges
            return None

        # highest-priority vertex in range: root of the restricted treap
        if lower is None:
            left_part = node.left.label if node.left is not None else None
        else:
            pending = []
            walk = node.left
            while walk is not None:
                edges += 1
                if walk.value < lower:
                    walk = walk.right
                else:
                    pending.append((walk.item_hash,
                                    walk.right.label if walk.right is not None else None))
                    walk = walk.left
            left_part = None
            while pending:
                middle, right = pending.pop()
                left_part = _combine_parts(left_part, middle, right)

        if upper is None:
            right_part = node.right.label if node.right is not None else None
        else:
            pending = []
            walk = node.right
            while walk is not None:
                edges += 1
                if walk.value >= upper:
                    walk = walk.left
                else:
                    pending.append((walk.left.label if walk.left is not None else None,
                                    walk.item_hash))
                    walk = walk.right
            right_part = None
            while pending:
                left, middle = pending.pop()
                right_part = _combine_parts(left, middle, right_part)

        self.edges_traversed += edges
        return _combine_parts(left_part, node.item_hash, right_part)


def adversarial_sequence(n: int, seed: int, item_width: int = DEFAULT_ITEM_WIDTH) -> list[bytes]:
    """n strictly ascending items whose priorities are also ascending, so the
    treap on them degenerates to a path of height n.

    Item i is found by scanning consecutive candidate values until one's
    priority lands in the i-th of n equal slices of priority space; each item
    costs n candidate hashes in expectation, n**2 overall.  Raises ValueError
    if the item space runs out before n items are found (tiny widths only).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = 1 << (8 * item_width)
    rng = random.Random(seed)
    candidate = rng.randrange(limit // 2) if limit > 1 else 0
    items: list[bytes] = []
    for i in range(n):
        bucket_lo = (i << PRIORITY_BITS) // n
        bucket_hi = ((i + 1) << PRIORITY_BITS) // n
        while True:
            if candidate >= limit:
                raise ValueError(
                    "item space exhausted after %d of %d items (width %d)"
                    % (len(items), n, item_width))
            item = candidate.to_bytes(item_width, "big")
            candidate += 1
            pr = int.from_bytes(priority_of(item), "big")
            if bucket_lo <= pr < bucket_hi:
                items.append(item)
                break
    return items
