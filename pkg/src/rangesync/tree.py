"""Balanced search tree with cached monoid fingerprints.

Every vertex stores, besides its item, the monoid fold of its whole subtree
(in ascending item order), the subtree size, the subtree maximum and a parent
link.  Inserts and deletes are AVL-balanced, so the height stays within
1.45 * log2(n + 2) and updates touch O(log n) vertices.

Two query paths are provided:

* ``aggregate_range(x, y)`` folds one cyclic range in O(log n) by walking the
  two boundary paths and stitching cached subtree labels between them.
* ``cursor(x)`` plus repeated ``aggregate_until(cursor, x, y)`` serve a
  sorted sweep of many ranges; the sweep resumes where the previous range
  ended and a full pass touches every edge at most twice overall.

``edges_traversed`` counts parent/child steps taken by the query paths (not
by inserts or deletes) and exists purely for instrumentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ._bst import OrderedStoreMixin
from .items import DEFAULT_ITEM_WIDTH, validate_item
from .schemes import FingerprintScheme


class _Node:
    __slots__ = ("value", "item_fp", "left", "right", "parent",
                 "height", "size", "max_value", "label")

    def __init__(self, value: bytes, item_fp: bytes, parent: "_Node | None"):
        self.value = value
        self.item_fp = item_fp
        self.left = None
        self.right = None
        self.parent = parent
        self.height = 1
        self.size = 1
        self.max_value = value
        self.label = item_fp


@dataclass
class RangeCursor:
    """Position of an ascending sweep: the node holding the least stored item
    at or above the last processed upper bound, or ``None`` once exhausted."""

    node: Optional[_Node]

    @property
    def exhausted(self) -> bool:
        return self.node is None

    @property
    def item(self) -> Optional[bytes]:
        return self.node.value if self.node is not None else None


class MonoidTree(OrderedStoreMixin):
    """Set of fixed-width items with O(log n) cyclic range fingerprints."""

    def __init__(self, scheme: FingerprintScheme, item_width: int = DEFAULT_ITEM_WIDTH):
        if item_width < 1:
            raise ValueError("item_width must be positive")
        self.scheme = scheme
        self.item_width = item_width
        self.scheme_id = scheme.scheme_id
        self.digest_len = scheme.digest_len
        self._root: _Node | None = None
        self.edges_traversed = 0

    # -- scheme-facing helpers ----------------------------------------------

    @property
    def scheme_name(self) -> str:
        return self.scheme.name

    @property
    def empty_fingerprint(self) -> bytes:
        return self.scheme.neutral

    @property
    def root_label(self) -> bytes:
        """Fingerprint of the complete stored set."""
        return self._root.label if self._root is not None else self.scheme.neutral

    def reset_edge_count(self) -> None:
        self.edges_traversed = 0

    # -- maintenance ----------------------------------------------------------

    def _update(self, node: _Node) -> None:
        left, right = node.left, node.right
        lh = left.height if left is not None else 0
        rh = right.height if right is not None else 0
        node.height = (lh if lh > rh else rh) + 1
        node.size = 1 + (left.size if left is not None else 0) + (right.size if right is not None else 0)
        node.max_value = right.max_value if right is not None else node.value
        combine = self.scheme.combine
        label = node.item_fp
        if left is not None:
            label = combine(left.label, label)
        if right is not None:
            label = combine(label, right.label)
        node.label = label

    def _rebalance(self, node: _Node) -> _Node:
        left, right = node.left, node.right
        lh = left.height if left is not None else 0
        rh = right.height if right is not None else 0
        if lh - rh > 1:
            inner = left.left.height if left.left is not None else 0
            outer = left.right.height if left.right is not None else 0
            if inner < outer:
                self._rotate_left(left)
            return self._rotate_right(node)
        if rh - lh > 1:
            inner = right.right.height if right.right is not None else 0
            outer = right.left.height if right.left is not None else 0
            if inner < outer:
                self._rotate_right(right)
            return self._rotate_left(node)
        return node

    def _retrace(self, node: _Node | None) -> None:
        # Labels change along the whole root path, so always walk to the top.
        while node is not None:
            self._update(node)
            node = self._rebalance(node)
            node = node.parent

    def insert(self, item: bytes) -> bool:
        """Add ``item``; returns False if it was already present."""
        item = validate_item(item, self.item_width)
        if self._root is None:
            self._root = _Node(item, self.scheme.project(item), None)
            return True
        node = self._root
        while True:
            if item == node.value:
                return False
            if item < node.value:
                if node.left is None:
                    fresh = _Node(item, self.scheme.project(item), node)
                    node.left = fresh
                    break
                node = node.left
            else:
                if node.right is None:
                    fresh = _Node(item, self.scheme.project(item), node)
                    node.right = fresh
                    break
                node = node.right
        self._retrace(node)
        return True

    def delete(self, item: bytes) -> bool:
        """Remove ``item``; returns False if it was not present."""
        item = validate_item(item, self.item_width)
        node = self._root
        while node is not None and node.value != item:
            node = node.left if item < node.value else node.right
        if node is None:
            return False
        if node.left is not None and node.right is not None:
            successor = node.right
            while successor.left is not None:
                successor = successor.left
            node.value = successor.value
            node.item_fp = successor.item_fp
            node = successor
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
        self._retrace(parent)
        return True

    # -- single-range aggregation ---------------------------------------------

    def aggregate_range(self, lower: bytes, upper: bytes) -> bytes:
        """Fingerprint of the stored items inside the cyclic range [lower, upper).

        For a wrapped range the fold runs in cyclic ascending order starting
        at ``lower``: first the items at or above ``lower``, then the items
        below ``upper``.
        """
        lower = validate_item(lower, self.item_width)
        upper = validate_item(upper, self.item_width)
        if lower == upper:
            return self.root_label
        if lower < upper:
            return self._aggregate(lower, upper)
        high = self._aggregate(lower, None)
        low = self._aggregate(None, upper)
        return self.scheme.combine(high, low)

    def _aggregate(self, lower: bytes | None, upper: bytes | None) -> bytes:
        combine = self.scheme.combine
        neutral = self.scheme.neutral
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
            return neutral

        if lower is None:
            left_acc = node.left.label if node.left is not None else neutral
        else:
            left_acc = neutral
            walk = node.left
            while walk is not None:
                edges += 1
                if walk.value < lower:
                    walk = walk.right
                elif walk.value == lower:
                    step = walk.item_fp
                    if walk.right is not None:
                        step = combine(step, walk.right.label)
                    left_acc = combine(step, left_acc)
                    break
                else:
                    step = walk.item_fp
                    if walk.right is not None:
                        step = combine(step, walk.right.label)
                    left_acc = combine(step, left_acc)
                    walk = walk.left

        if upper is None:
            right_acc = node.right.label if node.right is not None else neutral
        else:
            right_acc = neutral
            walk = node.right
            while walk is not None:
                edges += 1
                if walk.value < upper:
                    step = walk.left.label if walk.left is not None else None
                    if step is None:
                        step = walk.item_fp
                    else:
                        step = combine(step, walk.item_fp)
                    right_acc = combine(right_acc, step)
                    walk = walk.right
                elif walk.value == upper:
                    if walk.left is not None:
                        right_acc = combine(right_acc, walk.left.label)
                    break
                else:
                    walk = walk.left

        self.edges_traversed += edges
        result = combine(left_acc, node.item_fp)
        result = combine(result, right_acc)
        return result

    # -- ascending multi-range sweep --------------------------------------------

    def cursor(self, lower: bytes) -> RangeCursor:
        """Cursor at the least stored item >= ``lower`` (exhausted if none)."""
        lower = validate_item(lower, self.item_width)
        node = self._root
        best = None
        edges = 0
        while node is not None:
            if node.value < lower:
                node = node.right
            else:
                best = node
                node = node.left
            edges += 1
        self.edges_traversed += edges
        return RangeCursor(best)

    def aggregate_until(self, cursor: RangeCursor, lower: bytes, upper: bytes) -> tuple[bytes, RangeCursor]:
        """Fingerprint of [lower, upper) given a cursor positioned at the least
        stored item >= ``lower``; returns the fingerprint plus the cursor moved
        to the least stored item >= ``upper``.

        Requires ``lower < upper``.  An exhausted cursor aggregates to the
        neutral element and stays exhausted, which lets a caller sweep past
        the top of the stored set without special cases.
        """
        lower = validate_item(lower, self.item_width)
        upper = validate_item(upper, self.item_width)
        if lower >= upper:
            raise ValueError("aggregate_until requires lower < upper")
        combine = self.scheme.combine
        acc = self.scheme.neutral
        node = cursor.node
        if node is None:
            return acc, cursor
        if node.value < lower:
            # lagging cursor: re-anchor at the start of the requested range,
            # otherwise right subtrees straddling ``lower`` would be skipped
            cursor = self.cursor(lower)
            node = cursor.node
            if node is None:
                return acc, cursor
        edges = 0

        # climb while the whole current subtree sits below the upper bound
        while node.max_value < upper:
            if node.value >= lower:
                step = node.item_fp
                if node.right is not None:
                    step = combine(step, node.right.label)
                acc = combine(acc, step)
            if node.parent is None:
                self.edges_traversed += edges
                return acc, RangeCursor(None)
            node = node.parent
            edges += 1

        if node.value >= upper:
            self.edges_traversed += edges
            return acc, RangeCursor(node)

        # the node itself is in range; finish inside its right subtree
        acc = combine(acc, node.item_fp)
        node = node.right
        edges += 1
        while node is not None:
            if node.value < upper:
                step = node.left.label if node.left is not None else None
                if step is None:
                    step = node.item_fp
                else:
                    step = combine(step, node.item_fp)
                acc = combine(acc, step)
                node = node.right
                edges += 1
            elif node.left is None or node.left.max_value < upper:
                if node.left is not None:
                    acc = combine(acc, node.left.label)
                self.edges_traversed += edges
                return acc, RangeCursor(node)
            else:
                node = node.left
                edges += 1
        self.edges_traversed += edges
        return acc, RangeCursor(None)
