"""Shared machinery for the two search-tree stores.

Both stores keep nodes with ``value``, ``left``, ``right``, ``parent`` and a
cached ``size``/``max_value``, which is all the order-statistic queries here
need.  Subclasses provide ``_root``, ``item_width`` and an ``_update(node)``
that refreshes a node's cached fields from its children.
"""

from __future__ import annotations

from typing import Iterator

from .items import validate_item


class OrderedStoreMixin:
    _root = None
    item_width: int

    # -- size and iteration ------------------------------------------------

    def __len__(self) -> int:
        return self._root.size if self._root is not None else 0

    @property
    def size(self) -> int:
        return len(self)

    def __bool__(self) -> bool:
        return self._root is not None

    def __contains__(self, item: bytes) -> bool:
        item = validate_item(item, self.item_width)
        node = self._root
        while node is not None:
            if item == node.value:
                return True
            node = node.left if item < node.value else node.right
        return False

    def __iter__(self) -> Iterator[bytes]:
        node = self._root
        stack = []
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.value
            node = node.right

    def items(self) -> list[bytes]:
        """All stored items in ascending order."""
        return list(self)

    def _iter_from(self, lower: bytes) -> Iterator[bytes]:
        # ascending iteration over items >= lower
        node = self._root
        stack = []
        while node is not None:
            if node.value < lower:
                node = node.right
            else:
                stack.append(node)
                node = node.left
        while stack:
            node = stack.pop()
            yield node.value
            node = node.right
            while node is not None:
                stack.append(node)
                node = node.left

    # -- extrema -----------------------------------------------------------

    def min_item(self) -> bytes:
        if self._root is None:
            raise ValueError("store is empty")
        node = self._root
        while node.left is not None:
            node = node.left
        return node.value

    def max_item(self) -> bytes:
        if self._root is None:
            raise ValueError("store is empty")
        node = self._root
        while node.right is not None:
            node = node.right
        return node.value

    # -- order statistics ----------------------------------------------------

    def _count_less(self, item: bytes) -> int:
        node = self._root
        count = 0
        while node is not None:
            if node.value < item:
                count += 1 + (node.left.size if node.left is not None else 0)
                node = node.right
            else:
                node = node.left
        return count

    def item_by_rank(self, rank: int) -> bytes:
        """The rank-th smallest stored item, zero-indexed."""
        if not 0 <= rank < len(self):
            raise IndexError(f"rank {rank} out of range for store of size {len(self)}")
        node = self._root
        while True:
            left_size = node.left.size if node.left is not None else 0
            if rank < left_size:
                node = node.left
            elif rank == left_size:
                return node.value
            else:
                rank -= left_size + 1
                node = node.right

    def rank_in_range(self, lower: bytes, rank: int) -> bytes:
        """The rank-th stored item in cyclic ascending order starting at ``lower``."""
        lower = validate_item(lower, self.item_width)
        size = len(self)
        if not 0 <= rank < size:
            raise IndexError(f"rank {rank} out of range for store of size {size}")
        less = self._count_less(lower)
        at_or_above = size - less
        if rank < at_or_above:
            return self.item_by_rank(less + rank)
        return self.item_by_rank(rank - at_or_above)

    def count_in_range(self, lower: bytes, upper: bytes) -> int:
        """Number of stored items inside the cyclic range [lower, upper)."""
        lower = validate_item(lower, self.item_width)
        upper = validate_item(upper, self.item_width)
        if lower == upper:
            return len(self)
        if lower < upper:
            return self._count_less(upper) - self._count_less(lower)
        return len(self) - (self._count_less(lower) - self._count_less(upper))

    def items_in_range(self, lower: bytes, upper: bytes) -> list[bytes]:
        """Stored items inside [lower, upper), cyclically ascending from ``lower``."""
        lower = validate_item(lower, self.item_width)
        upper = validate_item(upper, self.item_width)
        out: list[bytes] = []
        if lower < upper:
            for item in self._iter_from(lower):
                if item >= upper:
                    break
                out.append(item)
            return out
        # wraparound and full ranges: the tail above lower, then the head below upper
        out.extend(self._iter_from(lower))
        stop = upper if upper < lower else lower
        for item in self:
            if item >= stop:
                break
            out.append(item)
        return out

    # -- rotations (shape surgery shared by both balancing disciplines) ------

    def _rotate_left(self, node):
        child = node.right
        parent = node.parent
        node.right = child.left
        if child.left is not None:
            child.left.parent = node
        child.left = node
        node.parent = child
        child.parent = parent
        if parent is None:
            self._root = child
        elif parent.left is node:
            parent.left = child
        else:
            parent.right = child
        self._update(node)
        self._update(child)
        return child

    def _rotate_right(self, node):
        child = node.left
        parent = node.parent
        node.left = child.right
        if child.right is not None:
            child.right.parent = node
        child.right = node
        node.parent = child
        child.parent = parent
        if parent is None:
            self._root = child
        elif parent.left is node:
            parent.left = child
        else:
            parent.right = child
        self._update(node)
        self._update(child)
        return child

    def height(self) -> int:
        """Number of vertices on the longest root-to-leaf path (0 if empty)."""
        best = 0
        stack = [(self._root, 1)] if self._root is not None else []
        while stack:
            node, depth = stack.pop()
            if depth > best:
                best = depth
            if node.left is not None:
                stack.append((node.left, depth + 1))
            if node.right is not None:
                stack.append((node.right, depth + 1))
        return best
