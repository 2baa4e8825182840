"""Reference implementations the tests check the package against.

Everything here is written from the definitions alone: plain sorted lists,
direct hashlib calls, recursive label computation.  None of it shares code
with the package, so agreement is evidence rather than tautology.
"""

import hashlib

from rangesync import item_from_int

EMPTY_TREAP_LABEL = hashlib.sha256(b"\x01").digest()


def items_of(values, width=1):
    return [item_from_int(v, width) for v in values]


def range_contents(items, lower, upper):
    """Items of the cyclic range [lower, upper) in cyclic order from lower.

    lower == upper selects everything, in plain ascending order.
    """
    ordered = sorted(items)
    if lower == upper:
        return ordered
    if lower < upper:
        return [v for v in ordered if lower <= v < upper]
    return [v for v in ordered if v >= lower] + [v for v in ordered if v < upper]


def fold_scheme(scheme, ordered_items):
    acc = scheme.neutral
    for item in ordered_items:
        acc = scheme.combine(acc, scheme.project(item))
    return acc


# -- independent treap label oracle -------------------------------------------

def _pri(item):
    return hashlib.sha256(b"\x00" + item).digest()


def _lh(payload):
    return hashlib.sha256(b"\x01" + payload).digest()


def canon_treap_label(sorted_items):
    """Label of the unique treap on the given ascending items, or None if empty."""
    if not sorted_items:
        return None
    root = max(range(len(sorted_items)),
               key=lambda i: (_pri(sorted_items[i]), sorted_items[i]))
    left = canon_treap_label(sorted_items[:root])
    right = canon_treap_label(sorted_items[root + 1:])
    middle = _lh(sorted_items[root])
    if left is None and right is None:
        return middle
    if left is None:
        return _lh(middle + right)
    if right is None:
        return _lh(left + middle)
    return _lh(left + middle + right)


def treap_range_oracle(items, lower, upper):
    """Expected MerkleTreap.aggregate_range result, from scratch."""
    ordered = sorted(items)
    if lower == upper:
        label = canon_treap_label(ordered)
        return label if label is not None else EMPTY_TREAP_LABEL
    if lower < upper:
        label = canon_treap_label([v for v in ordered if lower <= v < upper])
        return label if label is not None else EMPTY_TREAP_LABEL
    high = canon_treap_label([v for v in ordered if v >= lower])
    low = canon_treap_label([v for v in ordered if v < upper])
    if high is None and low is None:
        return EMPTY_TREAP_LABEL
    return _lh(b"\x02" + (high or b"") + (low or b""))


# -- structural audits ---------------------------------------------------------

def audit_monoid_tree(tree):
    """Recompute every cached field of every vertex; returns the tree height."""
    scheme = tree.scheme

    def walk(node, lo, hi, parent):
        if node is None:
            return 0, 0, scheme.neutral
        assert node.parent is parent
        if lo is not None:
            assert node.value > lo
        if hi is not None:
            assert node.value < hi
        lh, ls, ll = walk(node.left, lo, node.value, node)
        rh, rs, rl = walk(node.right, node.value, hi, node)
        assert abs(lh - rh) <= 1, "balance factor out of range"
        assert node.height == 1 + max(lh, rh)
        assert node.size == 1 + ls + rs
        label = scheme.combine(scheme.combine(ll, node.item_fp), rl)
        assert node.label == label
        assert node.item_fp == scheme.project(node.value)
        return 1 + max(lh, rh), node.size, label

    height, size, label = walk(tree._root, None, None, None)
    assert size == len(tree)
    assert label == tree.root_label
    # max_value needs an in-order pass since the recursion above loses it
    def check_max(node):
        if node is None:
            return None
        right_max = check_max(node.right)
        check_max(node.left)
        expected = right_max if right_max is not None else node.value
        assert node.max_value == expected
        return expected
    check_max(tree._root)
    return height


def audit_treap(treap):
    """Check heap order, BST order, and every cached treap field."""

    def walk(node, lo, hi, parent):
        if node is None:
            return 0, 0, None
        assert node.parent is parent
        if lo is not None:
            assert node.value > lo
        if hi is not None:
            assert node.value < hi
        key = (node.priority, node.value)
        for child in (node.left, node.right):
            if child is not None:
                assert (child.priority, child.value) < key, "heap order violated"
        lh, ls, ll = walk(node.left, lo, node.value, node)
        rh, rs, rl = walk(node.right, node.value, hi, node)
        assert node.size == 1 + ls + rs
        assert node.item_hash == _lh(node.value)
        assert node.priority == _pri(node.value)
        middle = node.item_hash
        if ll is None and rl is None:
            label = middle
        elif ll is None:
            label = _lh(middle + rl)
        elif rl is None:
            label = _lh(ll + middle)
        else:
            label = _lh(ll + middle + rl)
        assert node.label == label
        return 1 + max(lh, rh), node.size, label

    height, size, label = walk(treap._root, None, None, None)
    assert size == len(treap)
    if label is not None:
        assert label == treap.root_label
    def check_max(node):
        if node is None:
            return None
        right_max = check_max(node.right)
        check_max(node.left)
        expected = right_max if right_max is not None else node.value
        assert node.max_value == expected
        return expected
    check_max(treap._root)
    return height


def draw_distinct(rng, n, width):
    """n distinct random items of the given width."""
    out = set()
    while len(out) < n:
        out.add(rng.randbytes(width))
    return sorted(out)
