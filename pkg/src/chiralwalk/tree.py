"""Addressing and truncation of the rooted binary tree.

Vertices are bit strings over {'0', '1'}; the empty string is the root.  The
truncated tree at depth ``d`` collects all vertices of depth <= d in
breadth-first order (root first, each level in lexicographic bit order), so
operator matrices indexed this way show their block-by-depth structure.
"""

from __future__ import annotations

from dataclasses import dataclass

ROOT = ""
MAX_DEPTH = 20  # guards against accidental multi-million-dimensional dense work

_BITS = frozenset("01")


def check_vertex(v: str) -> str:
    if not isinstance(v, str) or not _BITS.issuperset(v):
        raise ValueError(f"vertex address must be a bit string, got {v!r}")
    return v


def depth(v: str) -> int:
    return len(check_vertex(v))


def parent(v: str) -> str:
    """Drop the last bit; the root has no parent."""
    check_vertex(v)
    if v == ROOT:
        raise ValueError("the root has no parent")
    return v[:-1]


def sibling(v: str) -> str:
    """Flip the last bit; the root has no sibling."""
    check_vertex(v)
    if v == ROOT:
        raise ValueError("the root has no sibling")
    return v[:-1] + ("1" if v[-1] == "0" else "0")


def children(v: str) -> tuple[str, str]:
    check_vertex(v)
    return v + "0", v + "1"


@dataclass(frozen=True)
class TruncatedTree:
    """Finite window of the binary tree: all vertices of depth <= depth.

    ``addresses[i]`` is the vertex with breadth-first index ``i``;
    ``parent_index[i]`` is the index of its parent (-1 for the root).
    """

    depth: int
    addresses: tuple[str, ...]
    parent_index: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.addresses)

    def index_of(self, v: str) -> int:
        check_vertex(v)
        if len(v) > self.depth:
            raise ValueError(f"vertex {v!r} lies below depth {self.depth}")
        # breadth-first, lexicographic within a level
        return (1 << len(v)) - 1 + (int(v, 2) if v else 0)

    def level_range(self, k: int) -> range:
        """Index range occupied by the vertices of depth k."""
        if not 0 <= k <= self.depth:
            raise ValueError(f"level {k} outside [0, {self.depth}]")
        return range((1 << k) - 1, (1 << (k + 1)) - 1)


def truncated_tree(d: int) -> TruncatedTree:
    """Enumerate the binary tree truncated at depth d (1 <= d <= MAX_DEPTH)."""
    if not isinstance(d, int) or not 1 <= d <= MAX_DEPTH:
        raise ValueError(f"depth must be an integer in [1, {MAX_DEPTH}], got {d}")
    addresses: list[str] = [ROOT]
    level = [ROOT]
    for _ in range(d):
        level = [v + bit for v in level for bit in "01"]
        addresses.extend(level)
    index = {v: i for i, v in enumerate(addresses)}
    parent_index = tuple(-1 if v == ROOT else index[v[:-1]] for v in addresses)
    return TruncatedTree(depth=d, addresses=tuple(addresses), parent_index=parent_index)
