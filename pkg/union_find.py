"""Disjoint-set forest over hashable keys."""

from typing import Hashable, Iterable


class DisjointSet:
    """Union by size with path halving."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self._parent: dict = {}
        self._size: dict = {}
        for item in items:
            self.add(item)

    def add(self, item):
        if item not in self._parent:
            self._parent[item] = item
            self._size[item] = 1

    def find(self, item):
        parent = self._parent
        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]
        return item

    def union(self, a, b) -> bool:
        """Joins the sets of a and b; returns False if already joined."""
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if self._size[root_a] < self._size[root_b]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        self._size[root_a] += self._size[root_b]
        return True

    def groups(self) -> list[list]:
        """Returns the classes, each sorted, ordered by their smallest item."""
        classes: dict = {}
        for item in self._parent:
            classes.setdefault(self.find(item), []).append(item)
        return sorted((sorted(members) for members in classes.values()),
                      key=lambda members: members[0])
