"""
Stabbing structure for the lens sweep.

Intervals of leaf positions are marked on the canonical nodes of a static
segment tree; a stabbing query walks from a leaf to the root and returns
every interval still marked along the way. Removal unmarks all canonical
nodes of an interval, so each interval is reported until it is removed.
"""


class StabbingTree:
    """Interval marks over leaf positions 0..size-1."""

    def __init__(self, size: int):
        self.size = 1
        while self.size < max(size, 1):
            self.size *= 2
        self._marks: list[set | None] = [None] * (2 * self.size)
        self._nodes: dict[int, list[int]] = {}

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, key):
        return key in self._nodes

    def insert(self, key: int, low: int, high: int):
        """Mark leaf positions low..high (inclusive) with `key`."""
        if key in self._nodes:
            raise KeyError(f"Interval {key} already marked")
        if low > high:
            self._nodes[key] = []
            return
        nodes = []
        left = low + self.size
        right = high + self.size + 1
        while left < right:
            if left & 1:
                nodes.append(left)
                left += 1
            if right & 1:
                right -= 1
                nodes.append(right)
            left >>= 1
            right >>= 1
        for node in nodes:
            if self._marks[node] is None:
                self._marks[node] = set()
            self._marks[node].add(key)
        self._nodes[key] = nodes

    def remove(self, key: int):
        """Unmark `key`; unknown keys are ignored."""
        for node in self._nodes.pop(key, ()):
            self._marks[node].discard(key)

    def stab(self, position: int) -> list[int]:
        """Keys of all marked intervals containing `position`, in ascending order."""
        found = []
        node = position + self.size
        while node:
            marks = self._marks[node]
            if marks:
                found.extend(marks)
            node >>= 1
        found.sort()
        return found
