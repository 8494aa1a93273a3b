"""Indexed binary heap keyed by path cost."""

from __future__ import annotations

from enum import IntEnum

from pyopf.exceptions import EmptyHeapError, InvalidStateError

NIL = -1


class Color(IntEnum):
    WHITE = 0  # never inserted
    GRAY = 1  # in the heap
    BLACK = 2  # extracted


class CostHeap:
    """Priority queue over node indices ``0..n-1`` with decrease/increase-key.

    Under the ``"min"`` policy the smallest cost comes out first, under
    ``"max"`` the largest. Equal costs go to the lower rank (0 unless set
    with :meth:`set_rank`), then to the lower node index, which keeps every
    conquest deterministic.

    Args:
        n: Number of addressable nodes.
        policy: ``"min"`` or ``"max"``.
    """

    def __init__(self, n: int, policy: str = "min"):
        if policy not in ("min", "max"):
            raise ValueError(f"policy must be 'min' or 'max', got {policy!r}")
        self.policy = policy
        self._sign = 1.0 if policy == "min" else -1.0
        self.costs = [0.0] * n
        self.ranks = [0] * n
        self._color = [Color.WHITE] * n
        self._pos = [NIL] * n
        self._heap: list[int] = []

    def __len__(self) -> int:
        return len(self._heap)

    @property
    def size(self) -> int:
        return len(self._heap)

    def is_empty(self) -> bool:
        return not self._heap

    def color(self, node: int) -> Color:
        return self._color[node]

    def position(self, node: int) -> int:
        return self._pos[node]

    def _before(self, a: int, b: int) -> bool:
        ka = self._sign * self.costs[a]
        kb = self._sign * self.costs[b]
        if ka != kb:
            return ka < kb
        ra, rb = self.ranks[a], self.ranks[b]
        return ra < rb or (ra == rb and a < b)

    def _place(self, slot: int, node: int) -> None:
        self._heap[slot] = node
        self._pos[node] = slot

    def _sift_up(self, slot: int) -> None:
        heap = self._heap
        node = heap[slot]
        while slot > 0:
            parent = (slot - 1) >> 1
            if not self._before(node, heap[parent]):
                break
            self._place(slot, heap[parent])
            slot = parent
        self._place(slot, node)

    def _sift_down(self, slot: int) -> None:
        heap = self._heap
        size = len(heap)
        node = heap[slot]
        while True:
            child = 2 * slot + 1
            if child >= size:
                break
            if child + 1 < size and self._before(heap[child + 1], heap[child]):
                child += 1
            if not self._before(heap[child], node):
                break
            self._place(slot, heap[child])
            slot = child
        self._place(slot, node)

    def insert(self, node: int, cost: float) -> None:
        if self._color[node] == Color.GRAY:
            raise InvalidStateError(f"node {node} is already in the heap; use update()")
        self.costs[node] = cost
        self._color[node] = Color.GRAY
        self._heap.append(node)
        self._pos[node] = len(self._heap) - 1
        self._sift_up(len(self._heap) - 1)

    def update(self, node: int, new_cost: float) -> None:
        if self._color[node] != Color.GRAY:
            raise InvalidStateError(f"node {node} is not in the heap")
        self.costs[node] = new_cost
        slot = self._pos[node]
        self._sift_up(slot)
        self._sift_down(self._pos[node])

    def set_rank(self, node: int, rank: int) -> None:
        """Changes the tie-break rank of a node, re-sifting it if queued."""
        self.ranks[node] = rank
        if self._color[node] == Color.GRAY:
            self._sift_up(self._pos[node])
            self._sift_down(self._pos[node])

    def peek(self) -> int:
        if not self._heap:
            raise EmptyHeapError("peek on an empty heap")
        return self._heap[0]

    def extract(self) -> int:
        if not self._heap:
            raise EmptyHeapError("extract from an empty heap")
        heap = self._heap
        top = heap[0]
        last = heap.pop()
        if heap:
            self._place(0, last)
            self._sift_down(0)
        self._pos[top] = NIL
        self._color[top] = Color.BLACK
        return top

    def check_heap_property(self) -> bool:
        """True when every parent precedes its children (debug helper)."""
        heap = self._heap
        for slot in range(1, len(heap)):
            if self._before(heap[slot], heap[(slot - 1) >> 1]):
                return False
        return all(self._pos[node] == slot for slot, node in enumerate(heap))
