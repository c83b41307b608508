"""Finite partial orders backed by a boolean closure matrix."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels


class Poset:
    """A finite order over hashable nodes.

    ``leq[i, j]`` is True iff ``nodes[i] <= nodes[j]``; the matrix is always the
    reflexive-transitive closure.  ``levels`` optionally records the
    construction stage at which each node first appeared.
    """

    __slots__ = ("nodes", "index", "leq", "levels", "_hasse")

    def __init__(self, nodes: Sequence[Hashable], leq: np.ndarray, levels: Mapping | None = None):
        self.nodes = tuple(nodes)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        if len(self.index) != len(self.nodes):
            raise ValueError("duplicate poset nodes")
        leq = np.asarray(leq, dtype=bool)
        if leq.shape != (len(self.nodes), len(self.nodes)):
            raise ValueError(f"relation shape {leq.shape} does not match {len(self.nodes)} nodes")
        leq.setflags(write=False)
        self.leq = leq
        self.levels = dict(levels) if levels is not None else None
        self._hasse = None

    @classmethod
    def from_edges(cls, nodes: Iterable[Hashable], edges: Iterable[tuple], levels: Mapping | None = None,
                   check: bool = True) -> Poset:
        """Close ``edges`` (pairs ``(lo, hi)``) into an order on ``nodes``.

        Raises ValueError when the closure is not antisymmetric and ``check``
        is set.
        """
        nodes = tuple(nodes)
        index = {n: i for i, n in enumerate(nodes)}
        adj = np.zeros((len(nodes), len(nodes)), dtype=bool)
        for lo, hi in edges:
            adj[index[lo], index[hi]] = True
        leq = _kernels.closure(adj)
        p = cls(nodes, leq, levels)
        if check:
            _, anti, _ = p.defects()
            if anti:
                raise ValueError(f"edges induce {anti} cycle pair(s); not a partial order")
        return p

    @classmethod
    def discrete(cls, nodes: Iterable[Hashable]) -> Poset:
        nodes = tuple(nodes)
        return cls(nodes, np.eye(len(nodes), dtype=bool))

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, node) -> bool:
        return node in self.index

    def __repr__(self) -> str:
        return f"Poset({len(self.nodes)} nodes, {len(self.hasse())} covers)"

    def le(self, a, b) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def relation(self) -> frozenset:
        """All pairs ``(a, b)`` with ``a <= b``, reflexive pairs included."""
        ii, jj = np.nonzero(self.leq)
        ns = self.nodes
        return frozenset((ns[i], ns[j]) for i, j in zip(ii.tolist(), jj.tolist()))

    def strict_pairs(self) -> frozenset:
        return frozenset((a, b) for a, b in self.relation() if a != b)

    def hasse(self) -> list[tuple]:
        if self._hasse is None:
            red = _kernels.reduction(self.leq)
            ii, jj = np.nonzero(red)
            self._hasse = [(self.nodes[i], self.nodes[j]) for i, j in zip(ii.tolist(), jj.tolist())]
        return list(self._hasse)

    def defects(self) -> tuple[int, int, int]:
        """(non-reflexive nodes, antisymmetric breaks, transitivity breaks)."""
        return _kernels.order_defects(self.leq)

    def is_valid(self) -> bool:
        return self.defects() == (0, 0, 0)

    def up(self, node) -> list:
        row = self.leq[self.index[node]]
        return [self.nodes[j] for j in np.nonzero(row)[0].tolist()]

    def down(self, node) -> list:
        col = self.leq[:, self.index[node]]
        return [self.nodes[i] for i in np.nonzero(col)[0].tolist()]

    def maxima(self) -> list:
        strict = self.leq & ~np.eye(len(self.nodes), dtype=bool)
        return [n for n, row in zip(self.nodes, strict) if not row.any()]

    def minima(self) -> list:
        strict = self.leq & ~np.eye(len(self.nodes), dtype=bool)
        return [n for n, col in zip(self.nodes, strict.T) if not col.any()]

    def restrict(self, keep: Iterable[Hashable]) -> Poset:
        """Induced sub-order on ``keep`` (in this poset's node order)."""
        keep = set(keep)
        idx = [i for i, n in enumerate(self.nodes) if n in keep]
        levels = None if self.levels is None else {self.nodes[i]: self.levels[self.nodes[i]] for i in idx}
        return Poset([self.nodes[i] for i in idx], self.leq[np.ix_(idx, idx)], levels)

    def dual(self) -> Poset:
        return Poset(self.nodes, self.leq.T.copy(), self.levels)

    def relabel(self, f: Callable) -> Poset:
        """Apply an injective relabelling; the order is carried over unchanged."""
        levels = None if self.levels is None else {f(n): v for n, v in self.levels.items()}
        return Poset([f(n) for n in self.nodes], self.leq.copy(), levels)

    def level(self, node) -> int | None:
        return None if self.levels is None else self.levels.get(node)

    def __eq__(self, other) -> bool:
        # graph equality: same node set, same relation
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self.relation() == other.relation()

    __hash__ = None
