#!/usr/bin/env python3
"""
空间模型
有限 Alexandrov 偏序集与组合直线；开集是特化序下的上集
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Hashable, Iterable, List, Sequence, Tuple

import networkx as nx

from ..common.errors import IndSheafError


def V(n: int) -> int:
    """组合直线上整数 n 处的顶点"""
    return 2 * n


def E(n: int) -> int:
    """组合直线上的开边 (n, n+1)"""
    return 2 * n + 1


def cell_name(cell) -> str:
    if isinstance(cell, int):
        return f"V{cell // 2}" if cell % 2 == 0 else f"E{(cell - 1) // 2}"
    return str(cell)


class Space(ABC):
    """空间的公共接口"""

    kind: str = "space"

    @abstractmethod
    def leq(self, a, b) -> bool:
        """特化序 a <= b（b 属于 a 的每个开邻域）"""

    @abstractmethod
    def up_covers(self, c) -> Tuple:
        """覆盖 c 的单元（c < c' 且中间没有其它单元）"""

    @abstractmethod
    def down_covers(self, c) -> Tuple:
        pass

    @property
    def is_line(self) -> bool:
        return self.kind == "line"

    def covering_pairs(self, cells: Iterable) -> List[Tuple]:
        """cells 内部的覆盖关系 (c, c')，顺序确定"""
        cells = list(cells)
        present = set(cells)
        return [(c, d) for c in cells for d in self.up_covers(c) if d in present]


@dataclass(frozen=True, eq=False)
class FinitePoset(Space):
    """有限偏序集；relations 中的 (a, b) 表示 a <= b"""

    cells: Tuple[Hashable, ...]
    relations: Tuple[Tuple[Hashable, Hashable], ...] = ()
    name: str = "poset"
    kind: str = field(default="poset", init=False)

    def __post_init__(self):
        graph = nx.DiGraph()
        graph.add_nodes_from(self.cells)
        for a, b in self.relations:
            if a not in graph or b not in graph:
                raise IndSheafError(f"relation ({a}, {b}) uses an unknown cell")
            if a != b:
                graph.add_edge(a, b)
        if not nx.is_directed_acyclic_graph(graph):
            raise IndSheafError("order relation is not antisymmetric")
        closure = nx.transitive_closure_dag(graph)
        hasse = nx.transitive_reduction(graph)
        order = {c: i for i, c in enumerate(self.cells)}
        object.__setattr__(self, "_closure", closure)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_up", {c: tuple(sorted(hasse.successors(c), key=order.get)) for c in self.cells})
        object.__setattr__(self, "_down", {c: tuple(sorted(hasse.predecessors(c), key=order.get)) for c in self.cells})

    def __eq__(self, other):
        return (isinstance(other, FinitePoset) and self.cells == other.cells
                and set(self._closure.edges) == set(other._closure.edges))

    def __hash__(self):
        return hash((self.cells, frozenset(self._closure.edges)))

    def leq(self, a, b) -> bool:
        return a == b or self._closure.has_edge(a, b)

    def up_covers(self, c) -> Tuple:
        return self._up[c]

    def down_covers(self, c) -> Tuple:
        return self._down[c]

    def up_set(self, c) -> frozenset:
        """c 的最小开邻域"""
        return frozenset([c, *self._closure.successors(c)])

    def down_set(self, c) -> frozenset:
        return frozenset([c, *self._closure.predecessors(c)])

    def topological_cells(self) -> List:
        """线性扩张：c <= c' 时 c 排在前面，平局按声明顺序"""
        return list(nx.lexicographical_topological_sort(self._closure, key=self._order.get))

    def sort_key(self, c) -> int:
        return self._order[c]

    def sorted_cells(self, cells: Iterable) -> List:
        return sorted(cells, key=self._order.get)

    def hasse_graph(self, cells: Iterable = None) -> nx.Graph:
        """Hasse 图（无向），用于连通分支"""
        cells = self.cells if cells is None else list(cells)
        g = nx.Graph()
        g.add_nodes_from(cells)
        g.add_edges_from(self.covering_pairs(cells))
        return g

    def describe(self) -> str:
        return f"poset({self.name}, {len(self.cells)} cells)"


def point(name: str = "pt") -> FinitePoset:
    return FinitePoset((name,), (), name=name)


def poset_from_pairs(cells: Sequence, pairs: Sequence[Tuple], name: str = "poset") -> FinitePoset:
    return FinitePoset(tuple(cells), tuple(tuple(p) for p in pairs), name=name)


@dataclass(frozen=True)
class CombLine(Space):
    """组合直线：单元 2n = V(n)，2n+1 = E(n)，V(n) <= E(n-1) 且 V(n) <= E(n)"""

    kind: str = field(default="line", init=False)

    def leq(self, a: int, b: int) -> bool:
        return a == b or (a % 2 == 0 and abs(a - b) == 1)

    def up_covers(self, c: int) -> Tuple:
        return (c - 1, c + 1) if c % 2 == 0 else ()

    def down_covers(self, c: int) -> Tuple:
        return (c - 1, c + 1) if c % 2 == 1 else ()

    def up_set(self, c: int) -> frozenset:
        return frozenset((c, *self.up_covers(c)))

    def down_set(self, c: int) -> frozenset:
        return frozenset((c, *self.down_covers(c)))

    def sort_key(self, c: int) -> int:
        return c

    def sorted_cells(self, cells: Iterable) -> List:
        return sorted(cells)

    def hasse_graph(self, cells: Iterable) -> nx.Graph:
        g = nx.Graph()
        cells = list(cells)
        g.add_nodes_from(cells)
        g.add_edges_from(self.covering_pairs(cells))
        return g

    def describe(self) -> str:
        return "line"


LINE = CombLine()


def chart_bounds(lo: int, hi: int) -> Tuple[int, int]:
    """包含 [lo, hi] 且两端为边单元的有限窗口，两侧各留一个完整单元的余量"""
    left = lo - 2
    if left % 2 == 0:
        left -= 1
    right = hi + 2
    if right % 2 == 0:
        right += 1
    return left, right
