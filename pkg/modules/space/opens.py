#!/usr/bin/env python3
"""
单元集合、开集、局部闭集与单元映射
组合直线上的集合以（左尾标志，断点）的规范形式保存，相等即描述相等
"""

import bisect
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import networkx as nx

from .cells import Space, FinitePoset, LINE, point
from ..common.errors import IndSheafError, SpaceMismatchError, UnsupportedShapeError

logger = logging.getLogger('Space')


@dataclass(frozen=True, eq=False)
class CellSet:
    """空间中的单元集合；偏序集上为显式集合，直线上为（left, breaks）"""

    space: Space
    cells: frozenset = frozenset()
    left: bool = False
    breaks: Tuple[int, ...] = ()

    # ---- 基本查询 ----

    def key(self) -> Tuple:
        if self.space.is_line:
            return ("line", self.left, self.breaks)
        return ("poset", self.space, self.cells)

    def __eq__(self, other):
        return isinstance(other, CellSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def contains(self, c) -> bool:
        if self.space.is_line:
            flips = bisect.bisect_right(self.breaks, c)
            return self.left ^ (flips % 2 == 1)
        return c in self.cells

    __contains__ = contains

    @property
    def right(self) -> bool:
        """右尾是否全满（仅直线）"""
        return self.left ^ (len(self.breaks) % 2 == 1)

    def is_empty(self) -> bool:
        if self.space.is_line:
            return not self.left and not self.breaks
        return not self.cells

    def is_bounded(self) -> bool:
        if self.space.is_line:
            return not self.left and not self.right
        return True

    def window(self) -> Optional[Tuple[int, int]]:
        """直线上描述集合所需的单元窗口 [lo, hi]"""
        if not self.space.is_line or not self.breaks:
            return None
        return self.breaks[0] - 1, self.breaks[-1]

    def cells_in(self, lo: int, hi: int) -> List:
        return [c for c in range(lo, hi + 1) if self.contains(c)]

    def finite_cells(self) -> List:
        """有界集合的全部单元，顺序确定"""
        if self.space.is_line:
            if not self.is_bounded():
                raise UnsupportedShapeError("unbounded cell set has infinitely many cells")
            if not self.breaks:
                return []
            return self.cells_in(self.breaks[0], self.breaks[-1])
        return self.space.sorted_cells(self.cells)

    # ---- 集合运算 ----

    def _check_space(self, other: "CellSet"):
        if self.space != other.space:
            raise SpaceMismatchError("cell sets live on different spaces")

    def _combine(self, other: "CellSet", op: Callable[[bool, bool], bool]) -> "CellSet":
        self._check_space(other)
        if self.space.is_line:
            points = self.breaks + other.breaks
            lo, hi = (min(points) - 1, max(points) + 1) if points else (0, 0)
            return line_set(op(self.left, other.left), lo, hi,
                            lambda c: op(self.contains(c), other.contains(c)))
        universe = self.space.cells
        return CellSet(self.space, frozenset(c for c in universe if op(c in self.cells, c in other.cells)))

    def union(self, other: "CellSet") -> "CellSet":
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other: "CellSet") -> "CellSet":
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: "CellSet") -> "CellSet":
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> "CellSet":
        return whole(self.space).difference(self)

    def issubset(self, other: "CellSet") -> bool:
        return self.difference(other).is_empty()

    def translate(self, units: int) -> "CellSet":
        if not self.space.is_line:
            raise UnsupportedShapeError("only sets on the line can be translated")
        return CellSet(self.space, left=self.left, breaks=tuple(b + 2 * units for b in self.breaks))

    # ---- 拓扑 ----

    def _scan_window(self, margin: int = 2) -> Tuple[int, int]:
        if not self.breaks:
            return 0, 0
        return self.breaks[0] - margin, self.breaks[-1] + margin

    def is_open(self) -> bool:
        """上集判定：含顶点则含相邻的边"""
        if self.space.is_line:
            lo, hi = self._scan_window()
            return all(not self.contains(c) or (self.contains(c - 1) and self.contains(c + 1))
                       for c in range(lo, hi + 1) if c % 2 == 0)
        return all(d in self.cells for c in self.cells for d in self.space.up_covers(c))

    def is_closed(self) -> bool:
        return self.complement().is_open()

    def closure(self) -> "CellSet":
        """特化序下的下闭包"""
        if self.space.is_line:
            lo, hi = self._scan_window()
            return line_set(self.left, lo, hi, lambda c: self.contains(c) or (
                c % 2 == 0 and (self.contains(c - 1) or self.contains(c + 1))))
        out = set()
        for c in self.cells:
            out |= self.space.down_set(c)
        return CellSet(self.space, frozenset(out))

    def interior(self) -> "CellSet":
        """包含于集合中的最大上集"""
        if self.space.is_line:
            lo, hi = self._scan_window()
            return line_set(self.left, lo, hi, lambda c: self.contains(c) and (
                c % 2 == 1 or (self.contains(c - 1) and self.contains(c + 1))))
        return CellSet(self.space, frozenset(c for c in self.cells if self.space.up_set(c) <= self.cells))

    def as_open(self) -> "OpenSet":
        return OpenSet(self.space, self.cells, self.left, self.breaks)

    def components(self) -> int:
        """有界集合在 Hasse 图中的连通分支数"""
        return nx.number_connected_components(self.space.hasse_graph(self.finite_cells()))

    def describe(self) -> str:
        if self.space.is_line:
            return f"cells(left={int(self.left)}, breaks={list(self.breaks)})"
        return "{" + ", ".join(str(c) for c in self.space.sorted_cells(self.cells)) + "}"


@dataclass(frozen=True, eq=False)
class OpenSet(CellSet):
    """开集（上集）"""

    def __post_init__(self):
        if not CellSet.is_open(self):
            raise IndSheafError(f"{self.describe()} is not an up-set")

    def union(self, other: "CellSet") -> "OpenSet":
        return CellSet.union(self, other).as_open()

    def intersection(self, other: "CellSet") -> "CellSet":
        result = CellSet.intersection(self, other)
        return result.as_open() if isinstance(other, OpenSet) else result


@dataclass(frozen=True)
class LocallyClosedSet:
    """U ∩ S，U 开，S 闭"""

    open_part: OpenSet
    closed_part: CellSet

    def __post_init__(self):
        if not self.closed_part.is_closed():
            raise IndSheafError("closed part of a locally closed set must be closed")
        if self.open_part.space != self.closed_part.space:
            raise SpaceMismatchError("parts of a locally closed set live on different spaces")

    @property
    def space(self) -> Space:
        return self.open_part.space

    def contains(self, c) -> bool:
        return self.open_part.contains(c) and self.closed_part.contains(c)

    __contains__ = contains

    def as_cellset(self) -> CellSet:
        return CellSet.intersection(self.open_part, self.closed_part)


def line_set(left: bool, lo: int, hi: int, pred: Callable[[int], bool]) -> CellSet:
    """
    由谓词构造直线上的集合
    :param left: 左尾（c < lo）的成员标志
    :param lo, hi: pred 在窗口外与对应尾部一致
    """
    right = pred(hi + 1) if hi >= lo else left
    breaks = []
    prev = left
    for c in range(lo, hi + 2):
        cur = pred(c) if c <= hi else right
        if cur != prev:
            breaks.append(c)
        prev = cur
    return CellSet(LINE, left=left, breaks=tuple(breaks))


def locally_closed(cellset: CellSet) -> LocallyClosedSet:
    """把单元集合写成 U ∩ cl(A)；集合不是局部闭集时报错"""
    closed = cellset.closure()
    open_part = cellset.union(closed.complement())
    if not open_part.is_open() or CellSet.intersection(open_part, closed) != cellset:
        raise IndSheafError(f"{cellset.describe()} is not locally closed")
    return LocallyClosedSet(open_part.as_open(), closed)


def whole(space: Space) -> OpenSet:
    if space.is_line:
        return OpenSet(space, left=True)
    return OpenSet(space, frozenset(space.cells))


def empty(space: Space) -> OpenSet:
    return OpenSet(space)


def cell_set(space: Space, members) -> CellSet:
    if space.is_line:
        members = sorted(members)
        if not members:
            return CellSet(space)
        return line_set(False, members[0], members[-1], lambda c: c in set(members))
    unknown = set(members) - set(space.cells)
    if unknown:
        raise IndSheafError(f"unknown cells {sorted(map(str, unknown))}")
    return CellSet(space, frozenset(members))


def open_interval(a: int, b: int) -> OpenSet:
    """(a, b)：E(a) 到 E(b-1)"""
    if b <= a:
        return empty(LINE)
    return OpenSet(LINE, breaks=(2 * a + 1, 2 * b))


def closed_interval(a: int, b: int) -> CellSet:
    """[a, b]：V(a) 到 V(b)"""
    if b < a:
        return CellSet(LINE)
    return CellSet(LINE, breaks=(2 * a, 2 * b + 1))


def closed_ray(n: int) -> CellSet:
    """[n, +inf)"""
    return CellSet(LINE, breaks=(2 * n,))


def open_ray(n: int) -> OpenSet:
    """(n, +inf)"""
    return OpenSet(LINE, breaks=(2 * n + 1,))


def vertex(n: int) -> CellSet:
    return CellSet(LINE, breaks=(2 * n, 2 * n + 1))


def star(space: Space, c) -> OpenSet:
    """单元 c 的最小开邻域"""
    if space.is_line:
        return cell_set(space, space.up_set(c)).as_open()
    return OpenSet(space, space.up_set(c))


def up_closure(cellset: CellSet) -> OpenSet:
    """包含集合的最小开集"""
    if cellset.space.is_line:
        return _line_up_closure(cellset)
    out = set()
    for c in cellset.cells:
        out |= cellset.space.up_set(c)
    return OpenSet(cellset.space, frozenset(out))


def _line_up_closure(cellset: CellSet) -> OpenSet:
    lo, hi = cellset._scan_window()
    return line_set(cellset.left, lo, hi, lambda c: cellset.contains(c) or (
        c % 2 == 1 and (cellset.contains(c - 1) or cellset.contains(c + 1)))).as_open()


def compact_core(U: CellSet) -> OpenSet:
    """
    闭包落在 U 中的最大开集
    直线上：闭包含于 U 的单元取内部；偏序集上每个集合都是紧的，返回 U 本身
    """
    if not U.space.is_line:
        return U.as_open()
    lo, hi = U._scan_window()
    candidates = line_set(U.left, lo, hi, lambda c: U.contains(c) and (
        c % 2 == 0 or (U.contains(c - 1) and U.contains(c + 1))))
    return candidates.interior().as_open()


def exhaustion(U: CellSet, n: int) -> OpenSet:
    """U 的第 n 个相对紧开集：compact_core(U) ∩ (-n, n)"""
    core = compact_core(U)
    if core.is_bounded():
        return core
    return CellSet.intersection(core, open_interval(-n, n)).as_open()


def relatively_compact_opens(U: CellSet) -> Iterator[OpenSet]:
    """
    枚举 {V 开 : V 的闭包紧且含于 U}
    有最大元时先给出最大元，再给出其余成员；U 无界时给出递增的共尾链
    """
    core = compact_core(U)
    if core.is_empty():
        return
    if not core.is_bounded():
        n = 1
        while True:
            yield exhaustion(U, n)
            n += 1
    yield core
    members = core.finite_cells()
    space = U.space
    for size in range(len(members) - 1, -1, -1):
        for subset in itertools.combinations(members, size):
            candidate = cell_set(space, subset)
            if candidate.is_open():
                yield candidate.as_open()


@dataclass(frozen=True)
class CellMap:
    """
    单调单元映射
    kind: "table"（有限源，显式赋值）、"constant"（直线到点）、"translate"（直线平移 units 个单位）
    """

    source: Space
    target: Space
    kind: str
    table: Tuple[Tuple, ...] = ()
    units: int = 0
    constant_cell: object = None

    def __post_init__(self):
        if self.kind == "table":
            if self.source.is_line:
                raise UnsupportedShapeError("table maps need a finite source")
            assignment = dict(self.table)
            missing = [c for c in self.source.cells if c not in assignment]
            if missing:
                raise IndSheafError(f"cell map leaves {missing} unassigned")
            for a in self.source.cells:
                for b in self.source.up_covers(a):
                    if not self.target.leq(assignment[a], assignment[b]):
                        raise IndSheafError(f"cell map is not monotone on {a} <= {b}")
            object.__setattr__(self, "_assignment", assignment)
        elif self.kind == "constant":
            if not self.source.is_line or self.target.is_line:
                raise UnsupportedShapeError("constant maps go from the line to a finite poset")
            if self.constant_cell not in self.target.cells:
                raise IndSheafError("constant value is not a cell of the target")
        elif self.kind == "translate":
            if not (self.source.is_line and self.target.is_line):
                raise UnsupportedShapeError("translations act on the line")
        else:
            raise UnsupportedShapeError(f"unsupported map shape {self.kind!r}")

    def __call__(self, c):
        if self.kind == "table":
            return self._assignment[c]
        if self.kind == "constant":
            return self.constant_cell
        return c + 2 * self.units

    def fiber(self, y) -> List:
        """有限源上的纤维 f^{-1}(y)"""
        if self.source.is_line:
            raise UnsupportedShapeError("fibres are only listed for finite sources")
        return [c for c in self.source.cells if self(c) == y]

    def compose(self, first: "CellMap") -> "CellMap":
        """self∘first，仅支持有限源"""
        if first.source.is_line:
            if first.kind == "translate" and self.kind == "translate":
                return translation(first.units + self.units)
            raise UnsupportedShapeError("composition on the line is limited to translations")
        return CellMap(first.source, self.target, "table",
                       tuple((c, self(first(c))) for c in first.source.cells))


def identity_map(space: Space) -> CellMap:
    if space.is_line:
        return translation(0)
    return CellMap(space, space, "table", tuple((c, c) for c in space.cells))


def translation(units: int) -> CellMap:
    return CellMap(LINE, LINE, "translate", units=units)


def to_point(space: Space, target: FinitePoset = None) -> CellMap:
    target = target or point()
    value = target.cells[0]
    if space.is_line:
        return CellMap(space, target, "constant", constant_cell=value)
    return CellMap(space, target, "table", tuple((c, value) for c in space.cells))


def point_inclusion(space: Space, x) -> CellMap:
    """j_x: {x} -> X"""
    source = point(f"pt_{x}")
    return CellMap(source, space, "table", ((source.cells[0], x),))


def preimage(f: CellMap, U: CellSet) -> CellSet:
    """逐单元原像；U 为开集时结果仍为开集（单调性）"""
    if U.space != f.target:
        raise SpaceMismatchError("set is not in the target of the map")
    if f.kind == "translate":
        result = CellSet(f.source, left=U.left, breaks=tuple(b - 2 * f.units for b in U.breaks))
    elif f.kind == "constant":
        result = whole(f.source) if U.contains(f.constant_cell) else empty(f.source)
    else:
        result = CellSet(f.source, frozenset(c for c in f.source.cells if U.contains(f(c))))
    return result.as_open() if isinstance(U, OpenSet) else result


def fiber_square(f: CellMap, g: CellMap) -> Tuple[FinitePoset, CellMap, CellMap]:
    """
    有限偏序集上的拉回方块 X' = X ×_Y Y'
    :param f: X -> Y
    :param g: Y' -> Y
    :return: (X', f': X' -> Y', g': X' -> X)
    """
    if f.target != g.target:
        raise SpaceMismatchError("maps of a cartesian square must share the target")
    if f.source.is_line or g.source.is_line:
        raise UnsupportedShapeError("cartesian squares are built on finite posets only")
    pairs = [(x, y) for x in f.source.cells for y in g.source.cells if f(x) == g(y)]
    names = {p: f"{p[0]}|{p[1]}" for p in pairs}
    relations = [(names[p], names[q]) for p in pairs for q in pairs
                 if p != q and f.source.leq(p[0], q[0]) and g.source.leq(p[1], q[1])]
    product = FinitePoset(tuple(names[p] for p in pairs), tuple(relations), name="fiber")
    f_prime = CellMap(product, g.source, "table", tuple((names[p], p[1]) for p in pairs))
    g_prime = CellMap(product, f.source, "table", tuple((names[p], p[0]) for p in pairs))
    return product, f_prime, g_prime


def open_embedding(space: FinitePoset, U: CellSet) -> CellMap:
    """有限偏序集中开集 U 的包含映射 U -> X"""
    members = space.sorted_cells(U.cells)
    sub = FinitePoset(tuple(members), tuple((a, b) for a in members for b in members
                                            if a != b and space.leq(a, b)), name="open")
    return CellMap(sub, space, "table", tuple((c, c) for c in members))
