#!/usr/bin/env python3
"""
有界开集上的预层与 Mayer-Vietoris 检查
值是有限维空间 k^d，限制映射是显式矩阵；四种构造方式对应脚本里的预层种类
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..common.errors import IndSheafError, UnsupportedShapeError
from ..linalg import Field, LinearMap, compose, identity, kernel, rank, stack_columns, stack_rows, zero_map
from ..space import LINE, CellSet, OpenSet, empty, open_interval, star
from ..sheaf import SectionSpace, Sheaf, sections
from ..sheaf.generators import random_open

logger = logging.getLogger('Extend')

KINDS = ("sheaf-sections", "all-cell-functions", "bounded-cell-functions", "table", "constant")


class PresheafOnT:
    """
    F：有界开集 -> 有限维空间
    :param dim_of: U -> dim F(U)
    :param restriction_of: (U, V) -> F(U) -> F(V)，只在 V ⊊ U 时调用
    """

    def __init__(self, space, field: Field, kind: str, dim_of: Callable[[CellSet], int],
                 restriction_of: Callable[[CellSet, CellSet], LinearMap], name: Optional[str] = None):
        if kind not in KINDS:
            raise IndSheafError(f"unknown presheaf kind {kind!r}")
        self.space = space
        self.field = field
        self.kind = kind
        self.name = name or kind
        self._dim_of = dim_of
        self._restriction_of = restriction_of
        self._dims: Dict[CellSet, int] = {}
        self._maps: Dict[Tuple[CellSet, CellSet], LinearMap] = {}

    def _check_open(self, U: CellSet) -> None:
        if U.space != self.space:
            raise IndSheafError("open set is not in the presheaf's space")
        if not U.is_open() or not U.is_bounded():
            raise UnsupportedShapeError(f"presheaves are evaluated on bounded opens, got {U.describe()}")

    def dim(self, U: CellSet) -> int:
        self._check_open(U)
        if U.is_empty() and self.kind != "table":
            return 0
        if U not in self._dims:
            self._dims[U] = self._dim_of(U)
        return self._dims[U]

    def restriction(self, U: CellSet, V: CellSet) -> LinearMap:
        """F(U) -> F(V)，V ⊆ U"""
        if not V.issubset(U):
            raise IndSheafError(f"restriction needs {V.describe()} inside {U.describe()}")
        if U == V:
            return identity(self.field, self.dim(U))
        key = (U, V)
        if key not in self._maps:
            m = self._restriction_of(U, V) if self.dim(U) and self.dim(V) else zero_map(
                self.field, self.dim(V), self.dim(U))
            if (m.codomain_dim, m.domain_dim) != (self.dim(V), self.dim(U)):
                raise IndSheafError(f"restriction {U.describe()} -> {V.describe()} has the wrong shape")
            self._maps[key] = m
        return self._maps[key]

    def is_functorial(self, U: CellSet, V: CellSet, W: CellSet) -> bool:
        """W ⊆ V ⊆ U 时 r_UW = r_VW ∘ r_UV"""
        return compose(self.restriction(V, W), self.restriction(U, V)) == self.restriction(U, W)

    def describe(self) -> str:
        return f"presheaf {self.name} ({self.kind})"


# ---- 构造 ----

def _projection(field: Field, big: Sequence, small: Sequence) -> LinearMap:
    """按单元坐标的投影 k^big -> k^small"""
    position = {c: i for i, c in enumerate(big)}
    rows = []
    for c in small:
        rows.append(tuple(field.one() if j == position[c] else field.zero() for j in range(len(big))))
    return LinearMap(field, len(small), len(big), tuple(rows))


def sheaf_sections(G: Sheaf, name: Optional[str] = None) -> PresheafOnT:
    """U ↦ G(U)"""
    spaces: Dict[CellSet, SectionSpace] = {}

    def section_space(U):
        if U not in spaces:
            spaces[U] = sections(G, U)
        return spaces[U]

    return PresheafOnT(G.space, G.field, "sheaf-sections",
                       lambda U: section_space(U).dim,
                       lambda U, V: section_space(U).restriction(section_space(V)),
                       name or f"sections({G.describe()})")


def all_cell_functions(space, field: Field) -> PresheafOnT:
    """U ↦ ∏_{c ∈ U} k，限制是丢掉 U 之外的坐标"""
    return PresheafOnT(space, field, "all-cell-functions",
                       lambda U: len(U.finite_cells()),
                       lambda U, V: _projection(field, U.finite_cells(), V.finite_cells()))


def _height(space, c) -> int:
    """直线上是单元到原点的距离；偏序集上是最长下降链的长度"""
    if space.is_line:
        return abs(c)
    below = [b for b in space.down_covers(c)]
    return 1 + max((_height(space, b) for b in below), default=-1)


def bounded_cell_functions(space, field: Field, bound: int) -> PresheafOnT:
    """
    U ↦ {U 上的单元函数，在高度超过 bound 的单元上取零}
    仍然是单元乘积的子预层，满足 Mayer-Vietoris
    """
    if bound < 0:
        raise IndSheafError("growth bound must be non-negative")

    def cells(U):
        return [c for c in U.finite_cells() if _height(space, c) <= bound]

    return PresheafOnT(space, field, "bounded-cell-functions",
                       lambda U: len(cells(U)),
                       lambda U, V: _projection(field, cells(U), cells(V)),
                       f"bounded-cell-functions({bound})")


def constant_presheaf(space, field: Field, d: int = 1) -> PresheafOnT:
    """非空 U 上取 k^d、限制为恒等；不相交的两个开集上违反 (ii)"""
    return PresheafOnT(space, field, "constant",
                       lambda U: d,
                       lambda U, V: identity(field, d),
                       f"constant({d})")


def table(space, field: Field, dims: Dict[CellSet, int],
          maps: Dict[Tuple[CellSet, CellSet], LinearMap], name: str = "table") -> PresheafOnT:
    """
    用户给出的表：没有直接列出的限制映射沿表中的开集链复合得到
    :param dims: 开集 -> 维数（未列出的空集取 0）
    :param maps: (U, V) -> 限制矩阵
    """
    edges: Dict[CellSet, List[CellSet]] = {}
    for U, V in maps:
        edges.setdefault(U, []).append(V)

    def dim_of(U):
        if U in dims:
            return dims[U]
        if U.is_empty():
            return 0
        raise IndSheafError(f"table has no value on {U.describe()}")

    def restriction_of(U, V):
        # 广度优先找 U ⊇ ... ⊇ V 的一条链
        queue = deque([(U, identity(field, dim_of(U)))])
        seen = {U}
        while queue:
            W, m = queue.popleft()
            if W == V:
                return m
            for X in edges.get(W, ()):
                if X in seen or not V.issubset(X):
                    continue
                seen.add(X)
                queue.append((X, compose(maps[(W, X)], m)))
        raise IndSheafError(f"table has no restriction {U.describe()} -> {V.describe()}")

    return PresheafOnT(space, field, "table", dim_of, restriction_of, name)


# ---- Mayer-Vietoris ----

@dataclass(frozen=True)
class MVLine:
    pair: str
    ok: bool
    detail: str = ""

    def text(self) -> str:
        return f"pair {self.pair} {'ok' if self.ok else 'FAIL'}" + (f" {self.detail}" if self.detail else "")


@dataclass
class MVReport:
    presheaf: str
    lines: List[MVLine] = dc_field(default_factory=list)
    failing: Optional[Tuple[CellSet, CellSet]] = None

    @property
    def passed(self) -> bool:
        return all(line.ok for line in self.lines)

    def text(self) -> str:
        head = f"check-mv {self.presheaf}: {'pass' if self.passed else 'fail'}"
        return "\n".join([head] + ["  " + line.text() for line in self.lines])


def pair_label(U: CellSet, V: CellSet) -> str:
    return f"({U.describe()}, {V.describe()})"


def mv_pair(F: PresheafOnT, U: CellSet, V: CellSet) -> MVLine:
    """
    0 -> F(U∪V) -> F(U)⊕F(V) -> F(U∩V) 的正合性
    第二个映射是 (s, t) ↦ s|_{U∩V} - t|_{U∩V}
    """
    W, I = U.union(V).as_open(), U.intersection(V).as_open()
    field = F.field
    dim_w, dim_u, dim_v = F.dim(W), F.dim(U), F.dim(V)
    to_parts = stack_rows(field, [F.restriction(W, U), F.restriction(W, V)], dim_w)
    difference = stack_columns(field, [F.restriction(U, I), F.restriction(V, I).scale(field.neg(field.one()))],
                               F.dim(I))
    injective = rank(to_parts) == dim_w
    complex_ok = compose(difference, to_parts).is_zero()
    middle = kernel(difference).dim
    detail = f"F(U+V)={dim_w} F(U)+F(V)={dim_u + dim_v} kernel={middle}"
    if not injective:
        return MVLine(pair_label(U, V), False, "not injective; " + detail)
    if not complex_ok:
        return MVLine(pair_label(U, V), False, "not a complex; " + detail)
    return MVLine(pair_label(U, V), middle == dim_w, detail)


def check_mv(F: PresheafOnT, pairs: Sequence[Tuple[CellSet, CellSet]]) -> MVReport:
    """条件 (i) F(∅) = 0 与条件 (ii) 在给定的各对开集上"""
    report = MVReport(F.name)
    nothing = F.dim(empty(F.space))
    report.lines.append(MVLine("(empty)", nothing == 0, f"F(empty)={nothing}"))
    for U, V in pairs:
        line = mv_pair(F, U, V)
        report.lines.append(line)
        if not line.ok and report.failing is None:
            report.failing = (U, V)
    logger.debug(f"check-mv {F.name}: {len(pairs)} pairs, {'pass' if report.passed else 'fail'}")
    return report


def sample_pairs(space, rng: random.Random, count: int) -> List[Tuple[OpenSet, OpenSet]]:
    """随机有界开集对；偏序集上混入单元的最小开邻域"""
    pairs = []
    while len(pairs) < count:
        if space.is_line or rng.random() < 0.5:
            pairs.append((random_open(space, rng), random_open(space, rng)))
        else:
            a, b = rng.choice(space.cells), rng.choice(space.cells)
            pairs.append((star(space, a), star(space, b)))
    return pairs


def constant_counterexample(field: Field) -> Tuple[PresheafOnT, MVReport]:
    """直线上的常值预层在两个不相交区间上：k -> k⊕k -> 0 在中间不正合（核是 2 维）"""
    F = constant_presheaf(LINE, field)
    return F, check_mv(F, [(open_interval(0, 1), open_interval(2, 3))])
