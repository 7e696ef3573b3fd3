#!/usr/bin/env python3
"""
可构造层
层 = 单元偏序上的协变函子：每个单元一个茎，每个覆盖关系 c <= c' 一个泛化映射
组合直线上只保存一个有限窗口（两端为边单元），窗口外为恒等映射的常值尾部
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..common.errors import DimensionMismatchError, IndSheafError, SpaceMismatchError
from ..linalg import (
    Field, LinearMap, Subspace, compose, from_columns, from_rows, identity, kernel, zero_map,
)
from ..space import CellSet, LocallyClosedSet, Space, chart_bounds, locally_closed, star

logger = logging.getLogger('Sheaf')

Window = Tuple[int, int]


def _is_identity(m: LinearMap) -> bool:
    return m.domain_dim == m.codomain_dim and m == identity(m.field, m.domain_dim)


@dataclass(frozen=True)
class Sheaf:
    """
    有限维茎的可构造层
    :param stalks: (cell, dim) 序列；直线上覆盖窗口内全部单元
    :param gens: ((c, c'), LinearMap) 序列；直线上只含窗口内部顶点出发的映射
    :param window: 直线上的窗口 (lo, hi)，两端为奇数（边）
    """

    space: Space
    field: Field
    stalks: Tuple[Tuple[Hashable, int], ...]
    gens: Tuple[Tuple[Tuple, LinearMap], ...]
    window: Optional[Window] = None

    def __post_init__(self):
        dims = dict(self.stalks)
        maps = dict(self.gens)
        if self.space.is_line:
            lo, hi = self._normalize_window(dims, maps)
            dims = {c: dims[c] for c in range(lo, hi + 1)}
            maps = {pair: m for pair, m in maps.items() if lo < pair[0] < hi}
            object.__setattr__(self, "window", (lo, hi))
            object.__setattr__(self, "stalks", tuple(sorted(dims.items())))
            object.__setattr__(self, "gens", tuple(sorted(maps.items())))
        else:
            if set(dims) != set(self.space.cells):
                raise IndSheafError("stalks must be given for every cell of the poset")
            expected = set(self.space.covering_pairs(self.space.cells))
            missing = expected - set(maps)
            if missing:
                raise IndSheafError(f"generization maps missing for {sorted(map(str, missing))}")
            key = self.space.sort_key
            object.__setattr__(self, "stalks", tuple((c, dims[c]) for c in self.space.sorted_cells(dims)))
            object.__setattr__(self, "gens", tuple(
                (pair, maps[pair]) for pair in sorted(expected, key=lambda p: (key(p[0]), key(p[1])))))
        object.__setattr__(self, "_dims", dims)
        object.__setattr__(self, "_maps", {pair: m for pair, m in self.gens})
        for (a, b), m in self.gens:
            if (m.domain_dim, m.codomain_dim) != (self.stalk_dim(a), self.stalk_dim(b)):
                raise DimensionMismatchError(f"generization map {a}->{b} has the wrong shape")
        if not self.space.is_line:
            object.__setattr__(self, "_transitions", self._compose_paths())

    def _normalize_window(self, dims: Dict, maps: Dict) -> Window:
        if self.window is None:
            raise IndSheafError("a sheaf on the line needs a cell window")
        lo, hi = self.window
        if lo % 2 == 0 or hi % 2 == 0 or lo > hi:
            raise IndSheafError(f"window {self.window} must start and end at edges")
        for c in range(lo, hi + 1):
            if c not in dims:
                raise IndSheafError(f"stalk at cell {c} missing from the window")
        for v in range(lo + 1, hi, 2):
            if (v, v - 1) not in maps or (v, v + 1) not in maps:
                raise IndSheafError(f"generization maps at vertex {v} missing")

        def constant_step(v: int, e1: int, e2: int) -> bool:
            return (dims[e1] == dims[v] == dims[e2]
                    and _is_identity(maps[(v, e1)]) and _is_identity(maps[(v, e2)]))

        while lo < hi and constant_step(lo + 1, lo, lo + 2):
            lo += 2
        while hi > lo and constant_step(hi - 1, hi - 2, hi):
            hi -= 2
        if lo == hi:
            dims[-1] = dims[lo]
            lo = hi = -1
        return lo, hi

    # ---- 茎与映射 ----

    def _clamp(self, c):
        if self.space.is_line:
            lo, hi = self.window
            return min(max(c, lo), hi)
        return c

    def stalk_dim(self, c) -> int:
        return self._dims[self._clamp(c)]

    def gen(self, a, b) -> LinearMap:
        """覆盖关系 a <= b 上的泛化映射"""
        if self.space.is_line:
            lo, hi = self.window
            if lo < a < hi:
                return self._maps[(a, b)]
            return identity(self.field, self.stalk_dim(a))
        return self._maps[(a, b)]

    def transition(self, a, b) -> LinearMap:
        """a <= b 时 F_a -> F_b（沿任意路径复合，结果与路径无关）"""
        if a == b:
            return identity(self.field, self.stalk_dim(a))
        if self.space.is_line:
            return self.gen(a, b)
        return self._transitions[(a, b)]

    def _compose_paths(self) -> Dict:
        """计算所有 a <= b 的复合映射，并检查交换方块"""
        space = self.space
        reach: Dict = {}
        for a in reversed(space.topological_cells()):
            here = {a: identity(self.field, self.stalk_dim(a))}
            for c in space.up_covers(a):
                first = self._maps[(a, c)]
                for b in space.up_set(c):
                    candidate = compose(reach[(c, b)], first)
                    if b in here and here[b] != candidate:
                        raise IndSheafError(f"generization maps do not commute between {a} and {b}")
                    here[b] = candidate
            for b, m in here.items():
                reach[(a, b)] = m
        return reach

    # ---- 查询 ----

    def support(self) -> List:
        """茎非零的单元（直线上只列窗口内，尾部非零时另见 tail_dims）"""
        cells = range(self.window[0], self.window[1] + 1) if self.space.is_line else self.space.cells
        return [c for c in cells if self.stalk_dim(c) > 0]

    def tail_dims(self) -> Tuple[int, int]:
        if not self.space.is_line:
            return 0, 0
        return self.stalk_dim(self.window[0]), self.stalk_dim(self.window[1])

    def has_bounded_support(self) -> bool:
        return self.tail_dims() == (0, 0)

    def is_zero(self) -> bool:
        return all(d == 0 for _, d in self.stalks)

    def total_dim(self) -> int:
        if not self.has_bounded_support():
            raise IndSheafError("total dimension of an unbounded sheaf is infinite")
        return sum(d for _, d in self.stalks)

    def describe(self) -> str:
        parts = [f"{c}:{d}" for c, d in self.stalks if d]
        if self.space.is_line:
            left, right = self.tail_dims()
            return f"sheaf[line window={self.window} tails=({left},{right}) " + " ".join(parts) + "]"
        return f"sheaf[{self.space.name} " + " ".join(parts) + "]"


def assemble(space: Space, field: Field, dim_of: Callable, gen_of: Callable,
             window: Optional[Window] = None) -> Sheaf:
    """
    由茎维数函数与泛化映射函数构造层
    :param window: 直线上使用的窗口；窗口外 dim_of/gen_of 必须已是常值尾部
    """
    cells = chart_cells(space, window)
    pairs = space.covering_pairs(cells)
    if space.is_line:
        lo, hi = window
        pairs = [(a, b) for a, b in pairs if lo < a < hi]
    return Sheaf(space, field,
                 tuple((c, dim_of(c)) for c in cells),
                 tuple(((a, b), gen_of(a, b)) for a, b in pairs),
                 window)


def chart_cells(space: Space, window: Optional[Window] = None) -> List:
    if space.is_line:
        lo, hi = window
        return list(range(lo, hi + 1))
    return list(space.cells)


def common_chart(space: Space, sheaves: Iterable[Sheaf], extra: Sequence[int] = ()) -> Optional[Window]:
    """包含所有层的窗口（以及额外断点）的图表；偏序集上返回 None"""
    if not space.is_line:
        return None
    lows, highs = [], []
    for s in sheaves:
        if s.space != space:
            raise SpaceMismatchError("sheaves live on different spaces")
        lows.append(s.window[0])
        highs.append(s.window[1])
    if extra:
        lo, hi = chart_bounds(min(extra), max(extra))
        lows.append(lo)
        highs.append(hi)
    if not lows:
        return -1, -1
    return min(lows), max(highs)


def zero_sheaf(space: Space, field: Field) -> Sheaf:
    window = (-1, -1) if space.is_line else None
    return assemble(space, field, lambda c: 0, lambda a, b: zero_map(field, 0, 0), window)


def constant_on(space: Space, field: Field, Z, d: int = 1) -> Sheaf:
    """
    k_Z^d：Z 上茎为 k^d，其余为 0；两端都在 Z 中的映射为恒等，否则为 0
    :param Z: 局部闭的 CellSet 或 LocallyClosedSet
    """
    if isinstance(Z, LocallyClosedSet):
        Z = Z.as_cellset()
    if Z.space != space:
        raise SpaceMismatchError("support set is not in the sheaf's space")
    locally_closed(Z)
    window = None
    if space.is_line:
        window = chart_bounds(Z.breaks[0] - 1, Z.breaks[-1]) if Z.breaks else (-1, -1)

    def dim_of(c):
        return d if Z.contains(c) else 0

    def gen_of(a, b):
        if Z.contains(a) and Z.contains(b):
            return identity(field, d)
        return zero_map(field, dim_of(b), dim_of(a))

    return assemble(space, field, dim_of, gen_of, window)


def constant_sheaf(space: Space, field: Field, d: int = 1) -> Sheaf:
    """k_X^d"""
    window = (-1, -1) if space.is_line else None
    return assemble(space, field, lambda c: d, lambda a, b: identity(field, d), window)


def projective(space: Space, field: Field, c) -> Sheaf:
    """k_{U_c}，U_c 为 c 的最小开邻域；Hom(k_{U_c}, F) = F_c"""
    return constant_on(space, field, star(space, c))


@dataclass(frozen=True)
class SheafMorphism:
    """层态射；直线上的分量在窗口外取端点分量"""

    source: Sheaf
    target: Sheaf
    components: Tuple[Tuple[Hashable, LinearMap], ...]
    window: Optional[Window] = None

    def __post_init__(self):
        if self.source.space != self.target.space:
            raise SpaceMismatchError("morphism between sheaves on different spaces")
        space = self.source.space
        comps = dict(self.components)
        cells = chart_cells(space, self.window)
        for c in cells:
            m = comps.get(c)
            if m is None:
                raise IndSheafError(f"component at cell {c} missing")
            if (m.domain_dim, m.codomain_dim) != (self.source.stalk_dim(c), self.target.stalk_dim(c)):
                raise DimensionMismatchError(f"component at cell {c} has the wrong shape")
        for a, b in space.covering_pairs(cells):
            left = compose(self.target.gen(a, b), comps[a])
            right = compose(comps[b], self.source.gen(a, b))
            if left != right:
                raise IndSheafError(f"morphism does not commute on {a} <= {b}")
        if space.is_line:
            hull = common_chart(space, (self.source, self.target))
            lo, hi = self.window
            if lo > hull[0] or hi < hull[1]:
                raise IndSheafError("morphism window must contain both sheaf windows")
            comps = {c: comps[c] for c in range(hull[0], hull[1] + 1)}
            object.__setattr__(self, "window", hull)
            object.__setattr__(self, "components", tuple(sorted(comps.items())))
        else:
            object.__setattr__(self, "components", tuple((c, comps[c]) for c in space.sorted_cells(comps)))
        object.__setattr__(self, "_comps", comps)

    @property
    def space(self) -> Space:
        return self.source.space

    @property
    def field(self) -> Field:
        return self.source.field

    def component(self, c) -> LinearMap:
        if self.space.is_line:
            lo, hi = self.window
            c = min(max(c, lo), hi)
        return self._comps[c]

    def cells(self) -> List:
        return chart_cells(self.space, self.window)

    def is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.components)

    def is_mono(self) -> bool:
        return all(m.is_injective() for _, m in self.components)

    def is_epi(self) -> bool:
        return all(m.is_surjective() for _, m in self.components)

    def is_iso(self) -> bool:
        return all(m.is_iso() for _, m in self.components)

    def after(self, first: "SheafMorphism") -> "SheafMorphism":
        """self∘first"""
        if first.target != self.source:
            raise IndSheafError("morphisms are not composable")
        return build_morphism(first.source, self.target,
                              lambda c: compose(self.component(c), first.component(c)))

    def add(self, other: "SheafMorphism") -> "SheafMorphism":
        return build_morphism(self.source, self.target,
                              lambda c: self.component(c).add(other.component(c)))

    def scale(self, s) -> "SheafMorphism":
        return build_morphism(self.source, self.target, lambda c: self.component(c).scale(s))

    def sub(self, other: "SheafMorphism") -> "SheafMorphism":
        return self.add(other.scale(self.field.neg(self.field.one())))

    def equals(self, other: "SheafMorphism") -> bool:
        return self.source == other.source and self.target == other.target and self.components == other.components


def build_morphism(source: Sheaf, target: Sheaf, component_of: Callable,
                   window: Optional[Window] = None) -> SheafMorphism:
    window = window or common_chart(source.space, (source, target))
    cells = chart_cells(source.space, window)
    return SheafMorphism(source, target, tuple((c, component_of(c)) for c in cells), window)


def identity_morphism(F: Sheaf) -> SheafMorphism:
    return build_morphism(F, F, lambda c: identity(F.field, F.stalk_dim(c)))


def zero_morphism(F: Sheaf, G: Sheaf) -> SheafMorphism:
    return build_morphism(F, G, lambda c: zero_map(F.field, G.stalk_dim(c), F.stalk_dim(c)))


# ---- Hom 与截面 ----

@dataclass(frozen=True)
class HomSpace:
    """Hom(F, G)：在有限图表上求解交换条件得到的子空间"""

    source: Sheaf
    target: Sheaf
    cells: Tuple
    window: Optional[Window]
    basis: Subspace

    @property
    def dim(self) -> int:
        return self.basis.dim

    def _offsets(self) -> Dict:
        out, pos = {}, 0
        for c in self.cells:
            out[c] = pos
            pos += self.source.stalk_dim(c) * self.target.stalk_dim(c)
        return out

    def morphism(self, coords: Sequence) -> SheafMorphism:
        """基坐标 -> 态射"""
        f = self.source.field
        vec = [f.zero()] * self.basis.ambient_dim
        for coef, b in zip(coords, self.basis.basis):
            if coef:
                vec = [f.add(x, f.mul(coef, y)) for x, y in zip(vec, b)]
        return self.from_vector(vec)

    def from_vector(self, vec: Sequence) -> SheafMorphism:
        offsets = self._offsets()

        def component(c):
            rows, cols = self.target.stalk_dim(c), self.source.stalk_dim(c)
            start = offsets[c]
            return LinearMap(self.source.field, rows, cols, tuple(
                tuple(vec[start + i * cols + j] for j in range(cols)) for i in range(rows)))

        return build_morphism(self.source, self.target, component, self.window)

    def basis_morphisms(self) -> List[SheafMorphism]:
        return [self.from_vector(b) for b in self.basis.basis]

    def vector(self, phi: SheafMorphism) -> Tuple:
        out = []
        for c in self.cells:
            for row in phi.component(c).entries:
                out.extend(row)
        return tuple(out)

    def coordinates(self, phi: SheafMorphism) -> Tuple:
        coords = self.basis.coordinates(self.vector(phi))
        if coords is None:
            raise IndSheafError("map is not a sheaf morphism between these sheaves")
        return coords


def hom_space(F: Sheaf, G: Sheaf) -> HomSpace:
    """全局 Hom(F, G)：未知量为各单元上的矩阵，约束为与泛化映射交换"""
    if F.space != G.space:
        raise SpaceMismatchError("Hom between sheaves on different spaces")
    window = common_chart(F.space, (F, G))
    cells = chart_cells(F.space, window)
    return HomSpace(F, G, tuple(cells), window, hom_kernel(F, G, cells))


def hom_kernel(F: Sheaf, G: Sheaf, cells: Sequence) -> Subspace:
    """cells（上闭的单元组）上相容矩阵族构成的子空间，坐标按单元顺序、行优先展开"""
    space, field = F.space, F.field
    offsets, pos = {}, 0
    for c in cells:
        offsets[c] = pos
        pos += F.stalk_dim(c) * G.stalk_dim(c)
    rows = []
    for a, b in space.covering_pairs(cells):
        M, N = G.gen(a, b), F.gen(a, b)
        fa, fb = F.stalk_dim(a), F.stalk_dim(b)
        ga, gb = G.stalk_dim(a), G.stalk_dim(b)
        for i in range(gb):
            for j in range(fa):
                row = [field.zero()] * pos
                for k in range(ga):
                    if M.entries[i][k]:
                        idx = offsets[a] + k * fa + j
                        row[idx] = field.add(row[idx], M.entries[i][k])
                for k in range(fb):
                    if N.entries[k][j]:
                        idx = offsets[b] + i * fb + k
                        row[idx] = field.sub(row[idx], N.entries[k][j])
                rows.append(row)
    return kernel(from_rows(field, rows, pos))


@dataclass(frozen=True)
class SectionSpace:
    """F(U)：U 中单元上的相容族"""

    sheaf: Sheaf
    domain: CellSet
    cells: Tuple
    window: Optional[Window]
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def _offsets(self) -> Dict:
        out, pos = {}, 0
        for c in self.cells:
            out[c] = pos
            pos += self.sheaf.stalk_dim(c)
        return out

    def value_at(self, vector: Sequence, c) -> Tuple:
        """截面在单元 c 上的值；图表外的单元取图表端点（常值尾部）"""
        if self.window is not None:
            c = min(max(c, self.window[0]), self.window[1])
        start = self._offsets()[c]
        return tuple(vector[start:start + self.sheaf.stalk_dim(c)])

    def restriction(self, smaller: "SectionSpace") -> LinearMap:
        """F(U) -> F(V)，V ⊆ U"""
        if not smaller.domain.issubset(self.domain):
            raise IndSheafError("restriction needs V contained in U")
        columns = []
        for b in self.subspace.basis:
            vec = []
            for c in smaller.cells:
                vec.extend(self.value_at(b, c))
            coords = smaller.subspace.coordinates(vec)
            if coords is None:
                raise IndSheafError("restricted family is not a section")
            columns.append(coords)
        return from_columns(self.sheaf.field, smaller.dim, columns) if columns else zero_map(
            self.sheaf.field, smaller.dim, 0)


def sections(F: Sheaf, U: CellSet, window: Optional[Window] = None) -> SectionSpace:
    """F(U) = lim_{c∈U} F_c，U 为开集"""
    if U.space != F.space:
        raise SpaceMismatchError("open set is not in the sheaf's space")
    space, field = F.space, F.field
    if space.is_line:
        if window is None:
            window = common_chart(space, (F,), U.breaks)
        cells = [c for c in range(window[0], window[1] + 1) if U.contains(c)]
    else:
        cells = space.sorted_cells(U.cells)
    offsets, pos = {}, 0
    for c in cells:
        offsets[c] = pos
        pos += F.stalk_dim(c)
    rows = []
    for a, b in space.covering_pairs(cells):
        M = F.gen(a, b)
        for i in range(F.stalk_dim(b)):
            row = [field.zero()] * pos
            for k in range(F.stalk_dim(a)):
                row[offsets[a] + k] = M.entries[i][k]
            row[offsets[b] + i] = field.sub(row[offsets[b] + i], field.one())
            rows.append(row)
    return SectionSpace(F, U, tuple(cells), window, kernel(from_rows(field, rows, pos)))


def generator_map(F: Sheaf, c, vector: Sequence) -> SheafMorphism:
    """k_{U_c} -> F，在 c 处把 1 送到 vector"""
    P = projective(F.space, F.field, c)
    space = F.space

    def component(x):
        if P.stalk_dim(x) == 0:
            return zero_map(F.field, F.stalk_dim(x), 0)
        column = F.transition(c, x).apply(vector)
        return from_columns(F.field, F.stalk_dim(x), [column])

    return build_morphism(P, F, component)
