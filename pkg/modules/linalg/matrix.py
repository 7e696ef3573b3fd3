#!/usr/bin/env python3
"""
精确矩阵运算
稠密矩阵，行向量以 tuple 保存；所有结果都是确定的（同样的输入得到同样的字节）
行化简、秩与零空间由 sympy 的 DomainMatrix 在 QQ 或 GF(p) 上完成
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .field import Field
from ..common.errors import DimensionMismatchError

Vector = Tuple


@dataclass(frozen=True)
class LinearMap:
    """k^domain_dim -> k^codomain_dim 的线性映射，entries 为 codomain_dim 行 domain_dim 列"""

    field: Field
    codomain_dim: int
    domain_dim: int
    entries: Tuple[Tuple, ...]

    def __post_init__(self):
        if len(self.entries) != self.codomain_dim or any(len(r) != self.domain_dim for r in self.entries):
            raise DimensionMismatchError(
                f"entry count does not match {self.codomain_dim}x{self.domain_dim}")

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.domain_dim:
            raise DimensionMismatchError(f"vector of length {len(v)} for domain k^{self.domain_dim}")
        f = self.field
        out = []
        for row in self.entries:
            acc = f.zero()
            for a, b in zip(row, v):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.domain_dim)]

    def transpose(self) -> "LinearMap":
        return from_columns(self.field, self.domain_dim, list(self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def scale(self, c) -> "LinearMap":
        f = self.field
        return LinearMap(f, self.codomain_dim, self.domain_dim,
                         tuple(tuple(f.mul(c, x) for x in row) for row in self.entries))

    def add(self, other: "LinearMap") -> "LinearMap":
        if (self.codomain_dim, self.domain_dim) != (other.codomain_dim, other.domain_dim):
            raise DimensionMismatchError("cannot add maps of different shapes")
        f = self.field
        return LinearMap(f, self.codomain_dim, self.domain_dim,
                         tuple(tuple(f.add(a, b) for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def sub(self, other: "LinearMap") -> "LinearMap":
        return self.add(other.scale(self.field.neg(self.field.one())))

    def is_injective(self) -> bool:
        return rank(self) == self.domain_dim

    def is_surjective(self) -> bool:
        return rank(self) == self.codomain_dim

    def is_iso(self) -> bool:
        return self.domain_dim == self.codomain_dim and self.is_injective()


@dataclass(frozen=True)
class Subspace:
    """k^ambient_dim 的子空间；basis 为简化行阶梯形（首个非零元为 1），因此表示唯一"""

    field: Field
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def inclusion(self) -> LinearMap:
        """k^dim -> k^ambient_dim，列为基向量"""
        return from_columns(self.field, self.ambient_dim, list(self.basis))

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """v 在基下的坐标；v 不在子空间中时返回 None"""
        return solve(self.inclusion(), v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)


def from_rows(field: Field, rows: Sequence[Sequence], domain_dim: Optional[int] = None) -> LinearMap:
    rows = [tuple(field.coerce(x) for x in r) for r in rows]
    cols = domain_dim if domain_dim is not None else (len(rows[0]) if rows else 0)
    return LinearMap(field, len(rows), cols, tuple(rows))


def from_columns(field: Field, codomain_dim: int, columns: Sequence[Sequence]) -> LinearMap:
    entries = tuple(tuple(col[i] for col in columns) for i in range(codomain_dim))
    return LinearMap(field, codomain_dim, len(columns), entries)


def identity(field: Field, n: int) -> LinearMap:
    one, zero = field.one(), field.zero()
    return LinearMap(field, n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))


def zero_map(field: Field, codomain_dim: int, domain_dim: int) -> LinearMap:
    zero = field.zero()
    return LinearMap(field, codomain_dim, domain_dim,
                     tuple(tuple(zero for _ in range(domain_dim)) for _ in range(codomain_dim)))


def _domain_matrix(field: Field, rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    return DomainMatrix([[field.to_domain(x) for x in r] for r in rows], (len(rows), ncols), field.domain)


def _rows_of(field: Field, dm: DomainMatrix) -> List[list]:
    return [[field.from_domain(e) for e in r] for r in dm.to_list()]


def _rref(field: Field, rows: Sequence[Sequence], ncols: int) -> Tuple[List[list], List[int]]:
    """行最简形，返回非零行与主元列"""
    if not rows or ncols == 0:
        return [], []
    reduced, pivots = _domain_matrix(field, rows, ncols).rref()
    return _rows_of(field, reduced)[:len(pivots)], list(pivots)


def _canonical_span(field: Field, ambient_dim: int, vectors: Sequence[Sequence]) -> Subspace:
    reduced, _ = _rref(field, [list(v) for v in vectors], ambient_dim)
    return Subspace(field, ambient_dim, tuple(tuple(r) for r in reduced))


def rank(f: LinearMap) -> int:
    if f.codomain_dim == 0 or f.domain_dim == 0:
        return 0
    return _domain_matrix(f.field, f.entries, f.domain_dim).rank()


def kernel(f: LinearMap) -> Subspace:
    """精确零空间，dim kernel + rank = domain_dim；基取行最简形"""
    field = f.field
    if f.codomain_dim == 0 or f.domain_dim == 0:
        return _canonical_span(field, f.domain_dim, identity(field, f.domain_dim).entries)
    basis = _domain_matrix(field, f.entries, f.domain_dim).nullspace()
    return _canonical_span(field, f.domain_dim, _rows_of(field, basis))


def image(f: LinearMap) -> Subspace:
    return _canonical_span(f.field, f.codomain_dim, f.columns())


def cokernel(f: LinearMap) -> Tuple[LinearMap, int]:
    """
    余核投影
    :return: (q, c)，q: k^codomain_dim -> k^c 满射且 q∘f = 0，c = codomain_dim - rank f
    """
    left_null = kernel(f.transpose())
    q = from_rows(f.field, [list(v) for v in left_null.basis], f.codomain_dim)
    return q, left_null.dim


def solve(f: LinearMap, b: Sequence) -> Optional[Vector]:
    """返回 f(v) = b 的一个解；b 不在像中时返回 None"""
    if len(b) != f.codomain_dim:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for k^{f.codomain_dim}")
    field = f.field
    augmented = [list(row) + [b[i]] for i, row in enumerate(f.entries)]
    reduced, pivots = _rref(field, augmented, f.domain_dim + 1)
    if f.domain_dim in pivots:
        return None
    v = [field.zero()] * f.domain_dim
    for row, pc in zip(reduced, pivots):
        v[pc] = row[-1]
    return tuple(v)


def compose(g: LinearMap, f: LinearMap) -> LinearMap:
    """g∘f（先 f 后 g）"""
    if g.domain_dim != f.codomain_dim:
        raise DimensionMismatchError(
            f"cannot compose k^{f.domain_dim}->k^{f.codomain_dim} with k^{g.domain_dim}->k^{g.codomain_dim}")
    field = f.field
    f_cols = f.columns()
    cols = [g.apply(c) for c in f_cols]
    return from_columns(field, g.codomain_dim, cols) if cols else zero_map(field, g.codomain_dim, 0)


def direct_sum(f: LinearMap, g: LinearMap) -> LinearMap:
    """分块对角矩阵 [[f, 0], [0, g]]"""
    field = f.field
    zero = field.zero()
    rows = [tuple(r) + (zero,) * g.domain_dim for r in f.entries]
    rows += [(zero,) * f.domain_dim + tuple(r) for r in g.entries]
    return LinearMap(field, f.codomain_dim + g.codomain_dim, f.domain_dim + g.domain_dim, tuple(rows))


def tensor(f: LinearMap, g: LinearMap) -> LinearMap:
    """Kronecker 积，基按 (i, j) 字典序排列"""
    field = f.field
    rows = []
    for fr in f.entries:
        for gr in g.entries:
            rows.append(tuple(field.mul(a, b) for a in fr for b in gr))
    return LinearMap(field, f.codomain_dim * g.codomain_dim, f.domain_dim * g.domain_dim, tuple(rows))


def stack_rows(field: Field, blocks: Sequence[LinearMap], domain_dim: int) -> LinearMap:
    """纵向拼接（同一定义域）"""
    rows = []
    for b in blocks:
        if b.domain_dim != domain_dim:
            raise DimensionMismatchError("row blocks must share the domain")
        rows.extend(b.entries)
    return LinearMap(field, len(rows), domain_dim, tuple(rows))


def stack_columns(field: Field, blocks: Sequence[LinearMap], codomain_dim: int) -> LinearMap:
    """横向拼接（同一值域）"""
    cols = []
    for b in blocks:
        if b.codomain_dim != codomain_dim:
            raise DimensionMismatchError("column blocks must share the codomain")
        cols.extend(b.columns())
    return from_columns(field, codomain_dim, cols) if cols else zero_map(field, codomain_dim, 0)


def span(field: Field, ambient_dim: int, vectors: Sequence[Sequence]) -> Subspace:
    return _canonical_span(field, ambient_dim, vectors)
