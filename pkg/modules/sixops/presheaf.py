#!/usr/bin/env python3
"""
Hom 预层 W ↦ Hom(X|_W, Y|_W) 与粘合检查
ι 像之间的 Hom 由全忠实性化为层之间的 Hom，在 W 的单元上求解交换条件
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from ..common.errors import UnsupportedShapeError
from ..indcat import EXACT, Verdict
from ..linalg import LinearMap, Subspace, compose, from_columns, kernel, rank, stack_rows, zero_map
from ..space import CellSet
from ..sheaf import Sheaf, common_chart, hom_kernel

logger = logging.getLogger('SixOps')


def _underlying(X) -> Sheaf:
    """ι 像或单对象系统的底层层"""
    if isinstance(X, Sheaf):
        return X
    cert = X.cert
    if cert is not None and cert.rule == "exhaust":
        return cert.base
    if cert is not None and cert.rule == "constant":
        return X.stable_object()
    raise UnsupportedShapeError(f"the Hom presheaf is computed for iota images, got {X.describe()}")


@dataclass
class HomPresheaf:
    """
    W ↦ Hom(F|_W, G|_W)
    值是 W 中单元上相容矩阵族的子空间；限制映射是坐标投影
    """

    source: Sheaf
    target: Sheaf

    def __post_init__(self):
        self._values: Dict = {}

    def _cells(self, W: CellSet, breaks: Sequence[int] = ()) -> List:
        space = self.source.space
        if not space.is_line:
            return space.sorted_cells(W.cells)
        lo, hi = common_chart(space, (self.source, self.target), tuple(W.breaks) + tuple(breaks))
        return W.cells_in(lo, hi)

    def value(self, W: CellSet, breaks: Sequence[int] = ()) -> Tuple[List, Subspace]:
        """:return: (单元列表, 相容族子空间)"""
        key = (W, tuple(breaks))
        if key not in self._values:
            if not W.is_open():
                raise UnsupportedShapeError("the Hom presheaf is evaluated on open sets")
            cells = self._cells(W, breaks)
            self._values[key] = (cells, hom_kernel(self.source, self.target, cells))
        return self._values[key]

    def dim(self, W: CellSet) -> int:
        return self.value(W)[1].dim

    def _block_sizes(self, cells: Sequence) -> List[int]:
        return [self.source.stalk_dim(c) * self.target.stalk_dim(c) for c in cells]

    def restriction(self, W: CellSet, W_small: CellSet, breaks: Sequence[int] = ()) -> LinearMap:
        """Hom(F|_W, G|_W) -> Hom(F|_W', G|_W')，W' ⊆ W"""
        cells, big = self.value(W, breaks)
        small_cells, small = self.value(W_small, breaks)
        offsets, pos = {}, 0
        for c, size in zip(cells, self._block_sizes(cells)):
            offsets[c] = (pos, size)
            pos += size
        field = self.source.field
        columns = []
        for v in big.basis:
            projected = []
            for c in small_cells:
                start, size = offsets[c]
                projected.extend(v[start:start + size])
            columns.append(small.coordinates(projected))
        if not columns:
            return zero_map(field, small.dim, 0)
        return from_columns(field, small.dim, columns)


def hom_presheaf(X, Y) -> HomPresheaf:
    """ι 像（或层）X、Y 之间的 Hom 预层"""
    F, G = _underlying(X), _underlying(Y)
    if F.space != G.space:
        raise UnsupportedShapeError("Hom presheaf between different spaces")
    return HomPresheaf(F, G)


def check_glueing(presheaf: HomPresheaf, cover: Sequence[CellSet]) -> Verdict:
    """
    等化子条件：0 -> P(U) -> ∏ P(U_a) ⇉ ∏ P(U_a ∩ U_b) 正合，U 为覆盖的并
    """
    if not cover:
        raise UnsupportedShapeError("an open cover needs at least one member")
    U = cover[0]
    for W in cover[1:]:
        U = U.union(W)
    breaks = tuple(b for W in cover for b in W.breaks) if U.space.is_line else ()
    field = presheaf.source.field
    dim_u = presheaf.value(U, breaks)[1].dim
    to_parts = stack_rows(field, [presheaf.restriction(U, W, breaks) for W in cover], dim_u)
    pair_rows = []
    dims = [presheaf.value(W, breaks)[1].dim for W in cover]
    total = sum(dims)
    starts = [sum(dims[:i]) for i in range(len(cover))]
    for i, A in enumerate(cover):
        for j, B in enumerate(cover):
            if j <= i:
                continue
            AB = A.intersection(B).as_open()
            r_a = presheaf.restriction(A, AB, breaks)
            r_b = presheaf.restriction(B, AB, breaks)
            for k in range(r_a.codomain_dim):
                row = [field.zero()] * total
                for col in range(r_a.domain_dim):
                    row[starts[i] + col] = r_a.entries[k][col]
                for col in range(r_b.domain_dim):
                    row[starts[j] + col] = field.sub(row[starts[j] + col], r_b.entries[k][col])
                pair_rows.append(tuple(row))
    difference = LinearMap(field, len(pair_rows), total, tuple(pair_rows))
    injective = rank(to_parts) == dim_u
    complex_ok = compose(difference, to_parts).is_zero()
    equalizer = kernel(difference).dim
    ok = injective and complex_ok and equalizer == dim_u
    detail = f"P(U)={dim_u} equalizer={equalizer}"
    logger.debug(f"glueing over {len(cover)} opens: {detail}")
    return Verdict(ok, EXACT, detail)
