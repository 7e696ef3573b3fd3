#!/usr/bin/env python3
"""
层的表示 P1 -> P0 -> F -> 0
P0、P1 是最小开邻域上常值层 k_{U_c} 的直和；Hom(k_{U_c}, F) = F_c，因此生成元就是茎中的向量
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..common.errors import PresentationError
from ..linalg import LinearMap, from_columns, span, zero_map
from ..space import OpenSet, star
from .operations import image, kernel, row_morphism
from .sheaf import Sheaf, SheafMorphism, chart_cells, generator_map

logger = logging.getLogger('Sheaf')

STRATEGIES = ("minimal", "full", "random")


@dataclass(frozen=True)
class Presentation:
    """
    :param generators: (cell, vector)：第 i 个生成元 k_{U_c} -> F 在 c 处把 1 送到 vector
    :param relations: (cell, vector)：第 j 个关系 k_{U_c'} -> P0 在 c' 处的取值
    """

    sheaf: Sheaf
    generators: Tuple[Tuple, ...]
    relations: Tuple[Tuple, ...]
    epsilon: SheafMorphism
    d1: SheafMorphism
    strategy: str

    @property
    def P0(self) -> Sheaf:
        return self.epsilon.source

    @property
    def P1(self) -> Sheaf:
        return self.d1.source

    def generator_cells(self) -> List:
        return [c for c, _ in self.generators]

    def relation_cells(self) -> List:
        return [c for c, _ in self.relations]

    def generator_opens(self) -> List[Tuple[OpenSet, int]]:
        counts = Counter(self.generator_cells())
        space = self.sheaf.space
        return [(star(space, c), counts[c]) for c in sorted(counts, key=space.sort_key)]

    def relation_opens(self) -> List[Tuple[OpenSet, int]]:
        counts = Counter(self.relation_cells())
        space = self.sheaf.space
        return [(star(space, c), counts[c]) for c in sorted(counts, key=space.sort_key)]

    def relation_matrix(self) -> LinearMap:
        """R[i][j]：第 j 个关系在第 i 个生成元上的系数（仅当 c_i <= c'_j 时可能非零）"""
        space = self.sheaf.space
        field = self.sheaf.field
        columns = []
        for cell, vector in self.relations:
            present = [i for i, (c, _) in enumerate(self.generators) if space.leq(c, cell)]
            column = [field.zero()] * len(self.generators)
            for i, value in zip(present, vector):
                column[i] = value
            columns.append(tuple(column))
        if not columns:
            return zero_map(field, len(self.generators), 0)
        return from_columns(field, len(self.generators), columns)


def _generators(F: Sheaf, strategy: str, rng: Optional[random.Random]) -> List[Tuple]:
    """逐单元选取生成元：minimal 只补足来自更低单元的像，full 取全部标准基，random 取随机补足"""
    space, field = F.space, F.field
    cells = chart_cells(space, F.window)
    if not space.is_line:
        cells = space.topological_cells()
    chosen = []
    for c in cells:
        d = F.stalk_dim(c)
        if d == 0:
            continue
        units = [tuple(field.one() if i == k else field.zero() for i in range(d)) for k in range(d)]
        if strategy == "full":
            chosen.extend((c, u) for u in units)
            continue
        incoming = []
        for b in space.down_covers(c):
            incoming.extend(F.gen(b, c).columns())
        current = span(field, d, incoming)
        candidates = units
        while current.dim < d:
            if strategy == "random":
                candidates = [tuple(field.random_element(rng) for _ in range(d))]
            for u in candidates:
                if not current.contains(u):
                    chosen.append((c, u))
                    current = span(field, d, list(current.basis) + [u])
                    if current.dim == d:
                        break
    return chosen


def presentation(F: Sheaf, strategy: str = "minimal", seed: int = 0) -> Presentation:
    """
    构造并验证表示
    :param strategy: minimal | full | random
    :param seed: random 策略的种子
    :return: Presentation，满足 epsilon 满、epsilon∘d1 = 0、im d1 = ker epsilon
    """
    if strategy not in STRATEGIES:
        raise PresentationError(f"unknown presentation strategy {strategy!r}")
    if not F.has_bounded_support():
        raise PresentationError("presentations need a sheaf with bounded support")
    rng = random.Random(seed)
    gens = _generators(F, strategy, rng)
    epsilon = row_morphism(F, [generator_map(F, c, v) for c, v in gens])
    K, incl = kernel(epsilon)
    relation_gens = _generators(K, "random" if strategy == "random" else "minimal", rng)
    P0 = epsilon.source
    relations = [(c, incl.component(c).apply(w)) for c, w in relation_gens]
    d1 = row_morphism(P0, [generator_map(P0, c, v) for c, v in relations])
    result = Presentation(F, tuple(gens), tuple(relations), epsilon, d1, strategy)
    _verify(result, K)
    logger.debug(f"presentation ({strategy}): {len(gens)} generators, {len(relations)} relations")
    return result


def _verify(p: Presentation, K: Sheaf) -> None:
    if not p.epsilon.is_epi():
        raise PresentationError("generators do not span every stalk")
    if not p.epsilon.after(p.d1).is_zero():
        raise PresentationError("relations do not map to zero")
    I, _ = image(p.d1)
    for c in chart_cells(K.space, p.d1.window):
        if I.stalk_dim(c) != K.stalk_dim(c):
            raise PresentationError(f"relations do not span the kernel at cell {c}")
