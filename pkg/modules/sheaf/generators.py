#!/usr/bin/env python3
"""
随机实例生成
测试与性质套件共用；同一个 random.Random 状态总是给出同一个实例
"""

import random
from typing import Optional

from ..linalg import Field, LinearMap, from_rows
from ..space import (
    CellMap, CellSet, FinitePoset, LINE, OpenSet, cell_set, chart_bounds, closed_interval,
    open_interval, up_closure,
)
from .operations import cokernel, direct_sum, row_morphism
from .sheaf import Sheaf, SheafMorphism, assemble, constant_on, generator_map, hom_space, zero_sheaf


def random_matrix(field: Field, rng: random.Random, rows: int, cols: int) -> LinearMap:
    return from_rows(field, [[field.random_element(rng) for _ in range(cols)] for _ in range(rows)], cols)


def random_poset(rng: random.Random, size: int, density: float = 0.35, name: str = "rand") -> FinitePoset:
    """c0..c{size-1}，只在 i < j 时可能加入 ci <= cj"""
    cells = tuple(f"c{i}" for i in range(size))
    relations = tuple((cells[i], cells[j]) for i in range(size) for j in range(i + 1, size)
                      if rng.random() < density)
    return FinitePoset(cells, relations, name=name)


def random_open(space, rng: random.Random, far: bool = False) -> OpenSet:
    """随机开集；直线上 far 时左端点取在 [-60, 60]"""
    if space.is_line:
        a = rng.randint(-60, 60) if far else rng.randint(-4, 2)
        return open_interval(a, a + rng.randint(1, 4))
    picked = [c for c in space.cells if rng.random() < 0.3]
    return up_closure(cell_set(space, picked))


def random_bounded_cells(rng: random.Random) -> CellSet:
    """直线上的随机有界局部闭集（闭区间、开区间或单个单元）"""
    a = rng.randint(-3, 2)
    b = a + rng.randint(1, 3)
    choice = rng.randrange(3)
    if choice == 0:
        return closed_interval(a, b)
    if choice == 1:
        return open_interval(a, b)
    return cell_set(LINE, [rng.randint(2 * a, 2 * b)])


def random_sheaf(space, field: Field, rng: random.Random, max_dim: int = 2) -> Sheaf:
    """
    随机层（直线上支撑有界）
    直线上直接取随机茎与映射；偏序集上取投射层直和之间随机映射的余核，保证交换性
    """
    if space.is_line:
        a = rng.randint(-3, 1)
        b = a + rng.randint(1, 3)
        dims = {c: rng.randint(0, max_dim) for c in range(2 * a, 2 * b + 1)}

        def dim_of(c):
            return dims.get(c, 0)

        gens = {}

        def gen_of(x, y):
            if (x, y) not in gens:
                gens[(x, y)] = random_matrix(field, rng, dim_of(y), dim_of(x))
            return gens[(x, y)]

        return assemble(space, field, dim_of, gen_of, chart_bounds(2 * a, 2 * b))
    cells = list(space.cells)
    generators = [rng.choice(cells) for _ in range(rng.randint(1, max_dim))]
    if not generators:
        return zero_sheaf(space, field)
    P0 = zero_sheaf(space, field)
    for c in generators:
        P0 = direct_sum(P0, constant_on(space, field, up_closure(cell_set(space, [c]))))
    relations = []
    for _ in range(rng.randint(0, max_dim)):
        c = rng.choice(cells)
        d = P0.stalk_dim(c)
        if d:
            relations.append(generator_map(P0, c, tuple(field.random_element(rng) for _ in range(d))))
    if not relations:
        return P0
    F, _ = cokernel(row_morphism(P0, relations))
    return F


def random_morphism(F: Sheaf, G: Sheaf, rng: random.Random) -> SheafMorphism:
    H = hom_space(F, G)
    return H.morphism([F.field.random_element(rng) for _ in range(H.dim)])


def random_monotone_map(source: FinitePoset, target: FinitePoset, rng: random.Random,
                        attempts: int = 50) -> Optional[CellMap]:
    """按拓扑序逐个赋值，取所有下覆盖像的公共上界；失败时返回 None"""
    for _ in range(attempts):
        assignment = {}
        for x in source.topological_cells():
            lower = [assignment[y] for y in source.down_covers(x)]
            candidates = [t for t in target.cells if all(target.leq(v, t) for v in lower)]
            if not candidates:
                break
            assignment[x] = rng.choice(candidates)
        else:
            return CellMap(source, target, "table", tuple(assignment.items()))
    return None
