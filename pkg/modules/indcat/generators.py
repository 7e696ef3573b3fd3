#!/usr/bin/env python3
"""
随机的带证书序列系统
测试与性质套件共用；同一个 random.Random 状态总是给出同一个实例
"""

import random
from typing import Sequence, Tuple

from ..common.errors import IndSheafError
from ..linalg import Field
from ..space import LINE, closed_ray
from ..sheaf import (
    Sheaf, SheafMorphism, constant_on, direct_sum, direct_sum_morphisms, injections, natural_map, projections,
)
from .abelian import direct_sum_ind
from .certificate import PeriodCert
from .objects import IndMorphism, SeqSystem

RAY_SHIFT = PeriodCert(0, 1, "shift", units=1)


def _rays(field: Field, n: int, offsets: Sequence[int]) -> Tuple[Sheaf, SheafMorphism]:
    """⊕ k_[n+o, ∞) 与到下一层的限制"""
    level, step = None, None
    for o in offsets:
        F = constant_on(LINE, field, closed_ray(n + o))
        t = natural_map(LINE, field, closed_ray(n + o), closed_ray(n + o + 1))
        level = F if level is None else direct_sum(level, F)
        step = t if step is None else direct_sum_morphisms(step, t)
    return level, step


def ray_system(field: Field, offsets: Sequence[int], name: str = "rays") -> SeqSystem:
    """"lim" ⊕_o k_[n+o, ∞)，每层平移一个单位"""
    if not offsets:
        raise IndSheafError("a ray system needs at least one ray")
    level, step = _rays(field, 0, offsets)
    return SeqSystem.from_prefix([level], [step], RAY_SHIFT, name)


def random_ray_system(field: Field, rng: random.Random, max_rays: int = 3, name: str = "rays") -> SeqSystem:
    offsets = sorted(rng.randint(-3, 3) for _ in range(rng.randint(1, max_rays)))
    return ray_system(field, offsets, name)


def nilpotent_rays(field: Field) -> SeqSystem:
    """
    X_n = k_[n, ∞) ⊕ k_[n+1, ∞)
    转移把第一个分量限制到下一层的第二个分量 k_[n+2, ∞)，其余为零；相邻两个转移的合成为零
    """
    A, B = constant_on(LINE, field, closed_ray(0)), constant_on(LINE, field, closed_ray(1))
    A1, B1 = constant_on(LINE, field, closed_ray(1)), constant_on(LINE, field, closed_ray(2))
    first, _ = projections(A, B)
    _, second = injections(A1, B1)
    t0 = second.after(natural_map(LINE, field, closed_ray(0), closed_ray(2)).after(first))
    return SeqSystem.from_prefix([direct_sum(A, B)], [t0], RAY_SHIFT, "nilpotent")


def ray_sequence(field: Field, left: Sequence[int], right: Sequence[int]) -> Tuple[IndMorphism, IndMorphism]:
    """0 -> A -> A ⊕ B -> B -> 0，A、B 为射线系统；分量按平移规则重复"""
    A, B = ray_system(field, left, "A"), ray_system(field, right, "B")
    S = direct_sum_ind(A, B)
    incl = IndMorphism(A, S, lambda n: injections(A.level(n), B.level(n))[0], repeats=RAY_SHIFT)
    proj = IndMorphism(S, B, lambda n: projections(A.level(n), B.level(n))[1], repeats=RAY_SHIFT)
    return incl, proj


def random_ray_sequence(field: Field, rng: random.Random) -> Tuple[IndMorphism, IndMorphism]:
    left = sorted(rng.randint(-3, 3) for _ in range(rng.randint(1, 2)))
    right = sorted(rng.randint(-3, 3) for _ in range(rng.randint(1, 2)))
    return ray_sequence(field, left, right)
