#!/usr/bin/env python3
"""
函子 ι、α、β
ι 把层变成 ind-层（直线上是紧支撑截断的穷竭系统），α 取逐茎余极限，β 是 α 的左伴随，
由表示 P1 -> P0 -> F 与 k~_U 的右正合性计算
"""

import logging
from typing import Dict, Optional

from ..common.errors import IndSheafError, InfiniteColimitError, NotRepresentableError, UnsupportedShapeError
from ..linalg import from_columns, identity, zero_map
from ..space import (
    LINE, CellSet, FinitePoset, chart_bounds, compact_core, relatively_compact_opens, star, up_closure,
)
from ..sheaf import (
    Sheaf, SheafMorphism, assemble, build_morphism, chart_cells, cokernel, constant_on, constant_sheaf,
    direct_sum_many, identity_morphism, natural_map, presentation, tensor_morphisms,
)
from .colim import ColimSpace, shift_tail_rank
from .objects import DEFAULT_TRUNCATION, FiniteDiagram, IndMorphism, IndObject, SeqSystem

logger = logging.getLogger('IndCat')

# ι 在直线上的穷竭区间 (-1-n, 1+n)
IOTA_LO, IOTA_HI = -1, 1

# 超过这个数目的相对紧开集族只保留最大元
FAMILY_LIMIT = 32


def iota(F: Sheaf, name: Optional[str] = None) -> IndObject:
    """
    ι F = "lim"_{U ⊂⊂ X} F_U
    偏序集上是单对象图表；直线上是 F ⊗ k_{(-1-n, 1+n)} 的穷竭系统
    """
    name = name or "iota"
    if F.space.is_line:
        X = SeqSystem.exhausting(F, IOTA_LO, IOTA_HI, 1, name)
    else:
        X = FiniteDiagram.single(F, name)
    X.iota_of = F
    return X


def iota_morphism(phi: SheafMorphism, source: Optional[IndObject] = None,
                  target: Optional[IndObject] = None) -> IndMorphism:
    """ι phi；结果记住底层层态射，核与余核据此仍落在 ι 的像中"""
    source = source or iota(phi.source)
    target = target or iota(phi.target)
    if phi.space.is_line:
        a, b = source.cert, target.cert
        if a is None or b is None or a.rule != "exhaust" or b.rule != "exhaust" \
                or (a.lo, a.hi, a.step) != (b.lo, b.hi, b.step):
            raise UnsupportedShapeError("iota of a morphism needs two iota images with the same exhaustion")
        space, field = phi.space, phi.field
        m = IndMorphism(source, target, lambda n: tensor_morphisms(
            phi, identity_morphism(constant_on(space, field, a.exhaust_open(n)))))
    else:
        m = IndMorphism(source, target, lambda n: phi)
    m.base = phi
    return m


# ---- α ----

def alpha(X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> Sheaf:
    """
    α("lim" X_n) = 逐茎余极限
    :raises InfiniteColimitError: 某个茎的余极限无限维
    :raises NotRepresentableError: 没有证书，无法确定余极限
    """
    cert = X.cert
    if cert is None:
        raise NotRepresentableError(f"alpha of {X.describe()} needs a certified system")
    if cert.rule == "constant":
        return X.level(cert.n0)
    if cert.rule == "exhaust":
        return cert.base
    if cert.rule == "shift":
        return _alpha_shift(X)
    return _stalkwise_colimit(X, truncation)


def _alpha_shift(X: IndObject) -> Sheaf:
    """平移系统：每个单元最终落在尾部，余极限是尾部周期合成的稳定秩上的常值层"""
    return constant_sheaf(LINE, X.field, shift_tail_rank(X))


def _stalkwise_colimit(X: IndObject, truncation: int) -> Sheaf:
    cert = X.cert
    space, field = X.space, X.field
    window = None
    if space.is_line:
        windows = [X.level(n).window for n in range(cert.n0 + 3 * cert.p + 1)]
        window = chart_bounds(min(w[0] for w in windows), max(w[1] for w in windows))
    cells = chart_cells(space, window)
    colims: Dict = {}
    for c in cells:
        cs = ColimSpace(field, lambda n, c=c: X.level(n).stalk_dim(c),
                        lambda n, c=c: X.transition(n).component(c), cert, cert.n0, truncation)
        if not cs.is_finite:
            raise InfiniteColimitError(f"the stalk colimit at {c} is infinite-dimensional")
        if not cs.is_exact:
            raise NotRepresentableError(f"the stalk colimit at {c} does not stabilise")
        colims[c] = cs
    m = max(cs.rep_level for cs in colims.values())
    stable = {c: cs.stable_subspace(m) for c, cs in colims.items()}
    top = X.level(m)

    def gen_of(a, b):
        columns = [stable[b].coordinates(top.gen(a, b).apply(v)) for v in stable[a].basis]
        if not columns:
            return zero_map(field, stable[b].dim, 0)
        return from_columns(field, stable[b].dim, columns)

    return assemble(space, field, lambda c: stable[c].dim, gen_of, window)


# ---- β 与 k~ ----

def beta_open(space, field, U: CellSet, name: Optional[str] = None) -> IndObject:
    """
    k~_U = "lim"_{V ⊂⊂ U} k_V
    偏序集上相对紧开集族有最大元 compact_core(U)，族不大时整族保留为图表；
    直线上化为 k_{compact_core(U)} 的 ι 像
    """
    name = name or "ktilde_open"
    core = compact_core(U)
    if space.is_line:
        return iota(constant_on(space, field, core), name)
    family = list(relatively_compact_opens(U)) if not core.is_empty() else []
    if not family or len(family) > FAMILY_LIMIT:
        return FiniteDiagram.single(constant_on(space, field, core), name)
    labels = tuple(f"V{i}" for i in range(len(family)))
    pairs = tuple((labels[i], labels[j]) for i, V in enumerate(family) for j, W in enumerate(family)
                  if i != j and V.issubset(W))
    index = FinitePoset(labels, pairs, name="opens")
    objects = {lab: constant_on(space, field, V) for lab, V in zip(labels, family)}
    transitions = {(labels[i], labels[j]): natural_map(space, field, family[i], family[j])
                   for i, j in ((labels.index(a), labels.index(b)) for a, b in pairs)}
    return FiniteDiagram(index, objects, transitions, name)


def beta_closed(space, field, S: CellSet, name: Optional[str] = None) -> IndObject:
    """k~_S = "lim"_{V ⊃ S} k_{cl V}；最小的开邻域是 S 的上闭包"""
    if not S.is_closed():
        raise IndSheafError("k~_S is built for closed sets")
    Z = up_closure(S).closure()
    return FiniteDiagram.single(constant_on(space, field, Z), name or "ktilde_closed")


def _into_iota(source: IndObject, target: IndObject, Z: CellSet, W: CellSet) -> IndMorphism:
    """单对象 k_Z 到 ι k_W 的典范映射：Z ∩ W 上为恒等；目标层推迟到已含 Z 的窗口"""
    space, field = source.space, source.field
    src = source.level(0)
    offset = target.onset(src.window) if space.is_line else 0

    def component(n):
        tgt = target.level(n + offset)
        return build_morphism(src, tgt, lambda c: identity(field, 1) if Z.contains(c) and W.contains(c)
                              else zero_map(field, tgt.stalk_dim(c), src.stalk_dim(c)))

    return IndMorphism(source, target, component, offset)


def tilde_to_open(space, field, U: CellSet) -> IndMorphism:
    """k~_U -> ι k_U（单态射）"""
    source = beta_open(space, field, U)
    target = iota(constant_on(space, field, U), "k_U")
    return iota_morphism(natural_map(space, field, compact_core(U), U), source, target)


def tilde_to_closed(space, field, S: CellSet) -> IndMorphism:
    """k~_S -> ι k_S（满态射）"""
    source = beta_closed(space, field, S)
    target = iota(constant_on(space, field, S), "k_S")
    Z = up_closure(S).closure()
    if not space.is_line:
        return iota_morphism(natural_map(space, field, Z, S), source, target)
    return _into_iota(source, target, Z, S)


def beta(F: Sheaf, strategy: str = "minimal", name: Optional[str] = None) -> IndObject:
    """
    β F = coker(⊕ k~_{U_r} -> ⊕ k~_{U_g})，生成元与关系来自 F 的表示
    k~_{U_c} 化为 k_{compact_core(U_c)}，关系矩阵原样作用；只在有限偏序集上构造
    :raises UnsupportedShapeError: 直线上单元的星没有相对紧的开子集，这样得到的 β F 恒为零
    """
    if F.space.is_line:
        raise UnsupportedShapeError("beta is only built on finite posets; line stars have no relatively compact core")
    pres = presentation(F, strategy)
    space, field = F.space, F.field
    gen_cores = [compact_core(star(space, c)) for c in pres.generator_cells()]
    rel_cores = [compact_core(star(space, c)) for c in pres.relation_cells()]
    P0 = direct_sum_many(space, field, [constant_on(space, field, V) for V in gen_cores])
    P1 = direct_sum_many(space, field, [constant_on(space, field, V) for V in rel_cores])
    matrix = pres.relation_matrix()

    def component(x):
        rows = [i for i, V in enumerate(gen_cores) if V.contains(x)]
        cols = [j for j, V in enumerate(rel_cores) if V.contains(x)]
        if not cols:
            return zero_map(field, len(rows), 0)
        return from_columns(field, len(rows), [tuple(matrix.entries[i][j] for i in rows) for j in cols])

    d1 = build_morphism(P1, P0, component)
    C, _ = cokernel(d1)
    logger.debug(f"beta: {len(gen_cores)} generators, {len(rel_cores)} relations")
    return FiniteDiagram.single(C, name or "beta")

