#!/usr/bin/env python3
"""
Ind 范畴的阿贝尔结构
核与余核逐层计算；正合性有两种判法（同调的 ind-零性、满态射提升），两者应给出同一结论
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..common.errors import IndSheafError
from ..space import LINE, cell_set, vertex
from ..sheaf import (
    SheafMorphism, cokernel, direct_sum, direct_sum_morphisms, factor_through_epi,
    factor_through_mono, fibre_product, kernel,
)
from .certificate import PeriodCert, joint_rule
from .colim import EXACT, Verdict, is_ind_zero, truncated_tag
from .functors import iota, iota_morphism, tilde_to_closed
from .objects import (
    DEFAULT_TRUNCATION, FiniteDiagram, IndMorphism, IndObject, SeqSystem, derive_cert, repeat_rule, zip_levels,
)

logger = logging.getLogger('IndCat')


def _iota_base(phi: IndMorphism) -> Optional[SheafMorphism]:
    """phi 是 ι 的像时返回底层层态射"""
    return getattr(phi, "base", None)


def _levelwise_rule(phi: IndMorphism, n0: int) -> Optional[PeriodCert]:
    """phi 的分量与两端的层、转移同时按一个规则重复时，从 n0 起的该规则"""
    rx, ry = repeat_rule(phi.source), repeat_rule(phi.target)
    if phi.repeats is None or rx is None or ry is None:
        return None
    ends = joint_rule(rx, ry, max(rx.n0, ry.n0 - phi.offset))
    if ends is None:
        return None
    return joint_rule(phi.repeats, ends, max(n0, phi.repeats.n0, ends.n0))


def kernel_ind(phi: IndMorphism, truncation: Optional[int] = None) -> Tuple[IndObject, IndMorphism]:
    """
    "lim" ker phi_n
    证书只在 phi 的分量与两端按同一规则重复时得到
    :return: (K, K -> source)
    """
    truncation = truncation or phi.truncation
    X, Y = phi.source, phi.target
    base = _iota_base(phi)
    if base is not None:
        K, incl = kernel(base)
        KX = iota(K, name=f"ker {X.name}")
        return KX, iota_morphism(incl, KX, X)
    cache: Dict[int, Tuple] = {}

    def ker(n):
        if n not in cache:
            cache[n] = kernel(phi.component(n))
        return cache[n]

    name = f"ker {X.name}->{Y.name}"
    rule = None
    if isinstance(X, FiniteDiagram) and isinstance(Y, FiniteDiagram):
        K = FiniteDiagram.single(ker(0)[0], name)
    else:
        K = SeqSystem(X.space, X.field, lambda n: ker(n)[0],
                      lambda n: factor_through_mono(X.transition(n).after(ker(n)[1]), ker(n + 1)[1]),
                      None, name)
        rule = _levelwise_rule(phi, 0)
        K.cert = derive_cert(K, [rule])
    incl = IndMorphism(K, X, lambda n: ker(n)[1], 0, truncation, check=False)
    if incl.repeats is None:
        incl.adopt(rule)
    return K, incl


def cokernel_ind(phi: IndMorphism, truncation: Optional[int] = None) -> Tuple[IndObject, IndMorphism]:
    """
    "lim" coker phi_n，第 n 层是 Y_{n+offset} 的商
    :return: (C, target -> C)
    """
    truncation = truncation or phi.truncation
    X, Y = phi.source, phi.target
    base = _iota_base(phi)
    if base is not None:
        C, proj = cokernel(base)
        CX = iota(C, name=f"coker {Y.name}")
        return CX, iota_morphism(proj, Y, CX)
    shift = phi.offset
    cache: Dict[int, Tuple] = {}

    def coker(n):
        if n not in cache:
            cache[n] = cokernel(phi.component(n))
        return cache[n]

    name = f"coker {X.name}->{Y.name}"
    rule = None
    if isinstance(X, FiniteDiagram) and isinstance(Y, FiniteDiagram):
        C = FiniteDiagram.single(coker(0)[0], name)
    else:
        C = SeqSystem(Y.space, Y.field, lambda n: coker(n)[0],
                      lambda n: factor_through_epi(coker(n + 1)[1].after(Y.transition(n + shift)), coker(n)[1]),
                      None, name)
        ry = repeat_rule(Y)
        rule = _levelwise_rule(phi, ry.n0 if ry is not None else 0)
        C.cert = derive_cert(C, [rule])
    proj = IndMorphism(Y, C, lambda n: coker(n)[1].after(Y.transition_between(n, n + shift)),
                       0, truncation, check=False)
    if proj.repeats is None:
        proj.adopt(rule)
    return C, proj


def direct_sum_ind(X: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """有限积 = 直和，沿对角链逐层计算"""
    extra = []
    if _same_exhaustion(X, Y):
        c = X.cert
        extra.append(PeriodCert(0, 1, "exhaust", base=direct_sum(c.base, Y.cert.base), lo=c.lo, hi=c.hi, step=c.step))
    return zip_levels(X, Y, direct_sum, direct_sum_morphisms, f"{X.name}+{Y.name}", extra_candidates=extra)


def _same_exhaustion(X: IndObject, Y: IndObject) -> bool:
    a, b = X.cert, Y.cert
    return (a is not None and b is not None and a.rule == b.rule == "exhaust"
            and (a.n0, a.lo, a.hi, a.step) == (b.n0, b.lo, b.hi, b.step))


def complex_lag(f: IndMorphism, g: IndMorphism, truncation: Optional[int] = None) -> Optional[int]:
    """
    使 g∘f 在推迟 lag 层后逐层为零的最小 lag；不是复形时返回 None
    """
    if f.target is not g.source:
        raise IndSheafError("morphisms do not form a sequence A' -> A -> A''")
    truncation = truncation or f.truncation
    horizon = max(f.horizon(), g.horizon())
    for lag in range(truncation + 1):
        if all(g.to_level(n + f.offset, n + f.offset + g.offset + lag).after(f.component(n)).is_zero()
               for n in range(horizon + 1)):
            return lag
    return None


def homology(f: IndMorphism, g: IndMorphism, truncation: Optional[int] = None) -> IndObject:
    """
    A' -f-> A -g-> A'' 在 A 处的同调 "lim" ker g_n / im f
    """
    truncation = truncation or f.truncation
    base_f, base_g = _iota_base(f), _iota_base(g)
    if base_f is not None and base_g is not None:
        K, incl = kernel(base_g)
        C, _ = cokernel(factor_through_mono(base_f, incl))
        return iota(C, name="H")
    lag = complex_lag(f, g, truncation)
    if lag is None:
        raise IndSheafError("the composite g∘f is not zero, so homology is undefined")
    K, incl = kernel_ind(g.reindexed(g.offset + lag), truncation)
    f_in_k = IndMorphism(f.source, K,
                         lambda n: factor_through_mono(f.component(n), incl.component(n + f.offset)),
                         f.offset, truncation, check=False)
    if f.repeats is not None and incl.repeats is not None:
        f_in_k.adopt(joint_rule(f.repeats, incl.repeats, max(f.repeats.n0, incl.repeats.n0 - f.offset)))
    H, _ = cokernel_ind(f_in_k, truncation)
    H.name = "H"
    return H


def _lifting(f: IndMorphism, g: IndMorphism, truncation: int) -> Verdict:
    """
    每个 i：K_i 在某个更晚的 A_m 中的像能沿 f 提升（纤维积到 K_i 的投影为满）
    K 的包含、f 与 A 的转移按同一规则重复时，检查到规则起点后一个周期即可
    """
    lag = complex_lag(f, g, truncation)
    if lag is None:
        return Verdict(False, EXACT, "not a complex")
    A = f.target
    K, incl = kernel_ind(g.reindexed(g.offset + lag), truncation)
    rule, ra = None, repeat_rule(A)
    if incl.repeats is not None and f.repeats is not None and ra is not None:
        rule = joint_rule(incl.repeats, f.repeats, max(incl.repeats.n0, f.repeats.n0 + f.offset))
        rule = joint_rule(rule, ra, max(rule.n0, ra.n0)) if rule is not None else None
    last = (rule.n0 + rule.p) if rule is not None else truncation // 2
    for i in range(last + 1):
        lifted = False
        for m in range(max(i, f.offset), max(i, f.offset) + truncation + 1):
            into = A.transition_between(i, m).after(incl.component(i))
            _, to_k, _ = fibre_product(into, f.component(m - f.offset))
            if to_k.is_epi():
                lifted = True
                break
        if not lifted:
            zero = is_ind_zero(homology(f, g, truncation), truncation)
            if not zero.value and not zero.is_truncated:
                return Verdict(False, EXACT, f"kernel at level {i} never lifts")
            return Verdict(False, truncated_tag(truncation), f"kernel at level {i} does not lift by {i + truncation}")
    if rule is None:
        return Verdict(True, truncated_tag(truncation))
    return Verdict(True, EXACT)


METHODS = ("homology", "lifting")


def is_exact(f: IndMorphism, g: IndMorphism, method: str = "homology",
             truncation: Optional[int] = None) -> Verdict:
    """
    判定 A' -> A -> A'' 在 A 处正合
    :param method: homology（同调是否 ind-零）或 lifting（满态射提升判据）
    """
    truncation = truncation or f.truncation
    if method == "lifting":
        return _lifting(f, g, truncation)
    if method != "homology":
        raise IndSheafError(f"unknown exactness method {method!r}")
    if complex_lag(f, g, truncation) is None:
        return Verdict(False, EXACT, "not a complex")
    verdict = is_ind_zero(homology(f, g, truncation), truncation)
    logger.debug(f"exactness via homology: {verdict.text()}")
    return verdict


def exactness_report(f: IndMorphism, g: IndMorphism, truncation: Optional[int] = None) -> Dict[str, Verdict]:
    """两种判法的结论；两者都有确定结论却不一致时报错"""
    verdicts = {m: is_exact(f, g, m, truncation) for m in METHODS}
    a, b = verdicts["homology"], verdicts["lifting"]
    if not a.is_truncated and not b.is_truncated and a.value != b.value:
        raise IndSheafError("exactness methods disagree")
    return verdicts


def short_exact(f: IndMorphism, g: IndMorphism, truncation: Optional[int] = None) -> Verdict:
    """0 -> A' -> A -> A'' -> 0 正合：f 单、中间正合、g 满"""
    truncation = truncation or f.truncation
    K, _ = kernel_ind(f, truncation)
    C, _ = cokernel_ind(g, truncation)
    checks = [is_ind_zero(K, truncation), is_exact(f, g, "homology", truncation), is_ind_zero(C, truncation)]
    for label, v in zip(("mono", "middle", "epi"), checks):
        if not v.value:
            return Verdict(False, v.tag, f"fails at {label}: {v.detail}".strip())
    tag = next((v.tag for v in checks if v.is_truncated), EXACT)
    return Verdict(True, tag)


@dataclass
class NaFixture:
    """0 -> N_a -> k~_{{a}} -> k_{{a}} -> 0"""

    N: IndObject
    tilde: IndObject
    target: IndObject
    inclusion: IndMorphism
    projection: IndMorphism


def n_a_fixture(a, field, space=LINE) -> NaFixture:
    """
    直线上顶点 a（或偏序集上的闭单元 a）处的 N_a
    N_a 是 k~_{{a}} -> k_{{a}} 的核；组合模型里它不为零
    """
    S = vertex(a) if space.is_line else cell_set(space, [a])
    proj = tilde_to_closed(space, field, S)
    N, incl = kernel_ind(proj)
    N.name = f"N_{a}"
    return NaFixture(N, proj.source, proj.target, incl, proj)
