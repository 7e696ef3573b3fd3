#!/usr/bin/env python3
"""
周期证书
有限数据证明 ℕ 索引的层系统从 n0 起按固定规则重复，使余极限维数与消失性可判定
规则：
  constant  n >= n0 时层不变、转移为恒等
  periodic  第 n+p 层 = 第 n 层，第 n+p 个转移 = 第 n 个转移（转移可以不是恒等）
  shift     第 n+p 层 = 第 n 层平移 units 个单位（直线）
  block     第 n+p 层 = D ⊕ 第 n 层，转移 = id_D ⊕ 原转移，D 非零
  exhaust   第 n 层 = base ⊗ k_{(lo - n*step, hi + n*step)}（直线上的穷竭）
派生系统的证书只从操作数的证书按函子的性质推出，见 objects.carried_certs
"""

from dataclasses import dataclass, replace
from math import lcm
from typing import Optional

from ..common.errors import CertificateError
from ..space import OpenSet, open_interval
from ..sheaf import (
    Sheaf, SheafMorphism, direct_sum, direct_sum_morphisms, identity_morphism, restrict_support,
    support_map, translate, translate_morphism,
)

RULES = ("constant", "periodic", "shift", "block", "exhaust")

# 分量按规则重复的 Ind 态射只支持这些规则
MORPHISM_RULES = ("constant", "periodic", "shift")


@dataclass(frozen=True)
class PeriodCert:
    n0: int
    p: int
    rule: str
    units: int = 0
    block: Optional[Sheaf] = None
    base: Optional[Sheaf] = None
    lo: int = 0
    hi: int = 0
    step: int = 1

    def __post_init__(self):
        if self.rule not in RULES:
            raise CertificateError(f"unknown certificate rule {self.rule!r}")
        if self.n0 < 0 or self.p < 1:
            raise CertificateError("certificate needs n0 >= 0 and p >= 1")
        if self.rule == "constant" and self.p != 1:
            raise CertificateError("constant certificates have period 1")
        if self.rule == "shift" and self.units == 0:
            raise CertificateError("shift certificates need a nonzero translation")
        if self.rule == "block" and (self.block is None or self.block.is_zero()):
            raise CertificateError("block certificates need a nonzero repeated block D")
        if self.rule == "exhaust" and (self.base is None or self.step < 1 or not self.base.space.is_line):
            raise CertificateError("exhaust certificates need a base sheaf on the line and step >= 1")

    @property
    def cert_id(self) -> str:
        head = f"{self.rule}(n0={self.n0},p={self.p}"
        if self.rule == "shift":
            return head + f",units={self.units})"
        if self.rule == "block":
            return head + f",block={self.block.total_dim()})"
        if self.rule == "exhaust":
            return head + f",interval=({self.lo},{self.hi}),step={self.step})"
        return head + ")"

    @property
    def is_stationary(self) -> bool:
        """层从 n0 起按周期原样重复"""
        return self.rule in ("constant", "periodic")

    def starting_at(self, n0: int) -> "PeriodCert":
        """同一规则推迟到更晚的起点"""
        if n0 <= self.n0:
            return self
        if self.rule == "exhaust":
            raise CertificateError("exhaust certificates cannot be postponed")
        return replace(self, n0=n0)

    # ---- 按规则生成 ----

    def next_level(self, level: Sheaf) -> Sheaf:
        """由第 n 层得到第 n+p 层"""
        if self.is_stationary:
            return level
        if self.rule == "shift":
            return translate(level, self.units)
        if self.rule == "block":
            return direct_sum(self.block, level)
        raise CertificateError("exhaust levels are given by formula, not by recursion")

    def next_transition(self, t: SheafMorphism) -> SheafMorphism:
        if self.is_stationary:
            return t
        if self.rule == "shift":
            return translate_morphism(t, self.units)
        if self.rule == "block":
            return direct_sum_morphisms(identity_morphism(self.block), t)
        raise CertificateError("exhaust transitions are given by formula, not by recursion")

    def next_component(self, phi: SheafMorphism) -> SheafMorphism:
        """Ind 态射的第 n 个分量到第 n+p 个分量"""
        if self.rule not in MORPHISM_RULES:
            raise CertificateError(f"morphism components do not repeat under {self.rule} rules")
        return self.next_transition(phi)

    def exhaust_open(self, n: int) -> OpenSet:
        return open_interval(self.lo - n * self.step, self.hi + n * self.step)

    def exhaust_level(self, n: int) -> Sheaf:
        return restrict_support(self.base, self.exhaust_open(n))

    def exhaust_transition(self, n: int) -> SheafMorphism:
        return support_map(self.base, self.exhaust_open(n), self.exhaust_open(n + 1))

    def validation_range(self) -> range:
        """需要与规则比对的层：n0 .. n0+2p"""
        return range(self.n0, self.n0 + 2 * self.p + 1)


def constant_cert(n0: int = 0) -> PeriodCert:
    return PeriodCert(n0, 1, "constant")


def same_rule(a: Optional[PeriodCert], b: Optional[PeriodCert]) -> bool:
    """两个证书按同一规则、同一周期重复（起点可以不同）"""
    if a is None or b is None:
        return False
    if a.is_stationary and b.is_stationary:
        return a.p == b.p or a.rule == b.rule == "constant"
    return (a.rule, a.p, a.units) == (b.rule, b.p, b.units) and a.rule in MORPHISM_RULES


def validate(system, cert: PeriodCert) -> None:
    """
    重建 n0..n0+2p 层并与规则比对；失败时抛出 CertificateError
    :param system: 提供 level(n)、transition(n) 的序列系统
    """
    for n in cert.validation_range():
        t = system.transition(n)
        if t.source != system.level(n) or t.target != system.level(n + 1):
            raise CertificateError(f"transition {n} does not connect levels {n} and {n + 1}")
    if cert.rule == "exhaust":
        for n in cert.validation_range():
            if system.level(n) != cert.exhaust_level(n):
                raise CertificateError(f"level {n} differs from the exhaustion formula")
            if not system.transition(n).equals(cert.exhaust_transition(n)):
                raise CertificateError(f"transition {n} differs from the exhaustion formula")
        return
    if cert.rule == "constant":
        t = system.transition(cert.n0)
        if t.source != t.target or not t.equals(identity_morphism(t.source)):
            raise CertificateError(f"transition {cert.n0} is not the identity")
    for n in range(cert.n0, cert.n0 + cert.p + 1):
        if system.level(n + cert.p) != cert.next_level(system.level(n)):
            raise CertificateError(f"level {n + cert.p} does not follow the {cert.rule} rule")
        if not system.transition(n + cert.p).equals(cert.next_transition(system.transition(n))):
            raise CertificateError(f"transition {n + cert.p} does not follow the {cert.rule} rule")


def validate_components(phi, cert: PeriodCert) -> None:
    """Ind 态射的分量从 n0 起按规则重复；失败时抛出 CertificateError"""
    for n in range(cert.n0, cert.n0 + cert.p + 1):
        if not phi.component(n + cert.p).equals(cert.next_component(phi.component(n))):
            raise CertificateError(f"component {n + cert.p} does not follow the {cert.rule} rule")


def settle(system, cert: PeriodCert) -> PeriodCert:
    """周期内转移都是恒等的 periodic 证书就是 constant 证书"""
    if cert.rule != "periodic":
        return cert
    for n in range(cert.n0, cert.n0 + cert.p):
        t = system.transition(n)
        if t.source != t.target or not t.equals(identity_morphism(t.source)):
            return cert
    return constant_cert(cert.n0)


def joint_rule(a: Optional[PeriodCert], b: Optional[PeriodCert], n0: int) -> Optional[PeriodCert]:
    """两列数据分别按 a、b 重复时，二者的组合从 n0 起满足的规则"""
    if a is None or b is None:
        return None
    n0 = max(n0, 0)
    if a.is_stationary and b.is_stationary:
        if a.rule == b.rule == "constant":
            return constant_cert(n0)
        return PeriodCert(n0, lcm(a.p, b.p), "periodic")
    if same_rule(a, b):
        return PeriodCert(n0, a.p, a.rule, units=a.units)
    return None
