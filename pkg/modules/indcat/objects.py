#!/usr/bin/env python3
"""
Ind 对象与 Ind 态射
所有有限滤过图表先化为以最大元为值的常值链，因此下游代码只处理 ℕ 索引的系统
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..common.errors import CertificateError, IncompatibleCertificateError, IndSheafError, SpaceMismatchError
from ..space import FinitePoset, point
from ..sheaf import Sheaf, SheafMorphism, identity_morphism, translate, zero_sheaf
from .certificate import (
    MORPHISM_RULES, PeriodCert, constant_cert, joint_rule, settle, validate, validate_components,
)

logger = logging.getLogger('IndCat')

DEFAULT_TRUNCATION = 16


class IndObject(ABC):
    """形式滤过余极限 "lim" X_n"""

    space = None
    field = None
    cert: Optional[PeriodCert] = None
    name: str = "X"

    @abstractmethod
    def level(self, n: int) -> Sheaf:
        """第 n 层"""

    @abstractmethod
    def transition(self, n: int) -> SheafMorphism:
        """X_n -> X_{n+1}"""

    @property
    def is_certified(self) -> bool:
        return self.cert is not None

    @property
    def kind(self) -> str:
        return "ind"

    def transition_between(self, n: int, m: int) -> SheafMorphism:
        """X_n -> X_m，n <= m"""
        if m < n:
            raise IndSheafError(f"no transition from level {n} down to level {m}")
        result = identity_morphism(self.level(n))
        for k in range(n, m):
            result = self.transition(k).after(result)
        return result

    def is_one_object(self) -> bool:
        """从 0 层起就是常值系统"""
        return self.cert is not None and self.cert.rule == "constant" and self.cert.n0 == 0

    def stable_object(self) -> Sheaf:
        """常值证书下的代表层"""
        if self.cert is None or self.cert.rule != "constant":
            raise CertificateError("only constant systems have a stable object")
        return self.level(self.cert.n0)

    def stationary_cert(self) -> Optional[PeriodCert]:
        """
        层从某处起原样重复时的证书
        支撑有界的穷竭系统在区间盖住支撑之后就是常值系统
        """
        cert = self.cert
        if cert is None:
            return None
        if cert.is_stationary:
            return cert
        if cert.rule == "exhaust" and cert.base.has_bounded_support():
            return constant_cert(self.onset(cert.base.window))
        return None

    def footprint(self) -> Optional[Tuple[int, int]]:
        """直线上系统关心的单元窗口"""
        if not self.space.is_line:
            return None
        if self.cert is not None and self.cert.rule == "exhaust":
            return self.cert.base.window
        start = self.cert.n0 if self.cert is not None else 0
        return self.level(start).window

    def onset(self, window: Optional[Tuple[int, int]] = None) -> int:
        """
        规则开始生效、并且已越过给定窗口的层号
        :param window: 探针（另一个层或系统）的单元窗口
        """
        if self.cert is None:
            return 0
        cert = self.cert
        if not self.space.is_line or window is None or cert.rule in ("constant", "periodic", "block"):
            return cert.n0
        lo, hi = window
        if cert.rule == "exhaust":
            base_lo, base_hi = cert.base.window
            lo, hi = min(lo, base_lo), max(hi, base_hi)
            n = cert.n0
            while not (2 * (cert.lo - n * cert.step) + 1 <= lo - 2 and 2 * (cert.hi + n * cert.step) - 1 >= hi + 2):
                n += 1
            return n
        a, b = self.level(cert.n0).window
        k = 0
        if cert.units > 0:
            while a + 2 * cert.units * k <= hi + 2:
                k += 1
        else:
            while b + 2 * cert.units * k >= lo - 2:
                k += 1
        return cert.n0 + k * cert.p

    def describe(self) -> str:
        tag = self.cert.cert_id if self.cert else "uncertified"
        return f"{self.kind}[{self.name}; {tag}]"


class FiniteDiagram(IndObject):
    """
    有限滤过图表；滤过等价于存在最大元，余极限取最大元处的对象
    :param index: 指标偏序集
    :param objects: 指标 -> 层
    :param transitions: 覆盖关系 (i, j) -> 层态射
    """

    def __init__(self, index: FinitePoset, objects: Dict, transitions: Dict, name: str = "D"):
        maximal = [i for i in index.cells if not index.up_covers(i)]
        if len(maximal) != 1:
            raise IndSheafError("finite index poset is not filtered (needs a unique maximal element)")
        self.index = index
        self.objects = dict(objects)
        self.transitions = dict(transitions)
        self.top = maximal[0]
        self.name = name
        sample = self.objects[self.top]
        self.space, self.field = sample.space, sample.field
        self.cert = constant_cert(0)
        self._to_top = self._compose_to_top()

    @property
    def kind(self) -> str:
        return "diagram"

    def _compose_to_top(self) -> Dict:
        reach: Dict = {}
        for i in reversed(self.index.topological_cells()):
            here = {i: identity_morphism(self.objects[i])}
            for j in self.index.up_covers(i):
                t = self.transitions.get((i, j))
                if t is None or t.source != self.objects[i] or t.target != self.objects[j]:
                    raise IndSheafError(f"transition {i} -> {j} missing or mismatched")
                for k, m in reach[j].items():
                    candidate = m.after(t)
                    if k in here and not here[k].equals(candidate):
                        raise IndSheafError(f"diagram does not commute between {i} and {k}")
                    here[k] = candidate
            reach[i] = here
        return {i: reach[i][self.top] for i in self.index.cells}

    def to_top(self, i) -> SheafMorphism:
        return self._to_top[i]

    def level(self, n: int) -> Sheaf:
        return self.objects[self.top]

    def transition(self, n: int) -> SheafMorphism:
        return identity_morphism(self.objects[self.top])

    @classmethod
    def single(cls, F: Sheaf, name: str = "D") -> "FiniteDiagram":
        idx = point("i0")
        return cls(idx, {"i0": F}, {}, name)

    @classmethod
    def chain(cls, sheaves: Sequence[Sheaf], maps: Sequence[SheafMorphism], name: str = "D") -> "FiniteDiagram":
        cells = tuple(f"i{k}" for k in range(len(sheaves)))
        idx = FinitePoset(cells, tuple((cells[k], cells[k + 1]) for k in range(len(cells) - 1)), name="chain")
        return cls(idx, dict(zip(cells, sheaves)),
                   {(cells[k], cells[k + 1]): m for k, m in enumerate(maps)}, name)


class SeqSystem(IndObject):
    """
    ℕ 索引的层系统；层与转移按需生成并缓存（同一层号总是同一个值）
    证书在构造时验证
    """

    def __init__(self, space, field, level_fn: Callable[[int], Sheaf],
                 transition_fn: Callable[[int], SheafMorphism],
                 cert: Optional[PeriodCert] = None, name: str = "X", check: bool = True):
        self.space, self.field = space, field
        self._level_fn, self._transition_fn = level_fn, transition_fn
        self._levels: Dict[int, Sheaf] = {}
        self._transitions: Dict[int, SheafMorphism] = {}
        self.name = name
        self.cert = None
        self.prefix: Optional[Tuple[List[Sheaf], List[SheafMorphism]]] = None
        if cert is not None:
            if check:
                validate(self, cert)
            self.cert = cert

    @property
    def kind(self) -> str:
        return "system"

    def level(self, n: int) -> Sheaf:
        if n < 0:
            raise IndSheafError("level index must be non-negative")
        if n not in self._levels:
            self._levels[n] = self._level_fn(n)
        return self._levels[n]

    def transition(self, n: int) -> SheafMorphism:
        if n not in self._transitions:
            self._transitions[n] = self._transition_fn(n)
        return self._transitions[n]

    @classmethod
    def from_prefix(cls, levels: Sequence[Sheaf], transitions: Sequence[SheafMorphism],
                    cert: PeriodCert, name: str = "X") -> "SeqSystem":
        """
        由前缀与证书规则生成全部层
        :param levels: 第 0 .. n0+p-1 层
        :param transitions: 第 0 .. n0+p-1 个转移
        """
        levels, transitions = list(levels), list(transitions)
        need = cert.n0 + cert.p
        if cert.rule == "exhaust":
            need = 0
        if len(levels) < need or len(transitions) < need:
            raise CertificateError(f"prefix must contain {need} levels and transitions")
        space = levels[0].space if levels else cert.base.space
        field = levels[0].field if levels else cert.base.field
        system = None

        def level_fn(n):
            if cert.rule == "exhaust":
                return cert.exhaust_level(n)
            if n < len(levels):
                return levels[n]
            return cert.next_level(system.level(n - cert.p))

        def transition_fn(n):
            if cert.rule == "exhaust":
                return cert.exhaust_transition(n)
            if n < len(transitions):
                return transitions[n]
            return cert.next_transition(system.transition(n - cert.p))

        system = cls(space, field, level_fn, transition_fn, None, name)
        validate(system, cert)
        system.cert = cert
        system.prefix = (levels[:need], transitions[:need])
        return system

    @classmethod
    def exhausting(cls, base: Sheaf, lo: int = 0, hi: int = 0, step: int = 1, name: str = "X") -> "SeqSystem":
        cert = PeriodCert(0, 1, "exhaust", base=base, lo=lo, hi=hi, step=step)
        return cls.from_prefix([], [], cert, name)


def derive_cert(system: SeqSystem, candidates: Sequence[Optional[PeriodCert]] = ()) -> Optional[PeriodCert]:
    """
    依次验证候选证书，返回第一个成立的
    候选只能来自操作数证书的推导或构造处已知的结构；都不成立时返回 None（之后的结论带 truncated 标记）
    """
    for cand in candidates:
        if cand is None:
            continue
        try:
            validate(system, cand)
        except CertificateError as e:
            logger.debug(f"{system.name}: {cand.cert_id} rejected ({e})")
            continue
        return settle(system, cand)
    return None


def carried_certs(X: IndObject, level_op: Optional[Callable[[Sheaf], Sheaf]] = None,
                  window: Optional[Tuple[int, int]] = None, equivariant: bool = False) -> List[PeriodCert]:
    """
    逐层函子 Φ 作用后 Φ(X_n) 仍满足的证书
    :param level_op: Φ 在层上的作用（Φ 保持直和）；给出时分块证书的块变为 Φ(D)
    :param window: Φ(F) 只依赖 F 在该单元窗口附近的数据
    :param equivariant: Φ 与平移交换
    """
    cert = X.cert
    if cert is None:
        return []
    if cert.is_stationary:
        return [cert]
    out = []
    if cert.rule == "shift":
        if equivariant:
            out.append(cert)
        if window is not None:
            # 移动的窗口越过 Φ 的窗口之后，Φ 只看到不变的尾部
            out.append(PeriodCert(X.onset(window), cert.p, "periodic"))
    elif cert.rule == "exhaust":
        if window is not None:
            out.append(PeriodCert(X.onset(window), 1, "periodic"))
        stationary = X.stationary_cert()
        if stationary is not None:
            out.append(stationary)
    elif cert.rule == "block" and level_op is not None:
        D = level_op(cert.block)
        if D.is_zero():
            out.append(PeriodCert(cert.n0, cert.p, "periodic"))
        else:
            out.append(PeriodCert(cert.n0, cert.p, "block", block=D))
    return out


def map_levels(X: IndObject, level_op: Callable[[Sheaf], Sheaf],
               transition_op: Callable[[SheafMorphism], SheafMorphism],
               name: str = None, space=None, field=None, window: Optional[Tuple[int, int]] = None,
               equivariant: bool = False, extra: Sequence[PeriodCert] = ()) -> IndObject:
    """
    逐层作用函子，证书由 X 的证书按 Φ 的性质推出（见 carried_certs）
    :param extra: 调用处按结构给出的候选（例如穷竭公式）
    """
    name = name or X.name
    if isinstance(X, FiniteDiagram):
        return FiniteDiagram.single(level_op(X.level(0)), name)
    Y = SeqSystem(space or X.space, field or X.field,
                  lambda n: level_op(X.level(n)),
                  lambda n: transition_op(X.transition(n)), None, name)
    Y.cert = derive_cert(Y, [*extra, *carried_certs(X, level_op, window, equivariant)])
    return Y


def is_translation_invariant(G: Sheaf) -> bool:
    return G.space.is_line and translate(G, 1) == G


def repeat_rule(X: IndObject) -> Optional[PeriodCert]:
    """X 的层与转移按之重复、可供态射分量使用的规则"""
    stationary = X.stationary_cert()
    if stationary is not None:
        return stationary
    if X.cert is not None and X.cert.rule in MORPHISM_RULES:
        return X.cert
    return None


class IndMorphism:
    """
    Ind 态射：phi_n: X_n -> Y_{n+offset}，满足 t^Y ∘ phi_n = phi_{n+1} ∘ t^X
    相容性在证书窗口（或截断范围）内检查
    :param repeats: 分量从某层起按规则重复的证书；给出时先验证
    """

    def __init__(self, source: IndObject, target: IndObject, component_fn: Callable[[int], SheafMorphism],
                 offset: int = 0, truncation: int = DEFAULT_TRUNCATION, check: bool = True,
                 repeats: Optional[PeriodCert] = None):
        if source.space != target.space:
            raise SpaceMismatchError("Ind morphism between different spaces")
        self.source, self.target = source, target
        self.offset = offset
        self._component_fn = component_fn
        self._components: Dict[int, SheafMorphism] = {}
        self.truncation = truncation
        self.repeats: Optional[PeriodCert] = None
        if check:
            self.check_compatible()
        if repeats is not None:
            validate_components(self, repeats)
            self.repeats = repeats
        else:
            self.repeats = self._forced_repeats()

    def _forced_repeats(self) -> Optional[PeriodCert]:
        # 两端都是常值系统时相容性给出 phi_{n+1} = phi_n
        a, b = self.source.stationary_cert(), self.target.stationary_cert()
        if a is None or b is None or a.rule != "constant" or b.rule != "constant":
            return None
        return constant_cert(max(a.n0, b.n0 - self.offset, 0))

    def adopt(self, cert: Optional[PeriodCert]) -> bool:
        """验证通过时记下分量的重复规则"""
        if cert is None or cert.rule not in MORPHISM_RULES:
            return False
        try:
            validate_components(self, cert)
        except CertificateError as e:
            logger.debug(f"component rule {cert.cert_id} rejected ({e})")
            return False
        self.repeats = cert
        return True

    def horizon(self) -> int:
        ends = [0]
        for X in (self.source, self.target):
            if X.cert is not None:
                ends.append(X.cert.n0 + 2 * X.cert.p)
        if self.source.cert is None or self.target.cert is None:
            ends.append(min(self.truncation, 6))
        return max(ends)

    def component(self, n: int) -> SheafMorphism:
        if n not in self._components:
            phi = self._component_fn(n)
            if phi.source != self.source.level(n) or phi.target != self.target.level(n + self.offset):
                raise IndSheafError(f"component {n} has the wrong source or target")
            self._components[n] = phi
        return self._components[n]

    def check_compatible(self) -> None:
        for n in range(self.horizon() + 1):
            left = self.target.transition(n + self.offset).after(self.component(n))
            right = self.component(n + 1).after(self.source.transition(n))
            if not left.equals(right):
                raise IndSheafError(f"Ind morphism is not compatible with transitions at level {n}")

    def to_level(self, n: int, m: int) -> SheafMorphism:
        """X_n -> Y_m，m >= n + offset"""
        return self.target.transition_between(n + self.offset, m).after(self.component(n))

    def after(self, first: "IndMorphism") -> "IndMorphism":
        """self∘first"""
        if first.target is not self.source:
            raise IndSheafError("Ind morphisms are not composable")
        composite = IndMorphism(first.source, self.target,
                                lambda n: self.component(n + first.offset).after(first.component(n)),
                                first.offset + self.offset, self.truncation, check=False)
        if first.repeats is not None and self.repeats is not None:
            composite.repeats = joint_rule(first.repeats, self.repeats,
                                           max(first.repeats.n0, self.repeats.n0 - first.offset))
        return composite

    def reindexed(self, offset: int) -> "IndMorphism":
        if offset < self.offset:
            raise IndSheafError("reindexing can only postpone the target level")
        later = IndMorphism(self.source, self.target, lambda n: self.to_level(n, n + offset),
                            offset, self.truncation, check=False)
        rule = repeat_rule(self.target)
        if self.repeats is not None and rule is not None:
            later.repeats = joint_rule(self.repeats, rule, max(self.repeats.n0, rule.n0 - self.offset))
        return later

    def equals(self, other: "IndMorphism") -> bool:
        """细化判据：在某个更晚的目标层上两者一致"""
        if self.source is not other.source or self.target is not other.target:
            return False
        for n in range(self.horizon() + 1):
            start = n + max(self.offset, other.offset)
            if not any(self.to_level(n, m).equals(other.to_level(n, m))
                       for m in range(start, start + self.truncation + 1)):
                return False
        return True

    @classmethod
    def identity(cls, X: IndObject) -> "IndMorphism":
        return cls(X, X, lambda n: identity_morphism(X.level(n)), 0, check=False, repeats=repeat_rule(X))

    @classmethod
    def from_sheaf_morphism(cls, source: IndObject, target: IndObject, phi: SheafMorphism) -> "IndMorphism":
        """两个常值系统之间由单个层态射给出的态射"""
        return cls(source, target, lambda n: phi)


def zero_object(space, field) -> FiniteDiagram:
    return FiniteDiagram.single(zero_sheaf(space, field), "0")


def zipped_certs(X: IndObject, Y: IndObject, level_op: Callable[[Sheaf, Sheaf], Sheaf],
                 local: bool) -> List[PeriodCert]:
    """op(X_n, Y_n) 由两个操作数的证书推出的候选证书"""
    sx, sy = X.stationary_cert(), Y.stationary_cert()
    if sx is not None and sy is not None:
        return [joint_rule(sx, sy, max(sx.n0, sy.n0))]
    out = []
    if X.cert is not None and Y.cert is not None and X.cert.rule == Y.cert.rule == "shift":
        period = math.lcm(X.cert.p, Y.cert.p)
        ux, uy = X.cert.units * period // X.cert.p, Y.cert.units * period // Y.cert.p
        if ux == uy:
            out.append(PeriodCert(max(X.cert.n0, Y.cert.n0), period, "shift", units=ux))
    for still, other, G_first in ((sx, Y, True), (sy, X, False)):
        if still is None or still.rule != "constant" or other.cert is None:
            continue
        # 常值一侧从 still.n0 起固定为 G，组合退化为对另一侧逐层作用 op(·, G)
        G = (X if G_first else Y).level(still.n0)
        op = (lambda F, G=G: level_op(G, F)) if G_first else (lambda F, G=G: level_op(F, G))
        window = G.window if local and G.space.is_line and G.has_bounded_support() else None
        for cert in carried_certs(other, op, window, is_translation_invariant(G)):
            out.append(cert if cert.rule == "exhaust" else cert.starting_at(still.n0))
    return out


def zip_levels(X: IndObject, Y: IndObject, level_op: Callable[[Sheaf, Sheaf], Sheaf],
               transition_op: Callable[[SheafMorphism, SheafMorphism], SheafMorphism],
               name: str, local: bool = False, extra_candidates: Sequence[PeriodCert] = ()) -> IndObject:
    """
    两个系统沿对角链逐层组合：第 n 层为 op(X_n, Y_n)
    :param local: op(F, G) 只依赖 F 在 G 的支撑附近的数据（⊗、Hom）
    双方都有证书而推导不出新证书时拒绝（证书不相容）
    """
    if X.space != Y.space:
        raise SpaceMismatchError("ind-objects live on different spaces")
    if isinstance(X, FiniteDiagram) and isinstance(Y, FiniteDiagram):
        return FiniteDiagram.single(level_op(X.level(0), Y.level(0)), name)
    Z = SeqSystem(X.space, X.field, lambda n: level_op(X.level(n), Y.level(n)),
                  lambda n: transition_op(X.transition(n), Y.transition(n)), None, name)
    Z.cert = derive_cert(Z, [*extra_candidates, *zipped_certs(X, Y, level_op, local)])
    if Z.cert is None and X.cert is not None and Y.cert is not None:
        raise IncompatibleCertificateError(
            f"certificates {X.cert.cert_id} and {Y.cert.cert_id} do not combine")
    return Z
