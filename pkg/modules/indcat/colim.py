#!/usr/bin/env python3
"""
余极限空间与 Hom
Hom(Y, "lim" X_n) = colim_n Hom(Y, X_n)；有证书时维数（含 ∞）精确，否则带截断标记
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..common.errors import IndSheafError, SpaceMismatchError
from ..linalg import LinearMap, Subspace, compose, from_columns, identity, image, rank, zero_map
from ..sheaf import HomSpace, Sheaf, hom_space, identity_morphism, image as sheaf_image, zero_sheaf
from .certificate import PeriodCert
from .objects import DEFAULT_TRUNCATION, IndObject

logger = logging.getLogger('IndCat')

INF = math.inf

EXACT = "exact"


def truncated_tag(n: int) -> str:
    return f"truncated@{n}"


def format_dim(dim) -> str:
    return "inf" if dim == INF else str(dim)


@dataclass(frozen=True)
class Verdict:
    """布尔判定及其可信度标记"""

    value: bool
    tag: str
    detail: str = ""
    witness: object = None

    @property
    def is_truncated(self) -> bool:
        return self.tag.startswith("truncated")

    def text(self) -> str:
        word = "true" if self.value else "false"
        return f"{word} [{self.tag}]" + (f" {self.detail}" if self.detail else "")


class ColimSpace:
    """
    有限维空间的序列系统 V_n 与转移 t_n
    :param dim_fn: n -> dim V_n
    :param map_fn: n -> t_n: V_n -> V_{n+1}
    :param cert: 系统继承的周期证书（None 表示无证书）
    :param start: 开始取样的层号（探针已被越过之后）
    """

    def __init__(self, field, dim_fn: Callable[[int], int], map_fn: Callable[[int], LinearMap],
                 cert: Optional[PeriodCert], start: int = 0, truncation: int = DEFAULT_TRUNCATION):
        self.field = field
        self._dim_fn, self._map_fn = dim_fn, map_fn
        self._maps: Dict[int, LinearMap] = {}
        self.cert = cert
        self.start = start
        self.truncation = truncation
        self.ranks: List[int] = []
        self._analyse()

    def level_dim(self, n: int) -> int:
        return self._dim_fn(n)

    def map(self, n: int) -> LinearMap:
        if n not in self._maps:
            self._maps[n] = self._map_fn(n)
        return self._maps[n]

    def composite(self, n: int, m: int) -> LinearMap:
        """V_n -> V_m"""
        result = identity(self.field, self.level_dim(n))
        for k in range(n, m):
            result = compose(self.map(k), result)
        return result

    def stable_rank(self, n: int) -> Tuple[int, int]:
        """
        V_n 在余极限中的像的维数 lim_k rank(V_n -> V_{n+kp})，以及达到它的周期数 k
        秩单调不增；按周期自相似的系统一旦相邻两次相等就不再变化
        """
        p = self.cert.p
        current = self.composite(n, n + p)
        r, k = rank(current), 1
        while True:
            current = compose(self.composite(n + k * p, n + (k + 1) * p), current)
            nxt = rank(current)
            if nxt == r:
                return r, k
            r, k = nxt, k + 1

    def _analyse(self) -> None:
        if self.cert is not None:
            p, s = self.cert.p, self.start
            found = [self.stable_rank(s + j * p) for j in range(3)]
            self.ranks = [r for r, _ in found]
            self.stable_level = s
            self.depth = (max(k for _, k in found) + 1) * p
            self.rep_level = s + self.depth + 2 * p
            r0, r1, r2 = self.ranks
            if r0 == r1 == r2:
                self.dim, self.tag = r0, EXACT
                return
            if self.cert.rule == "block" and r1 - r0 == r2 - r1 > 0:
                self.dim, self.tag = INF, f"certified:{self.cert.cert_id}"
                return
            logger.debug(f"stable ranks {self.ranks} do not follow {self.cert.cert_id}")
        h = self.truncation
        self.stable_level, self.rep_level = self.start + h // 2, self.start + h
        self.depth = h // 2
        self.dim = rank(self.composite(self.stable_level, self.rep_level))
        self.tag = truncated_tag(h)

    @property
    def is_finite(self) -> bool:
        return self.dim != INF

    @property
    def is_exact(self) -> bool:
        return self.tag == EXACT

    def stable_subspace(self, m: Optional[int] = None) -> Subspace:
        """余极限的代表：V_k 在 V_m 中的像"""
        if not self.is_finite:
            raise IndSheafError("an infinite colimit has no finite basis")
        m = self.rep_level if m is None else m
        return image(self.composite(self.stable_level, m))

    def class_coordinates(self, n: int, vector: Sequence, m: Optional[int] = None) -> Tuple:
        """V_n 中向量的类在稳定基下的坐标；需要 m >= n + depth"""
        m = self.rep_level if m is None else m
        pushed = self.composite(n, m).apply(vector)
        coords = self.stable_subspace(m).coordinates(pushed)
        if coords is None:
            raise IndSheafError(f"level {n} is beyond the stable range of this colimit")
        return coords

    def dim_text(self) -> str:
        return f"{format_dim(self.dim)} [{self.tag}]"


class HomColim(ColimSpace):
    """colim_n Hom(Y, X_n)，保留每层的 HomSpace 以便取代表态射"""

    def __init__(self, source: Sheaf, X: IndObject, truncation: int = DEFAULT_TRUNCATION):
        if source.space != X.space:
            raise SpaceMismatchError("sheaf and ind-object live on different spaces")
        self.source, self.X = source, X
        self._homs: Dict[int, HomSpace] = {}
        start = X.onset(source.window) if X.space.is_line else (X.cert.n0 if X.cert else 0)
        super().__init__(source.field, lambda n: self.hom(n).dim, self._post_compose, X.cert, start, truncation)

    def hom(self, n: int) -> HomSpace:
        if n not in self._homs:
            self._homs[n] = hom_space(self.source, self.X.level(n))
        return self._homs[n]

    def _post_compose(self, n: int) -> LinearMap:
        here, there = self.hom(n), self.hom(n + 1)
        t = self.X.transition(n)
        columns = [there.coordinates(t.after(phi)) for phi in here.basis_morphisms()]
        if not columns:
            return zero_map(self.field, there.dim, 0)
        return from_columns(self.field, there.dim, columns)


def hom_from_sheaf(Y: Sheaf, X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> HomColim:
    """Hom(Y, X) = colim_n Hom(Y, X_n)"""
    return HomColim(Y, X, truncation)


class TowerLimit:
    """lim_i colim_j Hom(X_i, Y_j) 的维数判定"""

    def __init__(self, dim, tag: str, pieces: Sequence[ColimSpace] = ()):
        self.dim, self.tag = dim, tag
        self.pieces = list(pieces)

    @property
    def is_finite(self) -> bool:
        return self.dim != INF

    @property
    def is_exact(self) -> bool:
        return self.tag == EXACT

    def dim_text(self) -> str:
        return f"{format_dim(self.dim)} [{self.tag}]"


def _footprint_hull(*objects: IndObject) -> Optional[Tuple[int, int]]:
    windows = [w for w in (X.footprint() for X in objects) if w is not None]
    if not windows:
        return None
    return min(w[0] for w in windows), max(w[1] for w in windows)


def _chain(maps: Sequence[LinearMap], field, dim: int) -> LinearMap:
    """maps[0] ∘ maps[1] ∘ ... ；空序列给出恒等"""
    result = identity(field, dim)
    for m in maps:
        result = compose(result, m)
    return result


def hom_ind(X: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION):
    """
    Hom_Ind(X, Y) = lim_i colim_j Hom(X_i, Y_j)
    常值源直接化为 hom_from_sheaf；序列源取 W_i = colim_j Hom(X_i, Y_j)，
    比较 W_{a+kp} -> W_a 与 W_{a+(k+1)p} -> W_{a+p} 的稳定秩
    """
    if X.space != Y.space:
        raise SpaceMismatchError("Hom between ind-objects on different spaces")
    if X.cert is not None and X.cert.rule == "constant":
        return hom_from_sheaf(X.stable_object(), Y, truncation)
    p = X.cert.p if X.cert is not None else 1
    a = X.onset(_footprint_hull(X, Y)) if X.cert is not None else truncation // 2
    pieces = [hom_from_sheaf(X.level(a + j * p), Y, truncation) for j in range(2)]
    if any(not c.is_finite for c in pieces):
        settled = X.cert is not None and all(not c.is_finite for c in pieces)
        return TowerLimit(INF, pieces[-1].tag if settled else truncated_tag(truncation), pieces)
    # 秩链每次下降至少 1，走 dim + 1 步后必然稳定
    reach = max(c.dim for c in pieces) + 2
    pieces += [hom_from_sheaf(X.level(a + j * p), Y, truncation) for j in range(2, reach + 1)]
    if any(not c.is_finite for c in pieces):
        return TowerLimit(INF, truncated_tag(truncation), pieces)
    m = max(c.stable_level for c in pieces) + max(c.depth for c in pieces) + p
    stable = [c.stable_subspace(m) for c in pieces]
    homs = [c.hom(m) for c in pieces]
    maps = []
    for j in range(reach):
        precompose = X.transition_between(a + j * p, a + (j + 1) * p)
        columns = []
        for b in stable[j + 1].basis:
            psi = homs[j + 1].morphism(b)
            coords = stable[j].coordinates(homs[j].coordinates(psi.after(precompose)))
            if coords is None:
                raise IndSheafError("restricted class left the stable colimit range")
            columns.append(coords)
        maps.append(from_columns(X.field, stable[j].dim, columns) if columns
                    else zero_map(X.field, stable[j].dim, 0))
    s0 = rank(_chain(maps[0:reach - 1], X.field, stable[0].dim))
    s1 = rank(_chain(maps[1:reach], X.field, stable[1].dim))
    certified = X.cert is not None and all(c.is_exact for c in pieces)
    if certified and s0 == s1:
        return TowerLimit(s1, EXACT, pieces)
    if certified and X.cert.rule == "block" and s1 > s0:
        return TowerLimit(INF, f"certified:{X.cert.cert_id}", pieces)
    return TowerLimit(s1, truncated_tag(truncation), pieces)


def _max_stalk(F: Sheaf) -> int:
    return max((d for _, d in F.stalks), default=0)


def stable_rank_of(step: LinearMap) -> int:
    """自映射幂的稳定秩"""
    power = identity(step.field, step.domain_dim)
    for _ in range(step.domain_dim):
        power = compose(step, power)
    return rank(power)


def shift_tail_rank(X: IndObject) -> int:
    """平移系统：每个单元最终落入尾部，尾部一个周期的合成的稳定秩"""
    cert = X.cert
    windows = [X.level(n).window for n in range(cert.n0, cert.n0 + cert.p + 1)]
    c = min(w[0] for w in windows) - 2 if cert.units > 0 else max(w[1] for w in windows) + 2
    return stable_rank_of(X.transition_between(cert.n0, cert.n0 + cert.p).component(c))


def level_dies(X: IndObject, i: int, truncation: int = DEFAULT_TRUNCATION) -> Optional[bool]:
    """
    X_i 在某个 X_j 中的像是否为零
    返回 True/False 为由证书推出的结论，None 表示截断范围内没有找到零且无法断定
    """
    cert = X.cert
    if cert is not None and cert.is_stationary:
        s = max(i, cert.n0)
        # 周期合成在每个茎上是自映射，幂次超过茎的维数后像不再缩小
        depth = 0 if cert.rule == "constant" else _max_stalk(X.level(s))
        return X.transition_between(i, s + depth * cert.p).is_zero()
    if cert is not None and cert.rule == "exhaust":
        # 穷竭系统的转移都是单的
        return X.level(i).is_zero()
    if cert is not None and cert.rule == "block" and i >= cert.n0 + cert.p:
        return False
    composite = identity_morphism(X.level(i))
    for j in range(i, i + truncation):
        if composite.is_zero():
            return True
        composite = X.transition(j).after(composite)
    if composite.is_zero():
        return True
    if cert is not None and cert.rule == "shift":
        s = max(i, cert.n0)
        if not X.transition_between(i, s).is_zero() \
                and all(X.transition(k).is_mono() for k in range(s, s + cert.p)):
            return False
        far = X.transition_between(i, s + _max_stalk(X.level(s)) * cert.p)
        lo, hi = far.window
        # 尾部分量按周期重复，稳定后非零就永远非零
        if not (far.component(lo).is_zero() and far.component(hi).is_zero()):
            return False
    return None


def is_ind_zero(X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> Verdict:
    """
    对每个 i 存在 j >= i 使 X_i -> X_j 为零
    有证书时检查 0..n0+p，其余层号由规则推出
    """
    cert = X.cert
    if cert is not None and cert.rule == "block":
        return Verdict(False, EXACT, f"level {cert.n0 + cert.p} carries the repeated block")
    if cert is not None and cert.is_stationary:
        for i in range(cert.n0, cert.n0 + cert.p):
            if not level_dies(X, i, truncation):
                return Verdict(False, EXACT, f"level {i} survives forever")
        depth = 0 if cert.rule == "constant" else _max_stalk(X.level(cert.n0))
        # n0 之前的层：X_i -> X_{n0+depth*p} 从后往前累积
        reach = X.transition_between(cert.n0, cert.n0 + depth * cert.p)
        for i in reversed(range(cert.n0)):
            reach = reach.after(X.transition(i))
            if not reach.is_zero():
                return Verdict(False, EXACT, f"level {i} survives forever")
        return Verdict(True, EXACT)
    last = (cert.n0 + cert.p) if cert is not None else truncation // 2
    for i in range(last + 1):
        dies = level_dies(X, i, truncation)
        if dies is False:
            return Verdict(False, EXACT, f"level {i} survives forever")
        if dies is None:
            return Verdict(False, truncated_tag(truncation), f"level {i} survives to {i + truncation}")
    if cert is None:
        return Verdict(True, truncated_tag(truncation))
    return Verdict(True, EXACT)


def representable(X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> Verdict:
    """
    是否同构于某个层的 ι 像；witness 为代表层
    周期系统的余极限是周期合成的稳定像；分块系统的块永不消失，不可表示
    """
    cert = X.cert
    if cert is None:
        for n in range(truncation + 1):
            if all(X.transition(k).is_iso() for k in range(n, truncation)):
                return Verdict(True, truncated_tag(truncation), f"stable from level {n}", X.level(n))
        return Verdict(False, truncated_tag(truncation))
    if cert.rule == "exhaust":
        return Verdict(True, EXACT, "iota image", cert.base)
    if cert.rule == "constant":
        return Verdict(True, EXACT, f"stable from level {cert.n0}", X.level(cert.n0))
    if cert.rule == "periodic":
        step = X.transition_between(cert.n0, cert.n0 + cert.p)
        power = identity_morphism(step.source)
        for _ in range(_max_stalk(step.source)):
            power = step.after(power)
        return Verdict(True, EXACT, f"stable image of the period from level {cert.n0}", sheaf_image(power)[0])
    if all(X.transition(k).is_iso() for k in range(cert.n0, cert.n0 + cert.p)):
        return Verdict(True, EXACT, f"stable from level {cert.n0}", X.level(cert.n0))
    zero = is_ind_zero(X, truncation)
    if zero.value and not zero.is_truncated:
        return Verdict(True, EXACT, "ind-zero", zero_sheaf(X.space, X.field))
    if cert.rule == "block":
        return Verdict(False, EXACT, f"the block of {cert.cert_id} never stabilises")
    if cert.rule == "shift" and shift_tail_rank(X) == 0 and not zero.is_truncated:
        # 可表示的系统同构于 ι(α X)；α X = 0 而系统非零
        return Verdict(False, EXACT, "alpha vanishes on a nonzero system")
    return Verdict(False, truncated_tag(truncation), f"transitions are not isomorphisms under {cert.cert_id}")
