#!/usr/bin/env python3
"""
六运算的可检验陈述
伴随、投影公式、基变换与比较映射都化为对探针族 {k_U} 的 Hom 维数比较，报告逐探针一行
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..common.errors import UnsupportedShapeError
from ..indcat import (
    DEFAULT_TRUNCATION, EXACT, FiniteDiagram, IndMorphism, IndObject, Verdict, alpha, beta, cokernel_ind,
    format_dim, hom_from_sheaf, hom_ind, iota, is_ind_zero, kernel_ind,
)
from ..space import CellMap, CellSet, cell_name, fiber_square, relatively_compact_opens, star, whole
from ..sheaf import (
    Sheaf, constant_on, direct_image, direct_image_morphism, hom_sheaf, hom_space, identity_morphism,
    proper_direct_image, proper_to_direct, support_map,
)
from .functors import (
    _iota_interval, direct_image_ind, ihom_ind, inverse_image_ind, proper_direct_image_ind, tensor_ind,
)

logger = logging.getLogger('SixOps')

OPEN_LIMIT = 64


@dataclass(frozen=True)
class DimLine:
    at: str
    lhs: object
    rhs: object

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def text(self) -> str:
        verdict = "ok" if self.ok else "FAIL"
        return f"at {self.at} lhs={format_dim(self.lhs)} rhs={format_dim(self.rhs)} {verdict}"


@dataclass
class CheckReport:
    """
    检查结果：逐探针的两侧维数
    :param label: 被检查的陈述（标准形式）
    """

    name: str
    label: str
    lines: List[DimLine] = field(default_factory=list)
    tag: str = EXACT

    @property
    def passed(self) -> bool:
        return all(line.ok for line in self.lines)

    @property
    def witness(self) -> Optional[DimLine]:
        return next((line for line in self.lines if not line.ok), None)

    def text(self) -> str:
        head = f"check {self.name}: {self.label} [{self.tag}] {'pass' if self.passed else 'fail'}"
        return "\n".join([head] + ["  " + line.text() for line in self.lines])


def generator_opens(space) -> List[CellSet]:
    """探针族：有限偏序集的全部开集（超过上限时只取最小开邻域）"""
    if space.is_line:
        raise UnsupportedShapeError("generator opens are enumerated on finite posets")
    opens = list(relatively_compact_opens(whole(space)))
    if len(opens) > OPEN_LIMIT:
        opens = [star(space, c) for c in space.cells]
    return opens


def _dims_on(X: IndObject, opens: Sequence[CellSet], truncation: int) -> List:
    out = []
    for U in opens:
        cs = hom_from_sheaf(constant_on(X.space, X.field, U), X, truncation)
        out.append(cs.dim)
    return out


def compare_on_opens(name: str, label: str, lhs: IndObject, rhs: IndObject,
                      truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """两侧对每个探针 k_U 的 Hom 维数"""
    opens = generator_opens(lhs.space)
    left, right = _dims_on(lhs, opens, truncation), _dims_on(rhs, opens, truncation)
    report = CheckReport(name, label)
    for U, a, b in zip(opens, left, right):
        report.lines.append(DimLine(U.describe(), a, b))
    logger.debug(f"{name}: {'pass' if report.passed else 'fail'}")
    return report


def _single_line(name: str, label: str, at: str, lhs, rhs, tag: str = EXACT) -> CheckReport:
    return CheckReport(name, label, [DimLine(at, lhs, rhs)], tag)


def _worst_tag(*results) -> str:
    return next((r.tag for r in results if r.tag != EXACT), EXACT)


# ---- 伴随 ----

def check_tensor_ihom(X: IndObject, K: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """Hom(X ⊗ K, Y) = Hom(X, ihom(K, Y))"""
    lhs = hom_ind(tensor_ind(X, K, truncation), Y, truncation)
    rhs = hom_ind(X, ihom_ind(K, Y, truncation), truncation)
    return _single_line("tensor-ihom", "Hom(X*K, Y) = Hom(X, ihom(K, Y))", "global",
                        lhs.dim, rhs.dim, _worst_tag(lhs, rhs))


def check_inverse_direct(f: CellMap, G: IndObject, F: IndObject, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """Hom(f^{-1} G, F) = Hom(G, f_* F)"""
    lhs = hom_ind(inverse_image_ind(f, G, truncation), F, truncation)
    rhs = hom_ind(G, direct_image_ind(f, F, truncation), truncation)
    return _single_line("inverse-direct", "Hom(f^-1 G, F) = Hom(G, f_* F)", "global",
                        lhs.dim, rhs.dim, _worst_tag(lhs, rhs))


def check_alpha_iota(X: IndObject, G: Sheaf, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """Hom(α X, G) = Hom(X, ι G)"""
    lhs = hom_space(alpha(X, truncation), G).dim
    rhs = hom_ind(X, iota(G), truncation)
    return _single_line("alpha-iota", "Hom(alpha X, G) = Hom(X, iota G)", "global", lhs, rhs.dim, rhs.tag)


def check_beta_alpha(F: Sheaf, X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """Hom(β F, X) = Hom(F, α X)"""
    lhs = hom_ind(beta(F), X, truncation)
    rhs = hom_space(F, alpha(X, truncation)).dim
    return _single_line("beta-alpha", "Hom(beta F, X) = Hom(F, alpha X)", "global", lhs.dim, rhs, lhs.tag)


def check_alpha_ihom(F: Sheaf, G: Sheaf, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """α ihom(ι F, ι G) = hom(F, G)：逐单元茎维数"""
    computed = alpha(ihom_ind(iota(F), iota(G), truncation), truncation)
    direct = hom_sheaf(F, G)
    report = CheckReport("alpha-ihom", "alpha ihom(iota F, iota G) = hom(F, G)")
    cells = direct.space.cells if not direct.space.is_line else range(
        min(computed.window[0], direct.window[0]), max(computed.window[1], direct.window[1]) + 1)
    for c in cells:
        report.lines.append(DimLine(cell_name(c), computed.stalk_dim(c), direct.stalk_dim(c)))
    report.lines.append(DimLine("equal", int(computed == direct), 1))
    return report


def check_tensor_inverse(f: CellMap, X: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """f^{-1}(X ⊗ Y) = f^{-1}X ⊗ f^{-1}Y"""
    lhs = inverse_image_ind(f, tensor_ind(X, Y, truncation), truncation)
    rhs = tensor_ind(inverse_image_ind(f, X, truncation), inverse_image_ind(f, Y, truncation), truncation)
    return compare_on_opens("tensor-inverse", "f^-1(X*Y) = f^-1 X * f^-1 Y", lhs, rhs, truncation)


# ---- 投影公式与基变换 ----

def projection_formula_check(f: CellMap, X: IndObject, G: IndObject,
                             truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """标准形式 f_!!(X ⊗ f^{-1}G) = f_!!X ⊗ G"""
    if f.source.is_line or f.target.is_line:
        raise UnsupportedShapeError("projection formula checks run on finite posets")
    lhs = proper_direct_image_ind(f, tensor_ind(X, inverse_image_ind(f, G, truncation), truncation), truncation)
    rhs = tensor_ind(proper_direct_image_ind(f, X, truncation), G, truncation)
    return compare_on_opens("projection-formula", "f_!!(X * f^-1 G) = f_!! X * G (standard form)",
                             lhs, rhs, truncation)


def base_change_check(f: CellMap, g: CellMap, X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> CheckReport:
    """
    标准形式 g^{-1} f_!! X = f'_!! g'^{-1} X
    :param f: X -> Y
    :param g: Y' -> Y；方块由纤维积构造
    """
    _, f_prime, g_prime = fiber_square(f, g)
    lhs = inverse_image_ind(g, proper_direct_image_ind(f, X, truncation), truncation)
    rhs = proper_direct_image_ind(f_prime, inverse_image_ind(g_prime, X, truncation), truncation)
    return compare_on_opens("base-change", "g^-1 f_!! X = f'_!! g'^-1 X (standard form)", lhs, rhs, truncation)


# ---- 比较映射 ----

def _is_iso(phi: IndMorphism, truncation: int) -> Verdict:
    K, _ = kernel_ind(phi, truncation)
    C, _ = cokernel_ind(phi, truncation)
    k, c = is_ind_zero(K, truncation), is_ind_zero(C, truncation)
    if not k.value:
        return Verdict(False, k.tag, "kernel survives")
    if not c.value:
        return Verdict(False, c.tag, "cokernel survives")
    return Verdict(True, _worst_tag(k, c))


def comparison_map(f: CellMap, F: Sheaf, to_direct: bool = False,
                   truncation: int = DEFAULT_TRUNCATION) -> IndMorphism:
    """
    f_!! ι F -> ι f_! F（to_direct 时为 -> ι f_* F）
    第 n 层由 F_{U_n} -> F 诱导；直线上 U_n 是 ι 的穷竭区间
    """
    source = proper_direct_image_ind(f, iota(F), truncation)
    target_sheaf = direct_image(f, F) if to_direct else proper_direct_image(f, F)
    target = FiniteDiagram.single(target_sheaf, "iota f F") if not f.target.is_line else iota(target_sheaf)
    if not f.source.is_line:
        phi = proper_to_direct(f, F) if to_direct else identity_morphism(proper_direct_image(f, F))
        return IndMorphism(source, target, lambda n: phi, 0, truncation)
    space = F.space

    def component(n):
        inclusion = support_map(F, _iota_interval(n), whole(space))
        step = direct_image_morphism(f, inclusion, proper=True)
        if to_direct:
            step = proper_to_direct(f, F).after(step)
        return step

    return IndMorphism(source, target, component, 0, truncation)


def comparison_check(f: CellMap, F: Sheaf, to_direct: bool = False,
                     truncation: int = DEFAULT_TRUNCATION) -> Verdict:
    """
    比较映射是否为同构；不是时 detail 给出存活的核或余核
    to_direct 时检查的是 f_!! ι F -> ι f_* F，不是 f_!! ι F -> ι f_! F：
    直线到点时 f_! F 在 0 次上为 0，后者只是 0 -> 0
    """
    phi = comparison_map(f, F, to_direct, truncation)
    return _is_iso(phi, truncation)


# ---- 忠实性片段 ----

def nonzero_stalk_witness(phi: IndMorphism, truncation: int = DEFAULT_TRUNCATION) -> Optional[object]:
    """
    非零 Ind 态射在某个单元上有非零分量：返回该单元；态射为零时返回 None
    """
    for n in range(phi.horizon() + 1):
        m = n + phi.offset + truncation
        late = phi.to_level(n, m)
        if late.is_zero():
            continue
        for c in late.cells():
            if not late.component(c).is_zero():
                return c
    return None
