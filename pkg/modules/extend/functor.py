#!/usr/bin/env python3
"""
由 Mayer-Vietoris 预层得到的 ind-对象 F⁺
F⁺ 只通过它的 Hom 函子 G ↦ Hom(G, F⁺) 出现：取 G 的表示 ⊕k_{V_j} -> ⊕k_{U_i} -> G -> 0，
求值为 ker(∏F(U_i) -> ∏F(V_j))
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..common.errors import CertificateError, IndSheafError, MVViolationError, SpaceMismatchError, UnsupportedShapeError
from ..indcat import DEFAULT_TRUNCATION, EXACT, IndObject, Verdict, format_dim, hom_from_sheaf
from ..linalg import LinearMap, Subspace, compose, from_columns, kernel, rank, solve, stack_columns, stack_rows, zero_map
from ..space import CellSet, star
from ..sheaf import Presentation, Sheaf, SheafMorphism, presentation
from .presheaf import PresheafOnT, check_mv, mv_pair, pair_label

logger = logging.getLogger('Extend')


@dataclass(frozen=True)
class Evaluation:
    """
    Hom(G, F⁺)
    :param subspace: ∏F(U_i) 中的核（只对预层求值给出）
    """

    dim: object
    tag: str
    subspace: Optional[Subspace] = None
    presentation: Optional[Presentation] = None
    opens: Tuple[CellSet, ...] = ()

    def text(self) -> str:
        return f"dim = {format_dim(self.dim)} [{self.tag}]"


class FunctorBackedInd:
    """
    F⁺：对有界支撑的层 G 求 Hom(G, F⁺)
    求值按 (G, 表示策略, 种子) 记忆；重复计算给出同一结果
    """

    def __init__(self, presheaf: Optional[PresheafOnT], space, field, name: str):
        self.presheaf = presheaf
        self.space = space
        self.field = field
        self.name = name
        self._memo: Dict[Tuple, Evaluation] = {}
        self._checked: Set[Tuple[CellSet, CellSet]] = set()

    def evaluate(self, G: Sheaf, strategy: str = "minimal", seed: int = 0) -> Evaluation:
        if G.space != self.space:
            raise SpaceMismatchError("sheaf is not on the space of the ind-object")
        key = (G, strategy, seed)
        if key not in self._memo:
            self._memo[key] = self._compute(G, strategy, seed)
        return self._memo[key]

    def dim(self, G: Sheaf, strategy: str = "minimal", seed: int = 0):
        return self.evaluate(G, strategy, seed).dim

    def describe(self) -> str:
        return f"{self.name}+ over {self.presheaf.describe()}"

    # ---- 预层求值 ----

    def _require_mv(self, opens: Sequence[CellSet]) -> None:
        distinct = list(dict.fromkeys(opens))
        for i, U in enumerate(distinct):
            for V in distinct[i + 1:]:
                if (U, V) in self._checked:
                    continue
                line = mv_pair(self.presheaf, U, V)
                if not line.ok:
                    raise MVViolationError(f"Mayer-Vietoris fails on {pair_label(U, V)}: {line.detail}",
                                           pair=(U, V))
                self._checked.add((U, V))

    def _compute(self, G: Sheaf, strategy: str, seed: int) -> Evaluation:
        F = self.presheaf
        if G.is_zero():
            return Evaluation(0, EXACT, kernel(zero_map(self.field, 0, 0)))
        pres = presentation(G, strategy, seed)
        gen_opens = [star(self.space, c) for c in pres.generator_cells()]
        rel_opens = [star(self.space, c) for c in pres.relation_cells()]
        self._require_mv(gen_opens + rel_opens)
        D = self._relation_map(pres, gen_opens, rel_opens)
        K = kernel(D)
        logger.debug(f"{self.name}+: {len(gen_opens)} generators, {len(rel_opens)} relations, dim {K.dim}")
        return Evaluation(K.dim, EXACT, K, pres, tuple(gen_opens))

    def _relation_map(self, pres: Presentation, gen_opens: List[CellSet], rel_opens: List[CellSet]) -> LinearMap:
        """∏F(U_i) -> ∏F(V_j)，分块 (j, i) = R[i][j]·(F(U_i) -> F(V_j))"""
        F, field, space = self.presheaf, self.field, self.space
        total = sum(F.dim(U) for U in gen_opens)
        R = pres.relation_matrix()
        rows = []
        for j, (V, c_rel) in enumerate(zip(rel_opens, pres.relation_cells())):
            blocks = []
            for i, (U, c_gen) in enumerate(zip(gen_opens, pres.generator_cells())):
                coefficient = R.entries[i][j]
                if space.leq(c_gen, c_rel) and not field.is_zero(coefficient):
                    blocks.append(F.restriction(U, V).scale(coefficient))
                else:
                    blocks.append(zero_map(field, F.dim(V), F.dim(U)))
            rows.append(stack_columns(field, blocks, F.dim(V)))
        return stack_rows(field, rows, total)

    def induced_map(self, psi: SheafMorphism, strategy: str = "minimal", seed: int = 0) -> LinearMap:
        """
        G -> G' 诱导 Hom(G', F⁺) -> Hom(G, F⁺)
        生成元沿 ε' 提升后，按提升系数把 F(U'_{i'}) 限制到 F(U_i)
        """
        source, target = self.evaluate(psi.source, strategy, seed), self.evaluate(psi.target, strategy, seed)
        field, F = self.field, self.presheaf
        if target.dim == 0:
            return zero_map(field, source.dim, 0)
        if source.dim == 0:
            return zero_map(field, 0, target.dim)
        pres, pres2 = source.presentation, target.presentation
        gens2 = pres2.generator_cells()
        blocks = []
        for U, (c, v) in zip(source.opens, pres.generators):
            lift = solve(pres2.epsilon.component(c), psi.component(c).apply(v))
            if lift is None:
                raise IndSheafError(f"generator at {c} does not lift through the target presentation")
            present = [k for k, c2 in enumerate(gens2) if self.space.leq(c2, c)]
            coefficient = dict(zip(present, lift))
            row = []
            for k, U2 in enumerate(target.opens):
                a = coefficient.get(k, field.zero())
                if field.is_zero(a):
                    row.append(zero_map(field, F.dim(U), F.dim(U2)))
                else:
                    row.append(F.restriction(U2, U).scale(a))
            blocks.append(stack_columns(field, row, F.dim(U)))
        L = stack_rows(field, blocks, sum(F.dim(U2) for U2 in target.opens))
        columns = []
        for b in target.subspace.basis:
            coords = source.subspace.coordinates(L.apply(b))
            if coords is None:
                raise IndSheafError("induced map leaves the evaluation kernel")
            columns.append(coords)
        return from_columns(field, source.dim, columns)


class RhoView(FunctorBackedInd):
    """ρ X：G ↦ Hom(G, X)，直接由 hom_from_sheaf 计算"""

    def __init__(self, X: IndObject, truncation: int = DEFAULT_TRUNCATION):
        super().__init__(None, X.space, X.field, f"rho({X.name})")
        self.source = X
        self.truncation = truncation

    def describe(self) -> str:
        return f"rho view of {self.source.describe()}"

    def _compute(self, G: Sheaf, strategy: str, seed: int) -> Evaluation:
        if not G.has_bounded_support():
            raise UnsupportedShapeError("rho views evaluate compactly supported sheaves; use hom_from_sheaf")
        cs = hom_from_sheaf(G, self.source, self.truncation)
        return Evaluation(cs.dim, cs.tag)

    def induced_map(self, psi: SheafMorphism, strategy: str = "minimal", seed: int = 0) -> LinearMap:
        raise UnsupportedShapeError("induced maps are computed for presheaf extensions")


def extend(F: PresheafOnT, pairs: Sequence[Tuple[CellSet, CellSet]] = (), name: Optional[str] = None) -> FunctorBackedInd:
    """
    F ↦ F⁺
    条件 (i) 和用户给出的各对立即检查；求值中出现的开集对在使用时检查
    :raises MVViolationError: 违反的开集对记在 pair 上
    """
    report = check_mv(F, pairs)
    if not report.passed:
        bad = next(line for line in report.lines if not line.ok)
        raise MVViolationError(f"{F.name} violates Mayer-Vietoris: {bad.text()}", pair=report.failing)
    Fp = FunctorBackedInd(F, F.space, F.field, name or F.name)
    Fp._checked.update((U, V) for U, V in pairs)
    return Fp


def rho_view(X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> RhoView:
    if X.cert is None:
        raise CertificateError(f"rho view of {X.describe()} needs a certified system")
    return RhoView(X, truncation)


def left_exactness(Fp: FunctorBackedInd, f: SheafMorphism, g: SheafMorphism) -> Verdict:
    """
    0 -> G' -f-> G -g-> G'' -> 0 给出 0 -> Hom(G'', F⁺) -> Hom(G, F⁺) -> Hom(G', F⁺) 正合
    """
    g_star, f_star = Fp.induced_map(g), Fp.induced_map(f)
    if rank(g_star) != g_star.domain_dim:
        return Verdict(False, EXACT, "Hom(G'', F+) -> Hom(G, F+) is not injective")
    if not compose(f_star, g_star).is_zero():
        return Verdict(False, EXACT, "not a complex")
    middle = f_star.domain_dim - rank(f_star)
    if middle != rank(g_star):
        return Verdict(False, EXACT, f"kernel {middle} against image {rank(g_star)}")
    return Verdict(True, EXACT)
