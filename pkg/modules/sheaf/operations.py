#!/usr/bin/env python3
"""
层上的运算
张量积、hom 层、逆像与正像、核与余核、直和、纤维积、分解与平移
所有运算逐单元计算；直线上的结果窗口取输入窗口的并
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from ..common.errors import IndSheafError, SpaceMismatchError, UnsupportedShapeError
from ..linalg import (
    LinearMap, Subspace, cokernel as linear_cokernel, compose, direct_sum as linear_sum, from_columns,
    identity, image as linear_image, kernel as linear_kernel, solve, stack_columns, stack_rows,
    tensor as linear_tensor, zero_map,
)
from ..space import (
    CellMap, CellSet, LINE, chart_bounds, preimage, star, whole,
)
from .sheaf import (
    Sheaf, SheafMorphism, assemble, build_morphism, common_chart, constant_on,
    SectionSpace, constant_sheaf, hom_kernel, identity_morphism, sections, zero_sheaf,
)

logger = logging.getLogger('Sheaf')


def _shared_window(*sheaves: Sheaf):
    return common_chart(sheaves[0].space, sheaves)


def _coords_in(basis_map: LinearMap, vector) -> Tuple:
    coords = solve(basis_map, vector)
    if coords is None:
        raise IndSheafError("vector is not in the expected subspace")
    return coords


def _matrix_from_columns(field, rows: int, columns: List) -> LinearMap:
    return from_columns(field, rows, columns) if columns else zero_map(field, rows, 0)


# ---- 张量积与 hom 层 ----

def tensor(F: Sheaf, G: Sheaf) -> Sheaf:
    """逐茎张量积，泛化映射取 Kronecker 积"""
    if F.space != G.space:
        raise SpaceMismatchError("tensor of sheaves on different spaces")
    return assemble(F.space, F.field,
                    lambda c: F.stalk_dim(c) * G.stalk_dim(c),
                    lambda a, b: linear_tensor(F.gen(a, b), G.gen(a, b)),
                    _shared_window(F, G))


def tensor_morphisms(phi: SheafMorphism, psi: SheafMorphism) -> SheafMorphism:
    source = tensor(phi.source, psi.source)
    target = tensor(phi.target, psi.target)
    return build_morphism(source, target, lambda c: linear_tensor(phi.component(c), psi.component(c)))


def hom_sheaf(F: Sheaf, G: Sheaf) -> Sheaf:
    """
    hom(F, G)：c 处的茎为 Hom(F|_{U_c}, G|_{U_c})，U_c 为最小开邻域
    泛化映射是把相容族投影到更小的邻域
    """
    if F.space != G.space:
        raise SpaceMismatchError("hom of sheaves on different spaces")
    space = F.space
    local: Dict = {}

    def neighbourhood(c) -> List:
        return space.sorted_cells(space.up_set(c))

    def local_hom(c):
        if c not in local:
            local[c] = hom_kernel(F, G, neighbourhood(c))
        return local[c]

    def gen_of(a, b):
        source, target = local_hom(a), local_hom(b)
        cells_a, cells_b = neighbourhood(a), neighbourhood(b)
        offsets, pos = {}, 0
        for c in cells_a:
            offsets[c] = pos
            pos += F.stalk_dim(c) * G.stalk_dim(c)
        columns = []
        for v in source.basis:
            projected = []
            for c in cells_b:
                size = F.stalk_dim(c) * G.stalk_dim(c)
                projected.extend(v[offsets[c]:offsets[c] + size])
            columns.append(_coords_in(target.inclusion(), projected))
        return _matrix_from_columns(F.field, target.dim, columns)

    return assemble(space, F.field, lambda c: local_hom(c).dim, gen_of, _shared_window(F, G))


# ---- 核、余核、像 ----

def kernel(phi: SheafMorphism) -> Tuple[Sheaf, SheafMorphism]:
    """逐单元核；返回 (K, K -> source)"""
    F = phi.source
    spaces = {}

    def ker_at(c):
        key = min(max(c, phi.window[0]), phi.window[1]) if F.space.is_line else c
        if key not in spaces:
            spaces[key] = linear_kernel(phi.component(c))
        return spaces[key]

    def gen_of(a, b):
        target = ker_at(b).inclusion()
        columns = [_coords_in(target, F.gen(a, b).apply(v)) for v in ker_at(a).basis]
        return _matrix_from_columns(F.field, ker_at(b).dim, columns)

    K = assemble(F.space, F.field, lambda c: ker_at(c).dim, gen_of, phi.window)
    return K, build_morphism(K, F, lambda c: ker_at(c).inclusion())


def cokernel(phi: SheafMorphism) -> Tuple[Sheaf, SheafMorphism]:
    """逐单元余核；返回 (C, target -> C)"""
    G = phi.target
    field = G.field
    data = {}

    def coker_at(c):
        key = min(max(c, phi.window[0]), phi.window[1]) if G.space.is_line else c
        if key not in data:
            q, d = linear_cokernel(phi.component(c))
            lifts = [solve(q, tuple(field.one() if i == j else field.zero() for i in range(d)))
                     for j in range(d)]
            data[key] = (q, d, _matrix_from_columns(field, q.domain_dim, lifts))
        return data[key]

    def gen_of(a, b):
        q_a, d_a, lift_a = coker_at(a)
        q_b, d_b, _ = coker_at(b)
        return compose(q_b, compose(G.gen(a, b), lift_a))

    C = assemble(G.space, field, lambda c: coker_at(c)[1], gen_of, phi.window)
    return C, build_morphism(G, C, lambda c: coker_at(c)[0])


def image(phi: SheafMorphism) -> Tuple[Sheaf, SheafMorphism]:
    """逐单元像；返回 (I, I -> target)"""
    G = phi.target
    spaces = {}

    def im_at(c):
        key = min(max(c, phi.window[0]), phi.window[1]) if G.space.is_line else c
        if key not in spaces:
            spaces[key] = linear_image(phi.component(c))
        return spaces[key]

    def gen_of(a, b):
        target = im_at(b).inclusion()
        columns = [_coords_in(target, G.gen(a, b).apply(v)) for v in im_at(a).basis]
        return _matrix_from_columns(G.field, im_at(b).dim, columns)

    I = assemble(G.space, G.field, lambda c: im_at(c).dim, gen_of, phi.window)
    return I, build_morphism(I, G, lambda c: im_at(c).inclusion())


def coimage(phi: SheafMorphism) -> Tuple[Sheaf, SheafMorphism]:
    """coker(ker phi -> source)；返回 (Q, source -> Q)"""
    _, incl = kernel(phi)
    return cokernel(incl)


def image_coimage_iso(phi: SheafMorphism) -> SheafMorphism:
    """余像到像的典范映射（在阿贝尔范畴中为同构）"""
    Q, proj = coimage(phi)
    I, incl = image(phi)
    through_image = factor_through_mono(phi, incl)
    return factor_through_epi(through_image, proj)


# ---- 直和与纤维积 ----

def direct_sum(F: Sheaf, G: Sheaf) -> Sheaf:
    if F.space != G.space:
        raise SpaceMismatchError("direct sum of sheaves on different spaces")
    return assemble(F.space, F.field,
                    lambda c: F.stalk_dim(c) + G.stalk_dim(c),
                    lambda a, b: linear_sum(F.gen(a, b), G.gen(a, b)),
                    _shared_window(F, G))


def direct_sum_many(space, field, sheaves: Sequence[Sheaf]) -> Sheaf:
    result = zero_sheaf(space, field)
    for s in sheaves:
        result = direct_sum(result, s)
    return result


def direct_sum_morphisms(phi: SheafMorphism, psi: SheafMorphism) -> SheafMorphism:
    return build_morphism(direct_sum(phi.source, psi.source), direct_sum(phi.target, psi.target),
                          lambda c: linear_sum(phi.component(c), psi.component(c)))


def column_morphism(source: Sheaf, parts: Sequence[SheafMorphism]) -> SheafMorphism:
    """(phi_1, ..., phi_n): F -> G_1 ⊕ ... ⊕ G_n"""
    field = source.field
    target = direct_sum_many(source.space, field, [p.target for p in parts])
    return build_morphism(source, target, lambda c: stack_rows(
        field, [p.component(c) for p in parts], source.stalk_dim(c)))


def row_morphism(target: Sheaf, parts: Sequence[SheafMorphism]) -> SheafMorphism:
    """[phi_1 ... phi_n]: F_1 ⊕ ... ⊕ F_n -> G"""
    field = target.field
    source = direct_sum_many(target.space, field, [p.source for p in parts])
    return build_morphism(source, target, lambda c: stack_columns(
        field, [p.component(c) for p in parts], target.stalk_dim(c)))


def injections(F: Sheaf, G: Sheaf) -> Tuple[SheafMorphism, SheafMorphism]:
    S = direct_sum(F, G)
    field = F.field

    def into(first: bool):
        def component(c):
            f, g = F.stalk_dim(c), G.stalk_dim(c)
            block = identity(field, f if first else g)
            upper = block if first else zero_map(field, f, g)
            lower = zero_map(field, g, f) if first else block
            return stack_rows(field, [upper, lower], f if first else g)
        return component

    return (build_morphism(F, S, into(True)), build_morphism(G, S, into(False)))


def projections(F: Sheaf, G: Sheaf) -> Tuple[SheafMorphism, SheafMorphism]:
    S = direct_sum(F, G)
    field = F.field

    def out_of(first: bool):
        def component(c):
            f, g = F.stalk_dim(c), G.stalk_dim(c)
            block = identity(field, f if first else g)
            left = block if first else zero_map(field, g, f)
            right = zero_map(field, f, g) if first else block
            return stack_columns(field, [left, right], f if first else g)
        return component

    return (build_morphism(S, F, out_of(True)), build_morphism(S, G, out_of(False)))


def fibre_product(phi: SheafMorphism, psi: SheafMorphism) -> Tuple[Sheaf, SheafMorphism, SheafMorphism]:
    """A ×_C B = ker([phi, -psi])；返回 (P, P -> A, P -> B)"""
    if phi.target != psi.target:
        raise IndSheafError("fibre product needs a common target")
    minus = psi.scale(phi.field.neg(phi.field.one()))
    difference = row_morphism(phi.target, [phi, minus])
    P, incl = kernel(difference)
    to_a, to_b = projections(phi.source, psi.source)
    return P, to_a.after(incl), to_b.after(incl)


# ---- 分解 ----

def factor_through_mono(phi: SheafMorphism, mono: SheafMorphism) -> SheafMorphism:
    """给定 phi: A -> C 与单态射 m: B -> C，返回 psi 使 m∘psi = phi"""
    if phi.target != mono.target:
        raise IndSheafError("factorisation needs a common target")

    def component(c):
        m = mono.component(c)
        cols = []
        for col in phi.component(c).columns():
            x = solve(m, col)
            if x is None:
                raise IndSheafError(f"image does not factor through the monomorphism at cell {c}")
            cols.append(x)
        return _matrix_from_columns(phi.field, m.domain_dim, cols)

    return build_morphism(phi.source, mono.source, component)


def factor_through_epi(phi: SheafMorphism, epi: SheafMorphism) -> SheafMorphism:
    """给定 phi: B -> C 与满态射 e: B -> A（ker e ⊆ ker phi），返回 psi 使 psi∘e = phi"""
    if phi.source != epi.source:
        raise IndSheafError("factorisation needs a common source")
    field = phi.field

    def component(c):
        e = epi.component(c)
        lifts = [solve(e, tuple(field.one() if i == j else field.zero() for i in range(e.codomain_dim)))
                 for j in range(e.codomain_dim)]
        if any(x is None for x in lifts):
            raise IndSheafError(f"map is not surjective at cell {c}")
        return compose(phi.component(c), _matrix_from_columns(field, e.domain_dim, lifts))

    psi = build_morphism(epi.target, phi.target, component)
    if not psi.after(epi).equals(phi):
        raise IndSheafError("map does not vanish on the kernel of the epimorphism")
    return psi


def natural_map(space, field, Z: CellSet, Z_prime: CellSet, d: int = 1) -> SheafMorphism:
    """k_Z -> k_Z'：两者都含的单元上为恒等，其余为 0；不自然时构造失败"""
    source = constant_on(space, field, Z, d)
    target = constant_on(space, field, Z_prime, d)

    def component(c):
        if Z.contains(c) and Z_prime.contains(c):
            return identity(field, d)
        return zero_map(field, target.stalk_dim(c), source.stalk_dim(c))

    return build_morphism(source, target, component)


# ---- 支撑的限制 ----

def restrict_support(F: Sheaf, Z: CellSet) -> Sheaf:
    """F_Z = F ⊗ k_Z，Z 局部闭"""
    return tensor(F, constant_on(F.space, F.field, Z))


def extend_by_zero(F: Sheaf, U: CellSet) -> Sheaf:
    if not U.is_open():
        raise IndSheafError("extension by zero needs an open set")
    return restrict_support(F, U)


def restrict_to_closed(F: Sheaf, S: CellSet) -> Sheaf:
    if not S.is_closed():
        raise IndSheafError("restriction to a closed set needs a closed set")
    return restrict_support(F, S)


def support_map(F: Sheaf, Z: CellSet, Z_prime: CellSet) -> SheafMorphism:
    """F_Z -> F_Z' 由 k_Z -> k_Z' 诱导"""
    return tensor_morphisms(identity_morphism(F), natural_map(F.space, F.field, Z, Z_prime))


def translate(F: Sheaf, units: int) -> Sheaf:
    """直线上的平移：新层在 c 处的茎为 F 在 c - 2*units 处的茎"""
    if not F.space.is_line:
        raise UnsupportedShapeError("only sheaves on the line can be translated")
    shift = 2 * units
    lo, hi = F.window
    return assemble(LINE, F.field, lambda c: F.stalk_dim(c - shift),
                    lambda a, b: F.gen(a - shift, b - shift), (lo + shift, hi + shift))


def translate_morphism(phi: SheafMorphism, units: int) -> SheafMorphism:
    shift = 2 * units
    return build_morphism(translate(phi.source, units), translate(phi.target, units),
                          lambda c: phi.component(c - shift))


# ---- 逆像与正像 ----

def inverse_image(f: CellMap, G: Sheaf) -> Sheaf:
    """(f^{-1}G)_c = G_{f(c)}"""
    if G.space != f.target:
        raise SpaceMismatchError("sheaf is not on the target of the map")
    field = G.field
    if f.kind == "translate":
        return translate(G, -f.units)
    if f.kind == "constant":
        return constant_sheaf(f.source, field, G.stalk_dim(f.constant_cell))
    return assemble(f.source, field, lambda c: G.stalk_dim(f(c)),
                    lambda a, b: G.transition(f(a), f(b)))


def inverse_image_morphism(f: CellMap, phi: SheafMorphism) -> SheafMorphism:
    if f.kind == "translate":
        return translate_morphism(phi, -f.units)
    source, target = inverse_image(f, phi.source), inverse_image(f, phi.target)
    return build_morphism(source, target, lambda c: phi.component(f(c)))


def _target_window(f: CellMap) -> Optional[Tuple[int, int]]:
    if not f.target.is_line:
        return None
    values = [f(c) for c in f.source.cells]
    return chart_bounds(min(values), max(values))


def _image_sheaf(f: CellMap, F: Sheaf, section_space) -> Sheaf:
    """(f_*F)_y = S(f^{-1}(U_y))，S 为给定的截面函子"""
    target = f.target
    cache = {}

    def at(y):
        if y not in cache:
            cache[y] = section_space(preimage(f, star(target, y)))
        return cache[y]

    def gen_of(a, b):
        return at(a).restriction(at(b))

    return assemble(target, F.field, lambda y: at(y).dim, gen_of, _target_window(f))


def direct_image(f: CellMap, F: Sheaf) -> Sheaf:
    """f_*F：y 处的茎为 F(f^{-1}(U_y))"""
    if F.space != f.source:
        raise SpaceMismatchError("sheaf is not on the source of the map")
    if f.kind == "translate":
        return translate(F, f.units)
    if f.kind == "constant":
        return _constant_map_image(f, F, sections(F, whole(LINE)).dim)
    return _image_sheaf(f, F, lambda U: sections(F, U))


def proper_direct_image(f: CellMap, F: Sheaf) -> Sheaf:
    """f_!F：紧支撑截面；有限源上与 f_* 相同"""
    if F.space != f.source:
        raise SpaceMismatchError("sheaf is not on the source of the map")
    if f.kind == "translate":
        return translate(F, f.units)
    if f.kind == "constant":
        return _constant_map_image(f, F, compact_sections_dim(F))
    return direct_image(f, F)


def _constant_map_image(f: CellMap, F: Sheaf, d: int) -> Sheaf:
    target = f.target
    p = f.constant_cell

    def dim_of(y):
        return d if target.leq(y, p) else 0

    def gen_of(a, b):
        if target.leq(a, p) and target.leq(b, p):
            return identity(F.field, d)
        return zero_map(F.field, dim_of(b), dim_of(a))

    return assemble(target, F.field, dim_of, gen_of)


def compact_sections(F: Sheaf) -> Tuple[SectionSpace, Subspace]:
    """
    直线上有界支撑的全局截面
    :return: (全局截面空间 S, S 的基坐标下尾部取值为 0 的子空间)
    """
    S = sections(F, whole(LINE))
    lo, hi = S.window
    columns = [S.value_at(b, lo) + S.value_at(b, hi) for b in S.subspace.basis]
    evaluation = _matrix_from_columns(F.field, F.stalk_dim(lo) + F.stalk_dim(hi), columns)
    return S, linear_kernel(evaluation)


def compact_sections_dim(F: Sheaf) -> int:
    return compact_sections(F)[1].dim


def _section_map(phi: SheafMorphism, s_src: SectionSpace, s_tgt: SectionSpace) -> LinearMap:
    """phi 在截面空间上诱导的映射（两侧基坐标）"""
    columns = []
    for b in s_src.subspace.basis:
        vec = []
        for c in s_tgt.cells:
            vec.extend(phi.component(c).apply(s_src.value_at(b, c)))
        columns.append(_coords_in(s_tgt.subspace.inclusion(), vec))
    return _matrix_from_columns(phi.field, s_tgt.dim, columns)


def _restrict_to_subspaces(m: LinearMap, source: Subspace, target: Subspace) -> LinearMap:
    """m 限制到子空间上，两侧用子空间的基坐标"""
    columns = [_coords_in(target.inclusion(), m.apply(v)) for v in source.basis]
    return _matrix_from_columns(m.field, target.dim, columns)


def direct_image_morphism(f: CellMap, phi: SheafMorphism, proper: bool = False) -> SheafMorphism:
    """f_* phi（proper 时为 f_! phi）：逐邻域作用在截面上"""
    if f.kind == "translate":
        return translate_morphism(phi, f.units)
    field = phi.field
    if f.kind == "constant":
        image_of = proper_direct_image if proper else direct_image
        source, target = image_of(f, phi.source), image_of(f, phi.target)
        m = _section_map(phi, sections(phi.source, whole(LINE)), sections(phi.target, whole(LINE)))
        if proper:
            m = _restrict_to_subspaces(m, compact_sections(phi.source)[1], compact_sections(phi.target)[1])
        p = f.constant_cell
        return build_morphism(source, target, lambda y: m if f.target.leq(y, p)
                              else zero_map(field, target.stalk_dim(y), source.stalk_dim(y)))
    source, target = direct_image(f, phi.source), direct_image(f, phi.target)
    space = f.target

    def component(y):
        U = preimage(f, star(space, y))
        return _section_map(phi, sections(phi.source, U), sections(phi.target, U))

    return build_morphism(source, target, component)


def proper_to_direct(f: CellMap, F: Sheaf) -> SheafMorphism:
    """f_!F -> f_*F：紧支撑截面的包含；有限源与平移上为恒等"""
    if f.kind != "constant":
        return identity_morphism(direct_image(f, F))
    source, target = proper_direct_image(f, F), direct_image(f, F)
    inclusion = compact_sections(F)[1].inclusion()
    p = f.constant_cell
    return build_morphism(source, target, lambda y: inclusion if f.target.leq(y, p)
                          else zero_map(F.field, target.stalk_dim(y), source.stalk_dim(y)))


def hom_sheaf_morphism(F: Sheaf, psi: SheafMorphism) -> SheafMorphism:
    """hom(F, psi): hom(F, G) -> hom(F, G')，在每个最小开邻域上左乘 psi"""
    G, G2 = psi.source, psi.target
    space, field = F.space, F.field
    source, target = hom_sheaf(F, G), hom_sheaf(F, G2)

    def component(c):
        cells = space.sorted_cells(space.up_set(c))
        here, there = hom_kernel(F, G, cells), hom_kernel(F, G2, cells)
        columns = []
        for v in here.basis:
            out, pos = [], 0
            for x in cells:
                f, g = F.stalk_dim(x), G.stalk_dim(x)
                block = LinearMap(field, g, f, tuple(tuple(v[pos + i * f + j] for j in range(f)) for i in range(g)))
                pos += f * g
                for row in compose(psi.component(x), block).entries:
                    out.extend(row)
            columns.append(_coords_in(there.inclusion(), out))
        return _matrix_from_columns(field, there.dim, columns)

    return build_morphism(source, target, component)
