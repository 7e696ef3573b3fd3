#!/usr/bin/env python3
"""
Ind 层上的六个运算
⊗、ihom、f^{-1}、f_*、f_!! 与限制；都逐层作用在系统上，证书由操作数证书推导
"""

import logging
from typing import Optional

from ..common.errors import SpaceMismatchError, UnsupportedShapeError
from ..indcat import (
    DEFAULT_TRUNCATION, FiniteDiagram, IndObject, PeriodCert, SeqSystem, derive_cert, iota, is_translation_invariant,
    map_levels, zip_levels,
)
from ..indcat.functors import IOTA_HI, IOTA_LO
from ..space import CellMap, CellSet, compact_core, exhaustion, open_interval, point_inclusion
from ..sheaf import (
    Sheaf, constant_on, direct_image, direct_image_morphism, hom_sheaf, hom_sheaf_morphism, inverse_image,
    inverse_image_morphism, natural_map, proper_direct_image, restrict_support, tensor, tensor_morphisms,
    translate, translate_morphism,
)

logger = logging.getLogger('SixOps')


def _base_sheaf(X: IndObject) -> Optional[Sheaf]:
    """穷竭系统的底层层，或常值系统的稳定层"""
    cert = X.cert
    if cert is None:
        return None
    if cert.rule == "exhaust":
        return cert.base
    if cert.rule == "constant":
        return X.stable_object()
    return None


def _iota_interval(n: int):
    return open_interval(IOTA_LO - n, IOTA_HI + n)


def _exhaust_candidate(base: Sheaf, n0: int = 0, lo: int = IOTA_LO, hi: int = IOTA_HI) -> PeriodCert:
    return PeriodCert(n0, 1, "exhaust", base=base, lo=lo, hi=hi)


# ---- ⊗ 与 ihom ----

def tensor_ind(X: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """
    "lim" X_i ⊗ "lim" Y_j = "lim" (X_n ⊗ Y_n)（对角链）
    :raises IncompatibleCertificateError: 两个证书推导不出组合系统的证书
    """
    extra = []
    a, b = _base_sheaf(X), _base_sheaf(Y)
    if a is not None and b is not None and "exhaust" in (X.cert.rule, Y.cert.rule):
        shapes = {(c.lo, c.hi, c.step) for c in (X.cert, Y.cert) if c.rule == "exhaust"}
        if len(shapes) == 1:
            lo, hi, step = shapes.pop()
            n0 = max(X.cert.n0, Y.cert.n0)
            extra.append(PeriodCert(n0, 1, "exhaust", base=tensor(a, b), lo=lo, hi=hi, step=step))
    return zip_levels(X, Y, tensor, tensor_morphisms, f"{X.name}*{Y.name}", local=True, extra_candidates=extra)


def ihom_ind(X: IndObject, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """
    ihom("lim" F_i, "lim" G_j) = "prolim"_i "lim"_j hom(F_i, G_j)
    第一个参数只能是单对象系统或 ι 的像，外层 prolim 因此是有限的
    """
    if X.space != Y.space:
        raise SpaceMismatchError("ihom of ind-objects on different spaces")
    cert = X.cert
    if cert is not None and cert.rule == "constant":
        F = X.stable_object()
        window = F.window if F.space.is_line and F.has_bounded_support() else None
        return map_levels(Y, lambda G: hom_sheaf(F, G), lambda t: hom_sheaf_morphism(F, t),
                          f"ihom({X.name},{Y.name})", window=window, equivariant=is_translation_invariant(F))
    if cert is not None and cert.rule == "exhaust":
        G = _base_sheaf(Y)
        if Y.cert is None or Y.cert.rule != "exhaust":
            raise UnsupportedShapeError("ihom out of an iota image on the line needs an iota image as target")
        return iota(hom_sheaf(cert.base, G), f"ihom({X.name},{Y.name})")
    raise UnsupportedShapeError(f"ihom needs a one-object or iota first argument, got {X.describe()}")


# ---- 限制 ----

def restrict(X: IndObject, U: CellSet, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """
    X|_U = "lim"_{n, V ⊂⊂ U} X_n ⊗ k_V，以零延拓的形式留在原空间上
    V 沿 U 的相对紧穷竭取对角；U 的紧核有界时只看核上的数据，
    平移系统的支撑离开紧核之后的层号由 X 的证书给出
    """
    if not U.is_open():
        raise UnsupportedShapeError("restriction is to open sets")
    space, field = X.space, X.field
    name = f"{X.name}|U"
    if not space.is_line or compact_core(U).is_bounded():
        core = compact_core(U)
        window = constant_on(space, field, core).window if space.is_line else None
        return map_levels(X, lambda F: restrict_support(F, core),
                          lambda t: tensor_morphisms(t, natural_map(space, field, core, core)), name,
                          window=window)
    opens = {}

    def V(n):
        if n not in opens:
            opens[n] = exhaustion(U, n + 1)
        return opens[n]

    R = SeqSystem(space, field, lambda n: restrict_support(X.level(n), V(n)),
                  lambda n: tensor_morphisms(X.transition(n), natural_map(space, field, V(n), V(n + 1))),
                  None, name)
    base = _base_sheaf(X)
    if base is not None:
        R.cert = derive_cert(R, [_exhaust_candidate(restrict_support(base, compact_core(U)), X.cert.n0)])
    return R


# ---- 逆像 ----

def inverse_image_ind(f: CellMap, Y: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """
    f^{-1} "lim" G_i = "lim"_i (f^{-1} G_i)_U，U ⊂⊂ 源空间
    有限源上不需要截断；直线源（常值映射）上与 ι 的穷竭区间取对角
    """
    if Y.space != f.target:
        raise SpaceMismatchError("ind-object is not on the target of the map")
    name = f"f^-1 {Y.name}"
    if f.kind == "translate":
        extra = []
        if Y.cert is not None and Y.cert.rule == "exhaust":
            c = Y.cert
            extra.append(PeriodCert(c.n0, 1, "exhaust", base=translate(c.base, -f.units),
                                    lo=c.lo - f.units, hi=c.hi - f.units, step=c.step))
        return map_levels(Y, lambda G: translate(G, -f.units), lambda t: translate_morphism(t, -f.units),
                          name, space=f.source, equivariant=True, extra=extra)
    if not f.source.is_line:
        window = None
        if f.target.is_line:
            hit = [f(c) for c in f.source.cells]
            window = (min(hit), max(hit))
        return map_levels(Y, lambda G: inverse_image(f, G), lambda t: inverse_image_morphism(f, t),
                          name, space=f.source, window=window)
    space, field = f.source, Y.field
    Z = SeqSystem(space, field,
                  lambda n: restrict_support(inverse_image(f, Y.level(n)), _iota_interval(n)),
                  lambda n: tensor_morphisms(inverse_image_morphism(f, Y.transition(n)),
                                             natural_map(space, field, _iota_interval(n), _iota_interval(n + 1))),
                  None, name)
    if Y.cert is not None and Y.cert.rule == "constant":
        Z.cert = derive_cert(Z, [_exhaust_candidate(inverse_image(f, Y.stable_object()), Y.cert.n0)])
    return Z


def stalk(X: IndObject, x, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """茎函子 X_x = j_x^{-1} X"""
    return inverse_image_ind(point_inclusion(X.space, x), X, truncation)


# ---- 正像 ----

def direct_image_ind(f: CellMap, X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """
    f_* X = "prolim"_K "lim"_i f_* X_{iK}
    有限源上 K 只有一个；直线到点时每层的 prolim 在窗口外稳定，穷竭系统化为 ι f_* 的底层层
    """
    if X.space != f.source:
        raise SpaceMismatchError("ind-object is not on the source of the map")
    name = f"f_* {X.name}"
    if f.kind == "constant":
        base = _base_sheaf(X)
        if base is not None:
            return FiniteDiagram.single(direct_image(f, base), name)
    return _pushforward(f, X, name, proper=False)


def proper_direct_image_ind(f: CellMap, X: IndObject, truncation: int = DEFAULT_TRUNCATION) -> IndObject:
    """f_!! "lim" F_i = "lim" f_! F_i（逐层）"""
    if X.space != f.source:
        raise SpaceMismatchError("ind-object is not on the source of the map")
    return _pushforward(f, X, f"f_!! {X.name}", proper=True)


def _pushforward(f: CellMap, X: IndObject, name: str, proper: bool) -> IndObject:
    image_of = proper_direct_image if proper else direct_image
    extra = []
    if f.kind == "translate" and X.cert is not None and X.cert.rule == "exhaust":
        c = X.cert
        extra.append(PeriodCert(c.n0, 1, "exhaust", base=translate(c.base, f.units),
                                lo=c.lo + f.units, hi=c.hi + f.units, step=c.step))
    return map_levels(X, lambda F: image_of(f, F), lambda t: direct_image_morphism(f, t, proper),
                      name, space=f.target, equivariant=f.kind == "translate", extra=extra)
