#!/usr/bin/env python3
"""
脚本语言的内置函数表
每个内置函数声明参数个数与关键字；解析器据此在绑定时检查，解释器据此调用
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from ..common.errors import DslTypeError
from ..extend import (
    PresheafOnT, all_cell_functions, bounded_cell_functions, constant_presheaf, extend,
    rho_view, sheaf_sections, table,
)
from ..indcat import (
    IndMorphism, IndObject, alpha, beta, beta_closed, beta_open, cokernel_ind, direct_sum_ind, homology, iota,
    iota_morphism, kernel_ind, n_a_fixture, tilde_to_closed, tilde_to_open,
)
from ..linalg import Field, from_rows, zero_map
from ..space import (
    LINE, CellMap, CellSet, Space, cell_set, closed_interval, closed_ray, empty, open_embedding,
    open_interval, open_ray, point, point_inclusion, poset_from_pairs, star, to_point, translation,
    up_closure, vertex, whole,
)
from ..sheaf import (
    Sheaf, SheafMorphism, constant_on, constant_sheaf, direct_image, direct_sum, hom_sheaf, inverse_image,
    natural_map, projective, proper_direct_image, restrict_support, tensor, translate, zero_sheaf,
)
from ..sheaf.generators import random_poset, random_sheaf
from ..sixops import (
    comparison_map, direct_image_ind, ihom_ind, inverse_image_ind, proper_direct_image_ind, restrict, stalk,
    tensor_ind,
)
from .serialization import load_file


@dataclass
class Context:
    """一次运行的域、截断与种子；同一种子给出同一串随机实例"""

    field: Field
    truncation: int
    seed: int
    rng: random.Random = None
    cache: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rng is None:
            self.rng = random.Random(self.seed)


@dataclass(frozen=True)
class Builtin:
    name: str
    fn: Callable
    min_args: int
    max_args: int
    keywords: Tuple[str, ...] = ()
    doc: str = ""

    def arity_text(self) -> str:
        if self.min_args == self.max_args:
            return str(self.min_args)
        return f"{self.min_args}-{self.max_args}"


BUILTINS: Dict[str, Builtin] = {}

CONSTANTS: Dict[str, Callable] = {
    "line": lambda ctx: LINE,
    "pt": lambda ctx: point(),
}

QUERIES = ("dim-hom", "is-exact", "is-zero", "check-adjunction", "check-mv", "run-suite", "representable")

# 第一个裸标识符是名字而不是变量
SYMBOL_FIRST = ("check-adjunction", "run-suite")


def builtin(name: str, min_args: int, max_args: int = None, keywords: Tuple[str, ...] = ()):
    def register(fn):
        BUILTINS[name] = Builtin(name, fn, min_args, min_args if max_args is None else max_args,
                                 tuple(keywords), (fn.__doc__ or "").strip())
        return fn
    return register


def want(value, types, what: str):
    """参数类型检查"""
    if not isinstance(value, types):
        raise DslTypeError(f"{what} expected, got {type(value).__name__}")
    return value


def want_int(value, what: str = "integer") -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DslTypeError(f"{what} expected, got {value!r}")
    return value


def _cell(space: Space, value):
    if space.is_line:
        return want_int(value, "line cell")
    return str(value)


def _matrix(ctx: Context, rows: List, codomain: int, domain: int):
    if not rows:
        return zero_map(ctx.field, codomain, domain)
    return from_rows(ctx.field, [[ctx.field.coerce(x) for x in row] for row in rows], domain)


# ---- 空间与集合 ----

@builtin("poset", 2)
def _poset(ctx, cells, pairs):
    """poset(["a", "b"], [["a", "b"]])：a <= b"""
    return poset_from_pairs([str(c) for c in cells], [(str(a), str(b)) for a, b in pairs], name="P")


@builtin("random_poset", 1)
def _random_poset(ctx, size):
    return random_poset(ctx.rng, want_int(size, "size"))


@builtin("open_interval", 2)
def _open_interval(ctx, a, b):
    return open_interval(want_int(a), want_int(b))


@builtin("closed_interval", 2)
def _closed_interval(ctx, a, b):
    return closed_interval(want_int(a), want_int(b))


@builtin("closed_ray", 1)
def _closed_ray(ctx, n):
    return closed_ray(want_int(n))


@builtin("open_ray", 1)
def _open_ray(ctx, n):
    return open_ray(want_int(n))


@builtin("vertex", 1)
def _vertex(ctx, n):
    return vertex(want_int(n))


@builtin("star", 2)
def _star(ctx, space, c):
    want(space, Space, "space")
    return star(space, _cell(space, c))


@builtin("whole", 1)
def _whole(ctx, space):
    return whole(want(space, Space, "space"))


@builtin("empty", 1)
def _empty(ctx, space):
    return empty(want(space, Space, "space"))


@builtin("cells", 2)
def _cells(ctx, space, members):
    want(space, Space, "space")
    return cell_set(space, [_cell(space, c) for c in members])


@builtin("union", 2)
def _union(ctx, A, B):
    return want(A, CellSet, "cell set").union(want(B, CellSet, "cell set"))


@builtin("intersection", 2)
def _intersection(ctx, A, B):
    return want(A, CellSet, "cell set").intersection(want(B, CellSet, "cell set"))


@builtin("complement", 1)
def _complement(ctx, A):
    return want(A, CellSet, "cell set").complement()


@builtin("closure", 1)
def _closure(ctx, A):
    return want(A, CellSet, "cell set").closure()


@builtin("up_closure", 1)
def _up_closure(ctx, A):
    return up_closure(want(A, CellSet, "cell set"))


# ---- 层 ----

@builtin("k_on", 1, 2)
def _k_on(ctx, Z, d=1):
    want(Z, CellSet, "cell set")
    return constant_on(Z.space, ctx.field, Z, want_int(d, "rank"))


@builtin("constant", 1, 2)
def _constant(ctx, space, d=1):
    return constant_sheaf(want(space, Space, "space"), ctx.field, want_int(d, "rank"))


@builtin("projective", 2)
def _projective(ctx, space, c):
    want(space, Space, "space")
    return projective(space, ctx.field, _cell(space, c))


@builtin("zero", 1)
def _zero(ctx, space):
    return zero_sheaf(want(space, Space, "space"), ctx.field)


@builtin("random_sheaf", 1, 2)
def _random_sheaf(ctx, space, max_dim=2):
    return random_sheaf(want(space, Space, "space"), ctx.field, ctx.rng, want_int(max_dim))


@builtin("support", 2)
def _support(ctx, F, Z):
    return restrict_support(want(F, Sheaf, "sheaf"), want(Z, CellSet, "cell set"))


@builtin("translate", 2)
def _translate(ctx, A, units):
    units = want_int(units, "units")
    if isinstance(A, IndObject):
        return direct_image_ind(translation(units), A, ctx.truncation)
    return translate(want(A, Sheaf, "sheaf"), units)


@builtin("hom", 2)
def _hom(ctx, F, G):
    return hom_sheaf(want(F, Sheaf, "sheaf"), want(G, Sheaf, "sheaf"))


@builtin("alpha", 1)
def _alpha(ctx, X):
    return alpha(want(X, IndObject, "ind-object"), ctx.truncation)


# ---- 层与 ind-对象共用的运算 ----

def _both(A, B, what: str):
    if isinstance(A, Sheaf) and isinstance(B, Sheaf):
        return True
    if isinstance(A, IndObject) and isinstance(B, IndObject):
        return False
    raise DslTypeError(f"{what} needs two sheaves or two ind-objects")


@builtin("sum", 2)
def _sum(ctx, A, B):
    if _both(A, B, "sum"):
        return direct_sum(A, B)
    return direct_sum_ind(A, B, ctx.truncation)


@builtin("tensor", 2)
def _tensor(ctx, A, B):
    if _both(A, B, "tensor"):
        return tensor(A, B)
    return tensor_ind(A, B, ctx.truncation)


@builtin("pullback", 2)
def _pullback(ctx, f, A):
    want(f, CellMap, "cell map")
    if isinstance(A, Sheaf):
        return inverse_image(f, A)
    return inverse_image_ind(f, want(A, IndObject, "ind-object"), ctx.truncation)


@builtin("pushforward", 2)
def _pushforward(ctx, f, A):
    want(f, CellMap, "cell map")
    if isinstance(A, Sheaf):
        return direct_image(f, A)
    return direct_image_ind(f, want(A, IndObject, "ind-object"), ctx.truncation)


@builtin("proper_pushforward", 2)
def _proper_pushforward(ctx, f, A):
    want(f, CellMap, "cell map")
    if isinstance(A, Sheaf):
        return proper_direct_image(f, A)
    return proper_direct_image_ind(f, want(A, IndObject, "ind-object"), ctx.truncation)


# ---- ind-对象 ----

@builtin("iota", 1)
def _iota(ctx, F):
    return iota(want(F, Sheaf, "sheaf"))


@builtin("beta", 1)
def _beta(ctx, F):
    return beta(want(F, Sheaf, "sheaf"))


@builtin("ktilde_open", 1)
def _ktilde_open(ctx, U):
    want(U, CellSet, "cell set")
    return beta_open(U.space, ctx.field, U)


@builtin("ktilde_closed", 1)
def _ktilde_closed(ctx, S):
    want(S, CellSet, "cell set")
    return beta_closed(S.space, ctx.field, S)


def _fixture(ctx, a):
    key = ("N", want_int(a, "vertex"))
    if key not in ctx.cache:
        ctx.cache[key] = n_a_fixture(a, ctx.field)
    return ctx.cache[key]


@builtin("N", 1)
def _n(ctx, a):
    """N_a = ker(k~_{{a}} -> k_{{a}})，a 是直线上的顶点"""
    return _fixture(ctx, a).N


@builtin("N_inclusion", 1)
def _n_inclusion(ctx, a):
    return _fixture(ctx, a).inclusion


@builtin("N_projection", 1)
def _n_projection(ctx, a):
    return _fixture(ctx, a).projection


@builtin("restrict", 2)
def _restrict(ctx, X, U):
    return restrict(want(X, IndObject, "ind-object"), want(U, CellSet, "cell set"), ctx.truncation)


@builtin("ihom", 2)
def _ihom(ctx, X, Y):
    return ihom_ind(want(X, IndObject, "ind-object"), want(Y, IndObject, "ind-object"), ctx.truncation)


@builtin("stalk", 2)
def _stalk(ctx, X, c):
    want(X, IndObject, "ind-object")
    return stalk(X, _cell(X.space, c), ctx.truncation)


@builtin("kernel", 1)
def _kernel(ctx, phi):
    return kernel_ind(want(phi, IndMorphism, "ind-morphism"), ctx.truncation)[0]


@builtin("cokernel", 1)
def _cokernel(ctx, phi):
    return cokernel_ind(want(phi, IndMorphism, "ind-morphism"), ctx.truncation)[0]


@builtin("kernel_map", 1)
def _kernel_map(ctx, phi):
    return kernel_ind(want(phi, IndMorphism, "ind-morphism"), ctx.truncation)[1]


@builtin("cokernel_map", 1)
def _cokernel_map(ctx, phi):
    return cokernel_ind(want(phi, IndMorphism, "ind-morphism"), ctx.truncation)[1]


@builtin("homology", 2)
def _homology(ctx, f, g):
    return homology(want(f, IndMorphism, "ind-morphism"), want(g, IndMorphism, "ind-morphism"), ctx.truncation)


# ---- 映射与态射 ----

@builtin("to_point", 1)
def _to_point(ctx, space):
    return to_point(want(space, Space, "space"))


@builtin("translation", 1)
def _translation(ctx, units):
    return translation(want_int(units, "units"))


@builtin("point_inclusion", 2)
def _point_inclusion(ctx, space, c):
    want(space, Space, "space")
    return point_inclusion(space, _cell(space, c))


@builtin("open_embedding", 2)
def _open_embedding(ctx, space, U):
    return open_embedding(want(space, Space, "space"), want(U, CellSet, "cell set"))


@builtin("cellmap", 3)
def _cellmap(ctx, source, target, pairs):
    """cellmap(P, Q, [["a", "x"], ...])"""
    want(source, Space, "space")
    want(target, Space, "space")
    return CellMap(source, target, "table", tuple((str(a), str(b)) for a, b in pairs))


@builtin("natural", 2)
def _natural(ctx, Z, Z2):
    """k_Z -> k_Z'"""
    want(Z, CellSet, "cell set")
    return natural_map(Z.space, ctx.field, Z, want(Z2, CellSet, "cell set"))


@builtin("iota_map", 1)
def _iota_map(ctx, phi):
    return iota_morphism(want(phi, SheafMorphism, "sheaf morphism"))


@builtin("ktilde_open_map", 1)
def _ktilde_open_map(ctx, U):
    want(U, CellSet, "cell set")
    return tilde_to_open(U.space, ctx.field, U)


@builtin("ktilde_closed_map", 1)
def _ktilde_closed_map(ctx, S):
    want(S, CellSet, "cell set")
    return tilde_to_closed(S.space, ctx.field, S)


@builtin("comparison", 2, keywords=("direct",))
def _comparison(ctx, f, F, direct=0):
    """f_!! ι F -> ι f_! F；direct=1 时目标为 ι f_* F"""
    return comparison_map(want(f, CellMap, "cell map"), want(F, Sheaf, "sheaf"), bool(direct), ctx.truncation)


# ---- 预层与延拓 ----

@builtin("sections", 1)
def _sections(ctx, G):
    return sheaf_sections(want(G, Sheaf, "sheaf"))


@builtin("all_cell_functions", 1)
def _all_cell_functions(ctx, space):
    return all_cell_functions(want(space, Space, "space"), ctx.field)


@builtin("bounded_cell_functions", 2)
def _bounded_cell_functions(ctx, space, bound):
    return bounded_cell_functions(want(space, Space, "space"), ctx.field, want_int(bound, "bound"))


@builtin("constant_presheaf", 1, 2)
def _constant_presheaf(ctx, space, d=1):
    return constant_presheaf(want(space, Space, "space"), ctx.field, want_int(d, "rank"))


@builtin("table", 3)
def _table(ctx, space, dims, maps):
    """table(space, [[U, d], ...], [[U, V, [[row], ...]], ...])"""
    want(space, Space, "space")
    dim_of = {want(U, CellSet, "cell set"): want_int(d, "dimension") for U, d in dims}
    restriction = {}
    for U, V, rows in maps:
        if U not in dim_of or V not in dim_of:
            raise DslTypeError("table maps must connect opens listed with a dimension")
        restriction[(U, V)] = _matrix(ctx, rows, dim_of[V], dim_of[U])
    return table(space, ctx.field, dim_of, restriction)


@builtin("extend", 1)
def _extend(ctx, P):
    return extend(want(P, PresheafOnT, "presheaf"))


@builtin("rho", 1)
def _rho(ctx, X):
    return rho_view(want(X, IndObject, "ind-object"), ctx.truncation)


@builtin("load", 1)
def _load(ctx, path):
    return load_file(str(path))


def number(text: str):
    """数字字面量：整数或分数"""
    if "/" in text:
        return Fraction(text)
    return int(text)
