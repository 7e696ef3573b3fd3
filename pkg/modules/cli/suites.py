#!/usr/bin/env python3
"""
性质测试套件
每个套件对一族随机（按种子确定）的实例检查一组结构性质，按检查项汇总通过数
进度条写到 stderr，套件文本只依赖种子与配置
"""

import logging
import random
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from tqdm import tqdm

from ..common.errors import FormatError, IndSheafError
from ..common.runtime import RunConfig
from ..extend import all_cell_functions, check_mv, constant_counterexample, extend, left_exactness, sample_pairs
from ..indcat import (
    INF, PeriodCert, SeqSystem, alpha, beta, cokernel_ind, exactness_report, hom_from_sheaf, hom_ind, iota,
    iota_morphism, is_ind_zero, kernel_ind, n_a_fixture, representable, short_exact, tilde_to_closed,
    tilde_to_open,
)
from ..indcat.generators import nilpotent_rays, random_ray_sequence
from ..linalg import Field, make_field
from ..space import LINE, closed_interval, closed_ray, open_embedding, point, to_point, vertex
from ..sheaf import (
    Sheaf, cokernel, constant_on, constant_sheaf, factor_through_epi, hom_space, identity_morphism,
    inverse_image, inverse_image_morphism, kernel, presentation,
)
from ..sheaf.generators import random_monotone_map, random_morphism, random_open, random_poset, random_sheaf
from ..sixops import (
    base_change_check, check_alpha_ihom, check_alpha_iota, check_beta_alpha, check_glueing, check_inverse_direct,
    check_tensor_ihom, comparison_check, hom_presheaf, projection_formula_check, restrict,
)
from .interpreter import canonical_transition, run_text
from .serialization import dumps, loads, same_structure

logger = logging.getLogger('SuiteRunner')


@dataclass
class CheckTally:
    """一个检查项的通过计数，只保留第一个失败的说明"""

    label: str
    total: int = 0
    passed: int = 0
    first_failure: str = ""

    def add(self, ok: bool, detail: str = "") -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif not self.first_failure:
            self.first_failure = detail or f"instance {self.total}"

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def text(self) -> str:
        head = f"{self.label}: {self.passed}/{self.total} {'ok' if self.ok else 'FAIL'}"
        return head + (f" (first failure: {self.first_failure})" if self.first_failure else "")


@dataclass
class SuiteResult:
    name: str
    seed: int
    tallies: List[CheckTally] = field(default_factory=list)

    def tally(self, label: str) -> CheckTally:
        for t in self.tallies:
            if t.label == label:
                return t
        t = CheckTally(label)
        self.tallies.append(t)
        return t

    def check(self, label: str, test: Callable[[], object]) -> None:
        """
        运行一个检查；返回 bool，或 (bool, 说明)
        实例中的库错误计为该项失败
        """
        try:
            outcome = test()
        except IndSheafError as e:
            self.tally(label).add(False, f"{type(e).__name__}: {e}")
            return
        if isinstance(outcome, tuple):
            self.tally(label).add(bool(outcome[0]), str(outcome[1]))
        else:
            self.tally(label).add(bool(outcome))

    @property
    def passed(self) -> bool:
        return all(t.ok for t in self.tallies)

    def text(self) -> str:
        head = f"suite {self.name} seed={self.seed}: {'pass' if self.passed else 'fail'}"
        return "\n".join([head] + ["  " + t.text() for t in self.tallies])


def _steps(count: int, label: str, progress: bool):
    return tqdm(range(count), desc=label, file=sys.stderr, disable=not progress, leave=False)


def _small_poset(rng: random.Random, lo: int = 2, hi: int = 5):
    return random_poset(rng, rng.randint(lo, hi))


def _isomorphic(A: Sheaf, B: Sheaf, rng: random.Random, tries: int = 16) -> bool:
    """在 Hom(A, B) 中找一个同构：先试基向量之和，再试随机组合"""
    if A.space != B.space or any(A.stalk_dim(c) != B.stalk_dim(c) for c in A.space.cells):
        return False
    H = hom_space(A, B)
    if H.dim == 0:
        return A.is_zero() and B.is_zero()
    field = A.field
    candidates = [[field.one()] * H.dim]
    candidates += [[field.random_element(rng) for _ in range(H.dim)] for _ in range(tries)]
    return any(H.morphism(v).is_iso() for v in candidates)


def _short_exact_pair(F: Sheaf, G: Sheaf, rng: random.Random):
    """F -> G 的随机态射给出 0 -> ker -> F -> coim -> 0 的 ind 形式"""
    phi = iota_morphism(random_morphism(F, G, rng))
    K, incl = kernel_ind(phi)
    C, proj = cokernel_ind(incl)
    return incl, proj


# ---- 各套件 ----

def suite_colimits(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """"lim" k^n 的 Hom 无限维且不可表示；"lim" k_{[n,∞)} 在有界开集上为零而 Hom(k_X, ·) = k"""
    result = SuiteResult("colimits", cfg.seed)
    field = make_field(cfg.field)
    pt = point()
    k = constant_sheaf(pt, field, 1)
    X = SeqSystem(pt, field, lambda n: constant_sheaf(pt, field, n),
                  lambda n: canonical_transition(constant_sheaf(pt, field, n), constant_sheaf(pt, field, n + 1)),
                  PeriodCert(0, 1, "block", block=k), "k^n")

    def infinite():
        cs = hom_from_sheaf(k, X, cfg.truncation)
        return cs.dim == INF and cs.tag.startswith("certified"), cs.dim_text()

    result.check("hom(k, lim k^n) infinite", infinite)
    result.check("lim k^n not representable", lambda: not representable(X, cfg.truncation).value)

    G = SeqSystem.from_prefix([constant_on(LINE, field, closed_ray(0))],
                              [_ray_transition(field, 0)],
                              PeriodCert(0, 1, "shift", units=1), "rays")
    rng = random.Random(cfg.seed)
    for i in _steps(20, "restrictions", progress):
        U = random_open(LINE, rng, far=i % 2 == 1)

        def vanishes(U=U):
            v = is_ind_zero(restrict(G, U, cfg.truncation), cfg.truncation)
            return v.value and not v.is_truncated, f"{U.describe()}: {v.text()}"

        result.check("rays vanish on bounded opens", vanishes)

    def global_hom():
        cs = hom_from_sheaf(constant_sheaf(LINE, field), G, cfg.truncation)
        return cs.dim == 1 and cs.is_exact, cs.dim_text()

    result.check("hom(k_X, lim k_[n,inf)) = 1", global_hom)
    N = nilpotent_rays(field)

    def nilpotent_vanishes():
        cs = hom_from_sheaf(constant_sheaf(LINE, field), N, cfg.truncation)
        v = is_ind_zero(N, cfg.truncation)
        ok = cs.dim == 0 and cs.is_exact and v.value and not v.is_truncated
        return ok, f"hom {cs.dim_text()}, zero {v.text()}"

    result.check("nilpotent period: hom = 0 and ind-zero", nilpotent_vanishes)
    return result


def _ray_transition(field: Field, n: int):
    return canonical_transition(constant_on(LINE, field, closed_ray(n)), constant_on(LINE, field, closed_ray(n + 1)))


def suite_adjunctions(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """ι、α、β：α∘ι = id，α∘β ≅ id（偏序集），Hom(ιF, ιG) = Hom(F, G) 与两组伴随"""
    result = SuiteResult("adjunctions", cfg.seed)
    rng = random.Random(cfg.seed)
    for field in (make_field("q"), make_field("fp:5")):
        for i in _steps(25, f"adjunctions {field.name}", progress):
            space = LINE if i % 3 == 0 else _small_poset(rng)
            F = random_sheaf(space, field, rng)
            G = random_sheaf(space, field, rng)
            tag = f"{field.name} #{i}"
            result.check("alpha iota = id", lambda: alpha(iota(F), cfg.truncation) == F)
            result.check("hom(iota F, iota G) = hom(F, G)",
                         lambda: hom_ind(iota(F), iota(G), cfg.truncation).dim == hom_space(F, G).dim)
            result.check("hom(alpha X, G) = hom(X, iota G)",
                         lambda: (check_alpha_iota(iota(F), G, cfg.truncation).passed, tag))
            if space.is_line:
                continue
            result.check("alpha beta = id", lambda: (_isomorphic(alpha(beta(F), cfg.truncation), F, rng), tag))
            result.check("hom(beta F, X) = hom(F, alpha X)",
                         lambda: (check_beta_alpha(F, iota(G), cfg.truncation).passed, tag))

            def presentation_iso():
                pres = presentation(F)
                C, q = cokernel(pres.d1)
                return factor_through_epi(pres.epsilon, q).is_iso()

            result.check("coker of presentation = F", presentation_iso)
    return result


def suite_ktilde(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """k~_U -> k_U 单，k~_S -> k_S 满；0 -> N_a -> k~_{{a}} -> k_{{a}} -> 0 正合且 N_a 非零"""
    result = SuiteResult("ktilde", cfg.seed)
    field = make_field(cfg.field)
    rng = random.Random(cfg.seed)
    for _ in _steps(10, "opens", progress):
        U = random_open(LINE, rng)

        def mono(U=U):
            K, _ = kernel_ind(tilde_to_open(LINE, field, U), cfg.truncation)
            v = is_ind_zero(K, cfg.truncation)
            return v.value, f"{U.describe()}: {v.text()}"

        result.check("k~_U -> k_U mono", mono)
    for _ in _steps(10, "closed sets", progress):
        a = rng.randint(-3, 2)
        S = vertex(a) if rng.random() < 0.3 else closed_interval(a, a + rng.randint(1, 3))

        def epi(S=S):
            C, _ = cokernel_ind(tilde_to_closed(LINE, field, S), cfg.truncation)
            v = is_ind_zero(C, cfg.truncation)
            return v.value, f"{S.describe()}: {v.text()}"

        result.check("k~_S -> k_S epi", epi)
    fixture = n_a_fixture(0, field)
    result.check("0 -> N_a -> k~ -> k -> 0 exact",
                 lambda: short_exact(fixture.inclusion, fixture.projection, cfg.truncation).value)
    result.check("N_a not ind-zero", lambda: not is_ind_zero(fixture.N, cfg.truncation).value)
    return result


def suite_exactness(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """随机短正合列（偏序集上的 ι 像与直线上带平移证书的射线系统）：两种正合判法一致，核与余核的泛性质，α 处的正合"""
    result = SuiteResult("exactness", cfg.seed)
    field = make_field(cfg.field)
    rng = random.Random(cfg.seed)
    for i in _steps(100, "short exact sequences", progress):
        space = _small_poset(rng, 2, 4)
        F, G = random_sheaf(space, field, rng), random_sheaf(space, field, rng)
        try:
            incl, proj = _short_exact_pair(F, G, rng)
        except IndSheafError as e:
            result.tally("short exact").add(False, f"#{i} {type(e).__name__}: {e}")
            continue
        result.check("short exact", lambda: short_exact(incl, proj, cfg.truncation).value)

        def methods_agree():
            verdicts = exactness_report(incl, proj, cfg.truncation)
            return len({v.value for v in verdicts.values()}) == 1

        result.check("homology and lifting agree", methods_agree)
        result.check("cokernel kills the kernel",
                     lambda: all(proj.after(incl).component(n).is_zero() for n in range(incl.horizon() + 1)))

        def alpha_exact():
            a, b, c = (alpha(X, cfg.truncation) for X in (incl.source, incl.target, proj.target))
            return all(a.stalk_dim(x) + c.stalk_dim(x) == b.stalk_dim(x) for x in space.cells)

        result.check("alpha of the sequence is exact", alpha_exact)
    for i in _steps(20, "certified shift sequences", progress):
        incl, proj = random_ray_sequence(field, rng)

        def shift_exact(incl=incl, proj=proj):
            v = short_exact(incl, proj, cfg.truncation)
            return v.value and not v.is_truncated, v.text()

        result.check("shift sequence short exact", shift_exact)
        result.check("shift sequence methods agree",
                     lambda incl=incl, proj=proj: len({v.value for v in
                                                       exactness_report(incl, proj, cfg.truncation).values()}) == 1)
    def nilpotent_zero():
        v = is_ind_zero(nilpotent_rays(field), cfg.truncation)
        return v.value and not v.is_truncated, v.text()

    result.check("nilpotent system is ind-zero", nilpotent_zero)
    return result


def suite_sixops(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """伴随 (⊗, ihom)、(f^-1, f_*)，α ihom = hom，f^-1 正合，比较映射，投影公式与基变换"""
    result = SuiteResult("sixops", cfg.seed)
    field = make_field(cfg.field)
    rng = random.Random(cfg.seed)
    trunc = cfg.truncation
    for i in _steps(50, "adjunctions", progress):
        P, Q = _small_poset(rng, 2, 5), _small_poset(rng, 2, 4)
        X, K, Y = (iota(random_sheaf(P, field, rng, 3)) for _ in range(3))
        result.check("tensor-ihom", lambda: check_tensor_ihom(X, K, Y, trunc).passed)
        F, G = random_sheaf(P, field, rng), random_sheaf(P, field, rng)
        result.check("alpha ihom = hom", lambda: check_alpha_ihom(F, G, trunc).passed)
        f = random_monotone_map(P, Q, rng)
        if f is None:
            continue
        H = random_sheaf(Q, field, rng)
        result.check("inverse-direct", lambda: check_inverse_direct(f, iota(H), iota(F), trunc).passed)

        def inverse_exact():
            phi = random_morphism(H, random_sheaf(Q, field, rng), rng)
            Kq, incl = kernel(phi)
            Cq, _ = cokernel(incl)
            a, b, c = inverse_image(f, Kq), inverse_image(f, H), inverse_image(f, Cq)
            dims = all(a.stalk_dim(x) + c.stalk_dim(x) == b.stalk_dim(x) for x in P.cells)
            return dims and inverse_image_morphism(f, incl).is_mono()

        result.check("inverse image exact", inverse_exact)

    line_to_pt = to_point(LINE)
    k_line = constant_sheaf(LINE, field)

    def comparison_witness():
        verdict = comparison_check(line_to_pt, k_line, to_direct=True, truncation=trunc)
        return not verdict.value, verdict.text()

    result.check("comparison to f_* not iso on line -> pt", comparison_witness)

    for _ in _steps(100, "cartesian squares", progress):
        P, Q = _small_poset(rng, 2, 6), _small_poset(rng, 2, 6)
        f = random_monotone_map(P, Q, rng)
        if f is None:
            continue
        X = iota(random_sheaf(P, field, rng))
        G = iota(constant_sheaf(Q, field))
        result.check("projection formula", lambda: projection_formula_check(f, X, G, trunc).passed)
        U = random_open(Q, rng)
        if U.is_empty():
            U = random_open(Q, rng).union(random_open(Q, rng))
        if U.is_empty():
            continue
        g = open_embedding(Q, U)
        result.check("base change", lambda: base_change_check(f, g, X, trunc).passed)
    return result


def suite_extension(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """单元函数预层满足 MV；Hom(k_U, F+) = #U；与表示无关；求值左正合；常值预层不满足 MV"""
    result = SuiteResult("extension", cfg.seed)
    field = make_field(cfg.field)
    rng = random.Random(cfg.seed)
    F = all_cell_functions(LINE, field)
    result.check("all-cell-functions passes MV", lambda: check_mv(F, sample_pairs(LINE, rng, 50)).passed)
    result.check("constant presheaf fails MV", lambda: not constant_counterexample(field)[1].passed)
    Fp = extend(F)
    for _ in _steps(30, "evaluations", progress):
        U = random_open(LINE, rng)

        def counts(U=U):
            got = Fp.dim(constant_on(LINE, field, U))
            return got == len(U.finite_cells()), f"{U.describe()}: {got}"

        result.check("hom(k_U, F+) = #cells(U)", counts)
    for i in _steps(30, "presentations", progress):
        G = random_sheaf(LINE, field, rng)
        def independent(G=G, i=i):
            dims = {Fp.dim(G, "minimal"), Fp.dim(G, "full"), Fp.dim(G, "random", i)}
            return len(dims) == 1, str(sorted(dims))

        result.check("independent of presentation", independent)
    for _ in _steps(20, "short exact sequences", progress):
        G, H = random_sheaf(LINE, field, rng), random_sheaf(LINE, field, rng)

        def left_exact():
            phi = random_morphism(G, H, rng)
            K, incl = kernel(phi)
            C, proj = cokernel(incl)
            return left_exactness(Fp, incl, proj).value

        result.check("evaluation left exact", left_exact)
    return result


def suite_glueing(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """Hom 预层在有限开覆盖上满足等化子条件"""
    result = SuiteResult("glueing", cfg.seed)
    field = make_field(cfg.field)
    rng = random.Random(cfg.seed)
    for _ in _steps(25, "covers", progress):
        space = _small_poset(rng, 3, 6)
        P = hom_presheaf(random_sheaf(space, field, rng), random_sheaf(space, field, rng))
        cover = [random_open(space, rng) for _ in range(rng.randint(2, 3))]

        def glues(cover=cover):
            v = check_glueing(P, cover)
            return v.value, v.detail

        result.check("equalizer exact", glues)
    return result


DETERMINISM_SCRIPT = """
let G = indcolim n: k_on(closed_ray(n));
dim-hom(constant(line), G);
is-zero(restrict(G, open_interval(0, 3)));
let X = indcolim n: constant(pt, n);
dim-hom(constant(pt), X);
representable(X);
check-mv(all_cell_functions(line), pairs = 5);
"""


def serialization_fixtures(field: Field, seed: int) -> Dict[str, object]:
    """各类可保存对象的样例"""
    rng = random.Random(seed)
    rays = SeqSystem.from_prefix(
        [constant_on(LINE, field, closed_ray(n)) for n in range(3)],
        [_ray_transition(field, n) for n in range(3)],
        PeriodCert(2, 1, "shift", units=1), "rays")
    return {
        "5-cell sheaf": random_sheaf(random_poset(rng, 5), field, rng),
        "line sheaf": random_sheaf(LINE, field, rng),
        "shift system": rays,
        "exhausting system": iota(random_sheaf(LINE, field, rng)),
        "one-object diagram": iota(random_sheaf(random_poset(rng, 3), field, rng)),
        "open interval": random_open(LINE, rng),
    }


def suite_determinism(cfg: RunConfig, progress: bool = False) -> SuiteResult:
    """同一脚本两次运行逐字节相同；样例对象读写往返并重新验证证书"""
    result = SuiteResult("determinism", cfg.seed)
    field = make_field(cfg.field)

    def same_report():
        first, second = run_text(DETERMINISM_SCRIPT, cfg).text(), run_text(DETERMINISM_SCRIPT, cfg).text()
        return first == second

    result.check("identical reports", same_report)
    for label, value in serialization_fixtures(field, cfg.seed).items():
        result.check(f"round trip: {label}", lambda value=value: same_structure(loads(dumps(value, field)), value))

    def refuses_uncertified():
        bare = SeqSystem(point(), field, lambda n: constant_sheaf(point(), field, 1),
                         lambda n: _point_identity(field))
        try:
            dumps(bare)
        except FormatError:
            return True
        return False

    result.check("uncertified systems refuse to save", refuses_uncertified)
    return result


def _point_identity(field: Field):
    return identity_morphism(constant_sheaf(point(), field, 1))


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "colimits": suite_colimits,
    "adjunctions": suite_adjunctions,
    "ktilde": suite_ktilde,
    "exactness": suite_exactness,
    "sixops": suite_sixops,
    "extension": suite_extension,
    "glueing": suite_glueing,
    "determinism": suite_determinism,
}


def run_suite(name: str, config: Optional[RunConfig] = None, progress: bool = False) -> SuiteResult:
    """
    运行一个套件；all 依次运行全部套件并合并计数
    :raises IndSheafError: 未知套件名
    """
    config = config or RunConfig()
    if name == "all":
        merged = SuiteResult("all", config.seed)
        for key, fn in SUITES.items():
            part = fn(config, progress)
            for t in part.tallies:
                merged.tallies.append(CheckTally(f"{key}/{t.label}", t.total, t.passed, t.first_failure))
        return merged
    if name not in SUITES:
        raise IndSheafError(f"unknown suite {name!r}; known: all, {', '.join(SUITES)}")
    logger.info(f"running suite {name} (seed {config.seed})")
    result = SUITES[name](config, progress)
    logger.info(f"suite {name}: {'pass' if result.passed else 'fail'}")
    return result
