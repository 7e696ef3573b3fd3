#!/usr/bin/env python3
"""
脚本解释器
按顺序执行语句，每个查询、emit、show、save 产生报告中的一条记录
报告文本只依赖脚本与配置（耗时只在打开 timings 时输出），同一输入逐字节相同
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..common.errors import DslRuntimeError, DslTypeError, IndSheafError
from ..common.runtime import RunConfig
from ..extend import FunctorBackedInd, PresheafOnT, check_mv, sample_pairs
from ..indcat import (
    EXACT, IndMorphism, IndObject, PeriodCert, SeqSystem, Verdict, derive_cert, exactness_report,
    format_dim, hom_from_sheaf, hom_ind, iota, is_exact, is_ind_zero, representable,
)
from ..linalg import LinearMap, make_field
from ..space import CellMap, CellSet
from ..sheaf import Sheaf, SheafMorphism, build_morphism, cokernel, hom_space
from ..sixops import (
    base_change_check, check_alpha_ihom, check_alpha_iota, check_beta_alpha, check_inverse_direct,
    check_tensor_ihom, check_tensor_inverse, comparison_check, projection_formula_check,
)
from .builtins import BUILTINS, CONSTANTS, Context, number, want, want_int
from .dsl import (
    BinOp, Call, Emit, IndColim, Let, ListExpr, Name, Neg, Num, Query, Save, Script, Show, Str, Symbol, parse,
)
from .serialization import save_file

logger = logging.getLogger('ScriptRunner')

CHECKS = ("tensor-ihom", "inverse-direct", "alpha-iota", "beta-alpha", "alpha-ihom", "tensor-inverse",
          "projection", "base-change", "comparison")


@dataclass
class Record:
    """报告中的一条记录：语句序号、规范化的源文本与结果行"""

    index: int
    source: str
    lines: List[str] = field(default_factory=list)
    ok: bool = True
    elapsed: Optional[float] = None

    def text(self, timings: bool = False) -> str:
        out = [f"[{self.index}] {self.source}"] + ["  " + line for line in self.lines]
        if timings and self.elapsed is not None:
            out.append(f"  elapsed {self.elapsed:.3f}s")
        return "\n".join(out)


@dataclass
class Report:
    config: RunConfig
    records: List[Record] = field(default_factory=list)
    error: Optional[DslRuntimeError] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or any(not r.ok for r in self.records)

    @property
    def failures(self) -> List[Record]:
        return [r for r in self.records if not r.ok]

    def text(self) -> str:
        cfg = self.config
        parts = [f"# report field={cfg.field} trunc={cfg.truncation} seed={cfg.seed}"]
        parts += [r.text(cfg.timings) for r in self.records]
        if self.error is not None:
            parts.append(f"error: {self.error}")
        status = "FAIL" if self.failed else "PASS"
        parts.append(f"# {status}: {len(self.records)} records, {len(self.failures)} failed")
        return "\n".join(parts) + "\n"


def describe_value(value) -> str:
    """show 语句与 save 记录使用的确定性描述"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, Verdict):
        return value.text()
    if isinstance(value, list):
        return "[" + ", ".join(describe_value(v) for v in value) + "]"
    if isinstance(value, LinearMap):
        return f"matrix {value.codomain_dim}x{value.domain_dim}"
    if isinstance(value, SheafMorphism):
        return f"morphism {value.source.describe()} -> {value.target.describe()}"
    if isinstance(value, IndMorphism):
        return f"ind-morphism {value.source.describe()} -> {value.target.describe()}"
    if isinstance(value, CellMap):
        return f"cell map {value.source.describe()} -> {value.target.describe()} ({value.kind})"
    describe = getattr(value, "describe", None)
    if callable(describe):
        return describe()
    return f"<{type(value).__name__}>"


def canonical_transition(source: Sheaf, target: Sheaf) -> SheafMorphism:
    """逐单元在公共前几个坐标上取恒等，其余为零"""
    field = source.field

    def component(c):
        rows, cols = target.stalk_dim(c), source.stalk_dim(c)
        entries = tuple(tuple(field.one() if i == j else field.zero() for j in range(cols)) for i in range(rows))
        return LinearMap(field, rows, cols, entries)

    return build_morphism(source, target, component)


def mentions(expr, var: str) -> bool:
    """表达式是否引用名字 var（内层同名的 indcolim 变量遮蔽外层）"""
    if isinstance(expr, Name):
        return expr.name == var
    if isinstance(expr, Call):
        return any(mentions(a, var) for a in expr.args) or any(mentions(v, var) for _, v in expr.kwargs)
    if isinstance(expr, ListExpr):
        return any(mentions(item, var) for item in expr.items)
    if isinstance(expr, Neg):
        return mentions(expr.operand, var)
    if isinstance(expr, BinOp):
        return mentions(expr.left, var) or mentions(expr.right, var)
    if isinstance(expr, IndColim):
        return expr.var != var and mentions(expr.body, var)
    return False


class ScriptRunner:
    """
    脚本执行器
    :param config: 域、截断、种子与是否输出耗时
    """

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig()
        self.ctx = Context(make_field(self.config.field), self.config.truncation, self.config.seed)
        self.env: Dict[str, object] = {}

    # ---- 语句 ----

    def run(self, script: Script) -> Report:
        """
        执行脚本
        第一个运行时错误终止执行，错误记在 report.error 上（带语句序号）
        """
        report = Report(self.config)
        for index, statement in enumerate(script.statements):
            started = time.perf_counter()
            try:
                record = self.execute(index, statement)
            except IndSheafError as e:
                report.error = e if isinstance(e, DslRuntimeError) else DslRuntimeError(
                    f"{type(e).__name__}: {e}", index)
            except (ArithmeticError, ValueError, TypeError, KeyError) as e:
                report.error = DslRuntimeError(f"{type(e).__name__}: {e}", index)
            if report.error is not None:
                logger.error(f"script stopped: {report.error}")
                break
            if record is not None:
                record.elapsed = time.perf_counter() - started
                report.records.append(record)
        logger.info(f"ran {len(script.statements)} statements, {len(report.failures)} failed")
        return report

    def execute(self, index: int, statement) -> Optional[Record]:
        if isinstance(statement, Let):
            self.env[statement.name] = self.evaluate(statement.expr)
            return None
        if isinstance(statement, Emit):
            return Record(index, statement.source, [statement.text])
        if isinstance(statement, Show):
            return Record(index, statement.source, [describe_value(self.evaluate(statement.expr))])
        if isinstance(statement, Save):
            value = self.env[statement.name]
            save_file(value, statement.path, self.ctx.field)
            return Record(index, statement.source, [f"saved {describe_value(value)} to {statement.path}"])
        if isinstance(statement, Query):
            args = [self.evaluate(a) for a in statement.args]
            kwargs = {k: self.evaluate(v) for k, v in statement.kwargs}
            lines, ok = QUERY_HANDLERS[statement.name](self, *args, **kwargs)
            return Record(index, statement.source, lines, ok)
        raise DslRuntimeError(f"unknown statement {type(statement).__name__}", index)

    # ---- 表达式 ----

    def evaluate(self, expr, scope: Optional[Dict[str, object]] = None):
        scope = scope or {}
        if isinstance(expr, Num):
            return number(expr.text)
        if isinstance(expr, Str):
            return expr.value
        if isinstance(expr, Symbol):
            return expr.name
        if isinstance(expr, Name):
            if expr.name in scope:
                return scope[expr.name]
            if expr.name in self.env:
                return self.env[expr.name]
            return CONSTANTS[expr.name](self.ctx)
        if isinstance(expr, ListExpr):
            return [self.evaluate(x, scope) for x in expr.items]
        if isinstance(expr, Call):
            args = [self.evaluate(a, scope) for a in expr.args]
            kwargs = {k: self.evaluate(v, scope) for k, v in expr.kwargs}
            return BUILTINS[expr.func].fn(self.ctx, *args, **kwargs)
        if isinstance(expr, Neg):
            return -want_int(self.evaluate(expr.operand, scope))
        if isinstance(expr, BinOp):
            a = want_int(self.evaluate(expr.left, scope))
            b = want_int(self.evaluate(expr.right, scope))
            return {"+": a + b, "-": a - b, "*": a * b}[expr.op]
        if isinstance(expr, IndColim):
            return self._indcolim(expr, scope)
        raise DslTypeError(f"cannot evaluate {type(expr).__name__}")

    def _indcolim(self, expr: IndColim, scope: Dict[str, object]) -> SeqSystem:
        """
        indcolim n: body
        第 n 层是 body 在 n 处的值，转移取公共坐标上的恒等
        平移与分块规则在证书窗口内验证后采用（脚本作者对 body 的形状负责）；
        常值规则只给不含 n 的 body，否则系统不带证书
        """
        def level(n):
            return want(self.evaluate(expr.body, {**scope, expr.var: n}), Sheaf, "indcolim body (a sheaf)")

        system = None

        def transition(n):
            return canonical_transition(system.level(n), system.level(n + 1))

        first = level(0)
        system = SeqSystem(first.space, first.field, level, transition, name=expr.var)
        candidates = self._candidates(system, first)
        if not mentions(expr.body, expr.var):
            candidates.insert(0, PeriodCert(0, 1, "constant"))
        cert = derive_cert(system, candidates)
        if cert is None:
            logger.info(f"indcolim over {expr.var}: no certificate found")
        system.cert = cert
        system.name = f"indcolim {expr.var}"
        return system

    @staticmethod
    def _candidates(system: SeqSystem, first: Sheaf) -> List[PeriodCert]:
        out = []
        if first.space.is_line:
            out += [PeriodCert(n0, 1, "shift", units=u) for n0 in range(3) for u in (1, -1, 2, -2)]
        for n0 in range(3):
            t = system.transition(n0)
            if t.is_mono():
                D, _ = cokernel(t)
                if not D.is_zero():
                    out.append(PeriodCert(n0, 1, "block", block=D))
        return out


# ---- 查询 ----

def _as_ind(value) -> IndObject:
    if isinstance(value, Sheaf):
        return iota(value)
    return want(value, IndObject, "ind-object")


def _query_dim_hom(runner: ScriptRunner, A, B, expect=None):
    """dim-hom(A, B)：层或 ind-对象之间的 Hom 维数"""
    trunc = runner.ctx.truncation
    if isinstance(B, FunctorBackedInd):
        result = B.evaluate(want(A, Sheaf, "sheaf"))
        dim, tag = result.dim, result.tag
    elif isinstance(A, Sheaf) and isinstance(B, Sheaf):
        dim, tag = hom_space(A, B).dim, EXACT
    elif isinstance(A, Sheaf):
        cs = hom_from_sheaf(A, want(B, IndObject, "ind-object"), trunc)
        dim, tag = cs.dim, cs.tag
    else:
        tower = hom_ind(_as_ind(A), _as_ind(B), trunc)
        dim, tag = tower.dim, tower.tag
    line = f"dim = {format_dim(dim)} [{tag}]"
    if expect is None:
        return [line], True
    wanted = float("inf") if expect == "inf" else want_int(expect, "expected dimension")
    ok = dim == wanted
    return [line + ("" if ok else f" expected {format_dim(wanted)}")], ok


def _query_is_exact(runner: ScriptRunner, f, g, method="homology"):
    want(f, IndMorphism, "ind-morphism")
    want(g, IndMorphism, "ind-morphism")
    if method == "both":
        verdicts = exactness_report(f, g, runner.ctx.truncation)
        return [f"{name}: {v.text()}" for name, v in verdicts.items()], True
    return [is_exact(f, g, str(method), runner.ctx.truncation).text()], True


def _query_is_zero(runner: ScriptRunner, X):
    if isinstance(X, Sheaf):
        return [Verdict(X.is_zero(), EXACT).text()], True
    return [is_ind_zero(want(X, IndObject, "ind-object"), runner.ctx.truncation).text()], True


def _query_representable(runner: ScriptRunner, X):
    return [representable(_as_ind(X), runner.ctx.truncation).text()], True


def _query_check_adjunction(runner: ScriptRunner, kind, *args, expect="iso"):
    """
    check-adjunction(kind, ...)：伴随、投影公式、基变换与比较映射
    comparison 的 expect 取 iso 或 non-iso
    """
    trunc = runner.ctx.truncation
    kind = str(kind)
    if kind not in CHECKS:
        raise DslTypeError(f"unknown check {kind!r}; known: {', '.join(CHECKS)}")
    if kind == "comparison":
        f, F = args[0], args[1]
        direct = bool(args[2]) if len(args) > 2 else False
        verdict = comparison_check(want(f, CellMap, "cell map"), want(F, Sheaf, "sheaf"), direct, trunc)
        ok = verdict.value == (expect == "iso")
        return [f"comparison iso: {verdict.text()} (expected {expect})"], ok
    if kind == "tensor-ihom":
        report = check_tensor_ihom(_as_ind(args[0]), _as_ind(args[1]), _as_ind(args[2]), trunc)
    elif kind == "inverse-direct":
        report = check_inverse_direct(want(args[0], CellMap, "cell map"), _as_ind(args[1]), _as_ind(args[2]), trunc)
    elif kind == "alpha-iota":
        report = check_alpha_iota(_as_ind(args[0]), want(args[1], Sheaf, "sheaf"), trunc)
    elif kind == "beta-alpha":
        report = check_beta_alpha(want(args[0], Sheaf, "sheaf"), _as_ind(args[1]), trunc)
    elif kind == "alpha-ihom":
        report = check_alpha_ihom(want(args[0], Sheaf, "sheaf"), want(args[1], Sheaf, "sheaf"), trunc)
    elif kind == "tensor-inverse":
        report = check_tensor_inverse(want(args[0], CellMap, "cell map"), _as_ind(args[1]), _as_ind(args[2]), trunc)
    elif kind == "projection":
        report = projection_formula_check(want(args[0], CellMap, "cell map"), _as_ind(args[1]),
                                          _as_ind(args[2]), trunc)
    else:
        report = base_change_check(want(args[0], CellMap, "cell map"), want(args[1], CellMap, "cell map"),
                                   _as_ind(args[2]), trunc)
    return report.text().splitlines(), report.passed


def _query_check_mv(runner: ScriptRunner, P, pairs=10):
    want(P, PresheafOnT, "presheaf")
    if isinstance(pairs, list):
        chosen = [(want(U, CellSet, "open set"), want(V, CellSet, "open set")) for U, V in pairs]
    else:
        chosen = sample_pairs(P.space, runner.ctx.rng, want_int(pairs, "pair count"))
    report = check_mv(P, chosen)
    return report.text().splitlines(), report.passed


def _query_run_suite(runner: ScriptRunner, name, seed=None):
    from .suites import run_suite

    seed = runner.ctx.seed if seed is None else want_int(seed, "seed")
    result = run_suite(str(name), runner.config.override(seed=seed))
    return result.text().splitlines(), result.passed


QUERY_HANDLERS = {
    "dim-hom": _query_dim_hom,
    "is-exact": _query_is_exact,
    "is-zero": _query_is_zero,
    "representable": _query_representable,
    "check-adjunction": _query_check_adjunction,
    "check-mv": _query_check_mv,
    "run-suite": _query_run_suite,
}


def run(script: Script, config: Optional[RunConfig] = None) -> Report:
    return ScriptRunner(config).run(script)


def run_text(text: str, config: Optional[RunConfig] = None) -> Report:
    """解析并执行；语法错误直接抛出"""
    return run(parse(text), config)
