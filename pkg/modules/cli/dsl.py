#!/usr/bin/env python3
"""
脚本语言的词法与语法分析
文法是 LL(1) 的（见 README 中的文法表），解析时同时做静态作用域检查与内置函数的参数个数检查
"""

import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set, Tuple, Union

from ..common.errors import DslSyntaxError
from .builtins import BUILTINS, CONSTANTS, QUERIES, SYMBOL_FIRST

logger = logging.getLogger('Dsl')

KEYWORDS = ("let", "emit", "save", "show", "indcolim")

# 连字符后面紧跟字母时属于标识符（is-exact）；否则是减号（n-1）
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[()\[\],;:=+\-*])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "newline":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            if kind == "ident" and value in KEYWORDS:
                kind = value
            elif kind == "punct":
                kind = value
            tokens.append(Token(kind, value, line, pos - line_start + 1, pos))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos))
    return tokens


# ---- AST ----

@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Name:
    name: str
    line: int
    column: int


@dataclass(frozen=True)
class Symbol:
    """作为名字使用的裸标识符（套件名、检查名、方法名）"""
    name: str


@dataclass(frozen=True)
class ListExpr:
    items: Tuple


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple
    kwargs: Tuple[Tuple[str, object], ...]
    line: int
    column: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class IndColim:
    var: str
    body: object


Expr = Union[Num, Str, Name, Symbol, ListExpr, Call, BinOp, Neg, IndColim]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    source: str


@dataclass(frozen=True)
class Query:
    name: str
    args: Tuple
    kwargs: Tuple[Tuple[str, object], ...]
    source: str


@dataclass(frozen=True)
class Emit:
    text: str
    source: str


@dataclass(frozen=True)
class Save:
    name: str
    path: str
    source: str


@dataclass(frozen=True)
class Show:
    expr: Expr
    source: str


Statement = Union[Let, Query, Emit, Save, Show]


@dataclass
class Script:
    statements: List[Statement] = field(default_factory=list)


# ---- 解析器 ----

class Parser:
    """
    递归下降，一个记号的前瞻
    :param text: 脚本全文
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.scopes: List[Set[str]] = [set()]

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek
        return DslSyntaxError(message, tok.line, tok.column)

    def _expect(self, kind: str) -> Token:
        if self.peek.kind != kind:
            found = self.peek.text or "end of input"
            raise self._error(f"expected {kind!r}, found {found!r}")
        return self._advance()

    def _bound(self, name: str) -> bool:
        return any(name in scope for scope in self.scopes)

    # ---- 语句 ----

    def parse_script(self) -> Script:
        script = Script()
        while self.peek.kind != "eof":
            script.statements.append(self.parse_statement())
        return script

    def parse_statement(self) -> Statement:
        start = self.peek
        kind = start.kind
        if kind == "let":
            self._advance()
            name = self._expect("ident")
            if name.text in BUILTINS or name.text in QUERIES:
                raise self._error(f"{name.text!r} is a built-in name", name)
            self._expect("=")
            expr = self.parse_expr()
            self._expect(";")
            self.scopes[0].add(name.text)
            return Let(name.text, expr, self._source(start))
        if kind == "emit":
            self._advance()
            text = self._expect("string").text[1:-1]
            self._expect(";")
            return Emit(text, self._source(start))
        if kind == "save":
            self._advance()
            name = self._expect("ident")
            if not self._bound(name.text):
                raise self._error(f"unknown identifier {name.text!r}", name)
            path = self._expect("string").text[1:-1]
            self._expect(";")
            return Save(name.text, path, self._source(start))
        if kind == "show":
            self._advance()
            expr = self.parse_expr()
            self._expect(";")
            return Show(expr, self._source(start))
        if kind == "ident" and start.text in QUERIES:
            self._advance()
            self._expect("(")
            args, kwargs = self.parse_args(symbol_first=start.text in SYMBOL_FIRST)
            self._expect(")")
            self._expect(";")
            return Query(start.text, args, kwargs, self._source(start))
        raise self._error(f"a statement starts with let, emit, save, show or a query, found {start.text!r}")

    def _source(self, start: Token) -> str:
        end = self.tokens[self.pos - 1]
        return " ".join(self.text[start.offset:end.offset + len(end.text)].split())

    # ---- 表达式 ----

    def parse_expr(self) -> Expr:
        if self.peek.kind == "indcolim":
            self._advance()
            var = self._expect("ident")
            self._expect(":")
            self.scopes.append({var.text})
            try:
                body = self.parse_expr()
            finally:
                self.scopes.pop()
            return IndColim(var.text, body)
        return self.parse_sum()

    def parse_sum(self) -> Expr:
        left = self.parse_product()
        while self.peek.kind in ("+", "-"):
            op = self._advance().kind
            left = BinOp(op, left, self.parse_product())
        return left

    def parse_product(self) -> Expr:
        left = self.parse_unary()
        while self.peek.kind == "*":
            self._advance()
            left = BinOp("*", left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        if self.peek.kind == "-":
            self._advance()
            return Neg(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek
        if tok.kind == "number":
            self._advance()
            return Num(tok.text)
        if tok.kind == "string":
            self._advance()
            return Str(tok.text[1:-1])
        if tok.kind == "[":
            self._advance()
            items = []
            if self.peek.kind != "]":
                items.append(self.parse_expr())
                while self.peek.kind == ",":
                    self._advance()
                    items.append(self.parse_expr())
            self._expect("]")
            return ListExpr(tuple(items))
        if tok.kind == "(":
            self._advance()
            inner = self.parse_expr()
            self._expect(")")
            return inner
        if tok.kind == "ident":
            self._advance()
            if self.peek.kind == "(":
                return self._call(tok)
            return self._name(tok)
        found = tok.text or "end of input"
        raise self._error(f"expected an expression, found {found!r}")

    def _name(self, tok: Token) -> Expr:
        if self._bound(tok.text) or tok.text in CONSTANTS:
            return Name(tok.text, tok.line, tok.column)
        raise self._error(f"unknown identifier {tok.text!r}", tok)

    def _call(self, tok: Token) -> Call:
        if tok.text not in BUILTINS:
            raise self._error(f"unknown function {tok.text!r}", tok)
        self._expect("(")
        args, kwargs = self.parse_args()
        self._expect(")")
        builtin = BUILTINS[tok.text]
        if not builtin.min_args <= len(args) <= builtin.max_args:
            raise self._error(f"{tok.text} takes {builtin.arity_text()} arguments, got {len(args)}", tok)
        unknown = [k for k, _ in kwargs if k not in builtin.keywords]
        if unknown:
            raise self._error(f"{tok.text} has no keyword {unknown[0]!r}", tok)
        return Call(tok.text, tuple(args), tuple(kwargs), tok.line, tok.column)

    def parse_args(self, symbol_first: bool = False) -> Tuple[List, List]:
        """
        args := [arg {"," arg}]
        arg  := IDENT "=" expr | expr      （标识符后的 "=" 决定是否为关键字参数）
        """
        args, kwargs = [], []
        if self.peek.kind == ")":
            return args, kwargs
        while True:
            tok = self.peek
            if tok.kind == "ident" and self.tokens[self.pos + 1].kind == "=":
                self._advance()
                self._advance()
                kwargs.append((tok.text, self._keyword_value()))
            elif symbol_first and not args and tok.kind == "ident" and self.tokens[self.pos + 1].kind != "(":
                self._advance()
                args.append(Symbol(tok.text))
            else:
                if kwargs:
                    raise self._error("positional argument after keyword argument")
                args.append(self.parse_expr())
            if self.peek.kind != ",":
                return args, kwargs
            self._advance()

    def _keyword_value(self) -> Expr:
        tok = self.peek
        if tok.kind == "ident" and self.tokens[self.pos + 1].kind in (",", ")") and not self._bound(tok.text) \
                and tok.text not in CONSTANTS:
            self._advance()
            return Symbol(tok.text)
        return self.parse_expr()


def parse(text: str) -> Script:
    """
    解析脚本
    :param text: UTF-8 脚本文本
    :return: Script；空输入得到空脚本
    :raises DslSyntaxError: 带行列号
    """
    script = Parser(text).parse_script()
    logger.debug(f"parsed {len(script.statements)} statements")
    return script


def parse_expression(text: str, bound: Sequence[str] = ()) -> Expr:
    """单个表达式（测试与 API 使用）"""
    parser = Parser(text)
    parser.scopes[0].update(bound)
    expr = parser.parse_expr()
    parser._expect("eof")
    return expr
