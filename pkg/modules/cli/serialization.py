#!/usr/bin/env python3
"""
对象的文本格式
S 表达式，首行是版本头 (indsheaf-format 1)，第二行是域，第三行是保存的值
序列系统连同证书一起保存，读入时按证书重建并重新验证；没有证书的系统拒绝保存
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Union

from ..common.errors import FormatError, IndSheafError
from ..indcat import FiniteDiagram, PeriodCert, SeqSystem
from ..linalg import Field, LinearMap, make_field
from ..space import LINE, CellSet, FinitePoset, OpenSet
from ..sheaf import Sheaf, SheafMorphism

logger = logging.getLogger('Serialization')

FORMAT_VERSION = 1
HEADER = "indsheaf-format"

_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()"]+))')


class Text(str):
    """带引号的字符串，与裸符号区分"""


class Sym(str):
    """裸符号"""


Node = Union[int, Fraction, Text, Sym, list]


# ---- 读写 S 表达式 ----

def _atom(text: str) -> Node:
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if re.fullmatch(r"-?\d+/\d+", text):
        return Fraction(text)
    return Sym(text)


def read_forms(text: str) -> List[Node]:
    stack: List[list] = [[]]
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormatError(f"unreadable input at offset {pos}")
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise FormatError(f"unbalanced ')' at offset {m.start(2)}")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3):
            stack[-1].append(Text(json.loads(m.group(3))))
        else:
            stack[-1].append(_atom(m.group(4)))
    if len(stack) != 1:
        raise FormatError("unbalanced '(' at end of input")
    return stack[0]


def write_form(node: Node) -> str:
    if isinstance(node, list):
        return "(" + " ".join(write_form(x) for x in node) + ")"
    if isinstance(node, Text):
        return json.dumps(str(node))
    return str(node)


def _head(node: Node, name: str) -> list:
    if not isinstance(node, list) or not node or node[0] != name:
        raise FormatError(f"expected ({name} ...), found {write_form(node)[:40]}")
    return node


def _section(node: list, name: str) -> list:
    """(name ...) 子表，按名字查找"""
    for item in node[1:]:
        if isinstance(item, list) and item and item[0] == name:
            return item
    raise FormatError(f"missing ({name} ...) in ({node[0]} ...)")


# ---- 编码 ----

class Encoder:
    """把对象编码为 S 表达式；一个文档只有一个域"""

    def __init__(self, field: Field):
        self.field = field

    def cell(self, c) -> Node:
        if isinstance(c, bool):
            raise FormatError("boolean cells are not supported")
        if isinstance(c, int):
            return c
        if isinstance(c, str):
            return Text(c)
        if isinstance(c, tuple):
            return [Sym("tuple")] + [self.cell(x) for x in c]
        raise FormatError(f"cell {c!r} has no text form")

    def space(self, space) -> Node:
        if space.is_line:
            return [Sym("line")]
        return [Sym("poset"), Text(space.name),
                [Sym("cells")] + [self.cell(c) for c in space.cells],
                [Sym("leq")] + [[self.cell(a), self.cell(b)] for a, b in space.covering_pairs(space.cells)]]

    def matrix(self, m: LinearMap) -> Node:
        rows = [[_atom(self.field.format(x)) for x in row] for row in m.entries]
        return [Sym("matrix"), m.codomain_dim, m.domain_dim] + rows

    def window(self, window) -> Node:
        if window is None:
            return [Sym("window"), Sym("none")]
        return [Sym("window"), window[0], window[1]]

    def sheaf(self, F: Sheaf) -> Node:
        if F.field != self.field:
            raise FormatError("all objects of a document share one field")
        return [Sym("sheaf"), self.space(F.space), self.window(F.window),
                [Sym("stalks")] + [[self.cell(c), d] for c, d in F.stalks],
                [Sym("gens")] + [[self.cell(a), self.cell(b), self.matrix(m)] for (a, b), m in F.gens]]

    def components(self, phi: SheafMorphism) -> list:
        return [self.window(phi.window)] + [[Sym("comp"), self.cell(c), self.matrix(m)] for c, m in phi.components]

    def cellset(self, S: CellSet) -> Node:
        out = [Sym("cellset"), self.space(S.space), Sym("open" if isinstance(S, OpenSet) else "cells")]
        if S.space.is_line:
            return out + [[Sym("left"), Sym("true" if S.left else "false")], [Sym("breaks")] + list(S.breaks)]
        return out + [[Sym("members")] + [self.cell(c) for c in S.space.sorted_cells(S.cells)]]

    def cert(self, cert: PeriodCert) -> Node:
        out = [Sym("cert"), Sym(cert.rule), cert.n0, cert.p,
               [Sym("units"), cert.units], [Sym("interval"), cert.lo, cert.hi, cert.step]]
        if cert.block is not None:
            out.append([Sym("block"), self.sheaf(cert.block)])
        if cert.base is not None:
            out.append([Sym("base"), self.sheaf(cert.base)])
        return out

    def system(self, X: SeqSystem) -> Node:
        if X.cert is None:
            raise FormatError(f"refusing to save {X.describe()}: an uncertified system has no exact form")
        need = 0 if X.cert.rule == "exhaust" else X.cert.n0 + X.cert.p
        levels = [X.level(n) for n in range(need)]
        transitions = [X.transition(n) for n in range(need)]
        return [Sym("system"), Text(X.name), self.cert(X.cert),
                [Sym("levels")] + [self.sheaf(F) for F in levels],
                [Sym("transitions")] + [[Sym("transition")] + self.components(t) for t in transitions]]

    def diagram(self, D: FiniteDiagram) -> Node:
        return [Sym("diagram"), Text(D.name), [Sym("index"), self.space(D.index)],
                [Sym("objects")] + [[self.cell(i), self.sheaf(D.objects[i])] for i in D.index.cells],
                [Sym("transitions")] + [[Sym("transition"), self.cell(i), self.cell(j)] + self.components(t)
                                        for (i, j), t in D.transitions.items()]]

    def value(self, value) -> Node:
        if isinstance(value, Sheaf):
            return self.sheaf(value)
        if isinstance(value, SeqSystem):
            return self.system(value)
        if isinstance(value, FiniteDiagram):
            return self.diagram(value)
        if isinstance(value, CellSet):
            return self.cellset(value)
        if isinstance(value, SheafMorphism):
            return [Sym("morphism"), self.sheaf(value.source), self.sheaf(value.target)] + self.components(value)
        raise FormatError(f"values of type {type(value).__name__} cannot be saved")


# ---- 解码 ----

class Decoder:
    def __init__(self, field: Field):
        self.field = field

    def cell(self, node: Node):
        if isinstance(node, list):
            _head(node, "tuple")
            return tuple(self.cell(x) for x in node[1:])
        if isinstance(node, Text):
            return str(node)
        if isinstance(node, int):
            return node
        raise FormatError(f"bad cell {write_form(node)}")

    def space(self, node: Node):
        if isinstance(node, list) and node and node[0] == "line":
            return LINE
        _head(node, "poset")
        cells = tuple(self.cell(c) for c in _section(node, "cells")[1:])
        relations = tuple((self.cell(a), self.cell(b)) for a, b in _section(node, "leq")[1:])
        return FinitePoset(cells, relations, name=str(node[1]))

    def matrix(self, node: Node) -> LinearMap:
        _head(node, "matrix")
        rows, cols = node[1], node[2]
        entries = tuple(tuple(self.field.coerce(x) for x in row) for row in node[3:])
        return LinearMap(self.field, rows, cols, entries)

    def window(self, node: Node):
        _head(node, "window")
        if node[1] == "none":
            return None
        return (node[1], node[2])

    def sheaf(self, node: Node) -> Sheaf:
        _head(node, "sheaf")
        space = self.space(node[1])
        stalks = tuple((self.cell(c), d) for c, d in _section(node, "stalks")[1:])
        gens = tuple(((self.cell(a), self.cell(b)), self.matrix(m)) for a, b, m in _section(node, "gens")[1:])
        return Sheaf(space, self.field, stalks, gens, self.window(_section(node, "window")))

    def morphism(self, source: Sheaf, target: Sheaf, parts: list) -> SheafMorphism:
        window = self.window(parts[0])
        comps = tuple((self.cell(c), self.matrix(m)) for _, c, m in parts[1:])
        return SheafMorphism(source, target, comps, window)

    def cellset(self, node: Node) -> CellSet:
        _head(node, "cellset")
        space = self.space(node[1])
        cls = OpenSet if node[2] == "open" else CellSet
        if space.is_line:
            left = _section(node, "left")[1] == "true"
            return cls(space, frozenset(), left, tuple(_section(node, "breaks")[1:]))
        return cls(space, frozenset(self.cell(c) for c in _section(node, "members")[1:]))

    def cert(self, node: Node) -> PeriodCert:
        _head(node, "cert")
        _, rule, n0, p = node[:4]
        lo, hi, step = _section(node, "interval")[1:4]
        sheaves = {item[0]: self.sheaf(item[1]) for item in node[4:]
                   if isinstance(item, list) and item[0] in ("block", "base")}
        return PeriodCert(n0, p, str(rule), units=_section(node, "units")[1], block=sheaves.get("block"),
                          base=sheaves.get("base"), lo=lo, hi=hi, step=step)

    def system(self, node: Node) -> SeqSystem:
        _head(node, "system")
        cert = self.cert(node[2])
        levels = [self.sheaf(x) for x in _section(node, "levels")[1:]]
        raw = _section(node, "transitions")[1:]
        if len(raw) > len(levels):
            raise FormatError("more transitions than stored levels")
        transitions = []
        for n, item in enumerate(raw):
            _head(item, "transition")
            target = levels[n + 1] if n + 1 < len(levels) else cert.next_level(levels[n + 1 - cert.p])
            transitions.append(self.morphism(levels[n], target, item[1:]))
        return SeqSystem.from_prefix(levels, transitions, cert, str(node[1]))

    def diagram(self, node: Node) -> FiniteDiagram:
        _head(node, "diagram")
        index = self.space(_section(node, "index")[1])
        objects = {self.cell(i): self.sheaf(F) for i, F in _section(node, "objects")[1:]}
        transitions = {}
        for item in _section(node, "transitions")[1:]:
            _head(item, "transition")
            i, j = self.cell(item[1]), self.cell(item[2])
            transitions[(i, j)] = self.morphism(objects[i], objects[j], item[3:])
        return FiniteDiagram(index, objects, transitions, str(node[1]))

    def value(self, node: Node):
        if not isinstance(node, list) or not node:
            raise FormatError("saved value must be a form")
        kind = node[0]
        if kind == "sheaf":
            return self.sheaf(node)
        if kind == "system":
            return self.system(node)
        if kind == "diagram":
            return self.diagram(node)
        if kind == "cellset":
            return self.cellset(node)
        if kind == "morphism":
            return self.morphism(self.sheaf(node[1]), self.sheaf(node[2]), node[3:])
        raise FormatError(f"unknown value kind {kind!r}")


# ---- 文档 ----

def _field_of(value) -> Field:
    if isinstance(value, CellSet):
        return None
    return value.field


def dumps(value, field: Field = None) -> str:
    """
    保存为文本
    :param value: 层、层态射、单元集合、有限图表或带证书的序列系统
    :param field: 单元集合不带域，此时用这个域写文档头
    """
    field = _field_of(value) or field or make_field("q")
    form = Encoder(field).value(value)
    field_form = [Sym("field"), Sym("q")] if field.name == "q" else [Sym("field"), Sym("fp"), field.p]
    lines = [write_form([Sym(HEADER), FORMAT_VERSION]), write_form(field_form), write_form(form)]
    return "\n".join(lines) + "\n"


def loads(text: str):
    """
    读入文本；系统按证书重建并重新验证
    :raises FormatError: 版本不符或格式错误
    """
    forms = read_forms(text)
    if len(forms) != 3:
        raise FormatError(f"a document holds a header, a field and one value; found {len(forms)} forms")
    header, field_form, value = forms
    if not isinstance(header, list) or len(header) != 2 or header[0] != HEADER:
        raise FormatError("missing (indsheaf-format N) header")
    if header[1] != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {header[1]} (this build reads {FORMAT_VERSION})")
    _head(field_form, "field")
    spec = "q" if field_form[1] == "q" else f"fp:{field_form[2]}"
    try:
        return Decoder(make_field(spec)).value(value)
    except FormatError:
        raise
    except (IndSheafError, ValueError, IndexError, KeyError, TypeError) as e:
        raise FormatError(f"malformed document: {e}") from e


def save_file(value, path: Union[str, Path], field: Field = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(value, field), encoding="utf-8")
    logger.info(f"saved {type(value).__name__} to {path}")
    return path


def load_file(path: Union[str, Path]):
    path = Path(path)
    if not path.exists():
        raise FormatError(f"no such file: {path}")
    return loads(path.read_text(encoding="utf-8"))


def same_structure(a, b) -> bool:
    """
    读回的值与原值结构相同
    系统比较名字、证书以及验证范围内的全部层和转移
    """
    if isinstance(a, SeqSystem) and isinstance(b, SeqSystem):
        if a.name != b.name or a.cert != b.cert:
            return False
        span = range(0, a.cert.n0 + 2 * a.cert.p + 2)
        return all(a.level(n) == b.level(n) and a.transition(n).equals(b.transition(n)) for n in span)
    if isinstance(a, FiniteDiagram) and isinstance(b, FiniteDiagram):
        return (a.name == b.name and a.index == b.index and a.objects == b.objects
                and a.transitions.keys() == b.transitions.keys()
                and all(a.transitions[k].equals(b.transitions[k]) for k in a.transitions))
    if isinstance(a, SheafMorphism) and isinstance(b, SheafMorphism):
        return a.equals(b)
    return type(a) is type(b) and a == b
