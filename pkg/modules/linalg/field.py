#!/usr/bin/env python3
"""
数域
Q 使用 Fraction（最简分数），F_p 使用 0..p-1 的整数；系统中没有浮点数
消元交给 sympy 的 DomainMatrix，域对象负责元素在两种表示之间的转换
"""

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from sympy import GF, QQ, isprime

from ..common.errors import IndSheafError


class Field(ABC):
    """域的公共接口，元素的运算都通过域对象完成"""

    name: str = "field"

    @abstractmethod
    def coerce(self, value: Any):
        """把 int / Fraction / str 转换为域元素"""

    @abstractmethod
    def add(self, x, y):
        pass

    @abstractmethod
    def mul(self, x, y):
        pass

    @abstractmethod
    def neg(self, x):
        pass

    @abstractmethod
    def inv(self, x):
        pass

    @abstractmethod
    def random_element(self, rng: random.Random, spread: int = 3):
        """随机元素，测试与套件使用"""

    @property
    @abstractmethod
    def domain(self):
        """对应的 sympy 域"""

    @abstractmethod
    def to_domain(self, x):
        pass

    @abstractmethod
    def from_domain(self, e):
        pass

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def is_zero(self, x) -> bool:
        return x == 0

    def format(self, x) -> str:
        return str(x)


@dataclass(frozen=True)
class Rationals(Field):
    """有理数域 Q"""

    name: str = "q"

    def coerce(self, value: Any) -> Fraction:
        return Fraction(value)

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in Q")
        return Fraction(1) / x

    def random_element(self, rng: random.Random, spread: int = 3) -> Fraction:
        return Fraction(rng.randint(-spread, spread))

    @property
    def domain(self):
        return QQ

    def to_domain(self, x):
        x = Fraction(x)
        return QQ(x.numerator, x.denominator)

    def from_domain(self, e) -> Fraction:
        return Fraction(int(e.numerator), int(e.denominator))


@dataclass(frozen=True)
class PrimeField(Field):
    """素数域 F_p，p < 2^31"""

    p: int = 2

    def __post_init__(self):
        if not (2 <= self.p < 2 ** 31) or not isprime(self.p):
            raise IndSheafError(f"F_p requires a prime p < 2^31, got {self.p}")

    @property
    def name(self) -> str:
        return f"fp:{self.p}"

    def coerce(self, value: Any) -> int:
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} is not defined in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(x, -1, self.p)

    def random_element(self, rng: random.Random, spread: int = 3) -> int:
        return rng.randrange(self.p)

    @property
    def domain(self):
        return _galois_field(self.p)

    def to_domain(self, x):
        return self.domain(int(x))

    def from_domain(self, e) -> int:
        return int(e) % self.p


@lru_cache(maxsize=None)
def _galois_field(p: int):
    # 元素取 0..p-1 的代表
    return GF(p, symmetric=False)


def make_field(spec: str) -> Field:
    """
    解析域描述
    :param spec: "q" 或 "fp:<p>"
    :return: 域对象
    """
    spec = spec.strip().lower()
    if spec in ("q", "rationals"):
        return Rationals()
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    raise IndSheafError(f"unknown field spec: {spec!r}")
