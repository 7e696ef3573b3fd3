#!/usr/bin/env python3
"""
异常类型
核心计算模块抛出的所有错误都继承自 IndSheafError
"""


class IndSheafError(Exception):
    """所有计算错误的基类"""


class DimensionMismatchError(IndSheafError):
    """矩阵或向量维数不匹配"""


class SpaceMismatchError(IndSheafError):
    """两个对象不在同一个空间上"""


class UnsupportedShapeError(IndSheafError):
    """拒绝处理的映射或函子形状（不做近似）"""


class CertificateError(IndSheafError):
    """周期证书无效或缺失"""


class IncompatibleCertificateError(CertificateError):
    """两个系统的证书无法组合"""


class NotRepresentableError(IndSheafError):
    """余极限不是有限描述的层"""


class InfiniteColimitError(NotRepresentableError):
    """某个茎的余极限是无穷维的"""


class MVViolationError(IndSheafError):
    """预层不满足 Mayer-Vietoris 条件"""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class PresentationError(IndSheafError):
    """无法为层构造表示（例如支撑无界）"""


class DslSyntaxError(IndSheafError):
    """脚本语法错误，带行列号"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DslRuntimeError(IndSheafError):
    """脚本执行错误，带语句序号"""

    def __init__(self, message: str, statement_index: int):
        super().__init__(f"statement {statement_index}: {message}")
        self.statement_index = statement_index


class FormatError(IndSheafError):
    """序列化格式错误或版本不匹配"""


class DslTypeError(IndSheafError):
    """内置函数的参数类型不符"""
