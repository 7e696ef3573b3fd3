"""
公共模块
配置加载、日志初始化与异常类型
"""

from .errors import (
    IndSheafError, DimensionMismatchError, SpaceMismatchError, UnsupportedShapeError,
    CertificateError, NotRepresentableError, InfiniteColimitError, MVViolationError,
    PresentationError, IncompatibleCertificateError, DslSyntaxError, DslRuntimeError,
    FormatError, DslTypeError,
)
from .runtime import RunConfig, setup_logging, load_project_config, PROJECT_ROOT

__all__ = [
    'IndSheafError', 'DimensionMismatchError', 'SpaceMismatchError', 'UnsupportedShapeError',
    'CertificateError', 'NotRepresentableError', 'InfiniteColimitError', 'MVViolationError',
    'PresentationError', 'IncompatibleCertificateError', 'DslSyntaxError', 'DslRuntimeError',
    'FormatError', 'DslTypeError', 'RunConfig', 'setup_logging', 'load_project_config', 'PROJECT_ROOT',
]
