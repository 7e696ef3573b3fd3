"""
精确线性代数模块
有理数域与素数域上的矩阵、核、余核与求解
"""

from .field import Field, Rationals, PrimeField, make_field
from .matrix import (
    LinearMap, Subspace, kernel, image, cokernel, solve, compose, direct_sum, tensor,
    rank, identity, zero_map, from_rows, from_columns, stack_rows, stack_columns, span,
)

__all__ = [
    'Field', 'Rationals', 'PrimeField', 'make_field',
    'LinearMap', 'Subspace', 'kernel', 'image', 'cokernel', 'solve', 'compose',
    'direct_sum', 'tensor', 'rank', 'identity', 'zero_map', 'from_rows', 'from_columns',
    'stack_rows', 'stack_columns', 'span',
]
