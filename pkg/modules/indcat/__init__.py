"""
Ind 范畴模块
形式滤过余极限、周期证书、Hom 的极限-余极限计算、阿贝尔结构与函子 ι、α、β
"""

from .certificate import (
    MORPHISM_RULES, PeriodCert, RULES, constant_cert, joint_rule, same_rule, settle, validate, validate_components,
)
from .objects import (
    DEFAULT_TRUNCATION, IndObject, FiniteDiagram, SeqSystem, IndMorphism, carried_certs, derive_cert,
    is_translation_invariant, map_levels, repeat_rule, zip_levels, zero_object,
)
from .colim import (
    INF, EXACT, Verdict, ColimSpace, HomColim, TowerLimit, format_dim, truncated_tag,
    hom_from_sheaf, hom_ind, is_ind_zero, level_dies, representable,
)
from .functors import (
    iota, iota_morphism, alpha, beta, beta_open, beta_closed, tilde_to_open, tilde_to_closed,
)
from .abelian import (
    METHODS, NaFixture, kernel_ind, cokernel_ind, direct_sum_ind, complex_lag, homology, is_exact,
    exactness_report, short_exact, n_a_fixture,
)

__all__ = [
    'MORPHISM_RULES', 'PeriodCert', 'RULES', 'constant_cert', 'joint_rule', 'same_rule', 'settle', 'validate',
    'validate_components',
    'DEFAULT_TRUNCATION', 'IndObject', 'FiniteDiagram', 'SeqSystem', 'IndMorphism', 'carried_certs', 'derive_cert',
    'is_translation_invariant', 'map_levels', 'repeat_rule', 'zip_levels', 'zero_object',
    'INF', 'EXACT', 'Verdict', 'ColimSpace', 'HomColim', 'TowerLimit', 'format_dim', 'truncated_tag',
    'hom_from_sheaf', 'hom_ind', 'is_ind_zero', 'level_dies', 'representable',
    'iota', 'iota_morphism', 'alpha', 'beta', 'beta_open', 'beta_closed', 'tilde_to_open', 'tilde_to_closed',
    'METHODS', 'NaFixture', 'kernel_ind', 'cokernel_ind', 'direct_sum_ind', 'complex_lag', 'homology',
    'is_exact', 'exactness_report', 'short_exact', 'n_a_fixture',
]
