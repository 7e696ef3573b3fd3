"""
六运算模块
Ind 层上的 ⊗、ihom、f^{-1}、f_*、f_!!、限制、Hom 预层，以及伴随、投影公式与基变换的检查
"""

from .functors import (
    tensor_ind, ihom_ind, restrict, inverse_image_ind, stalk, direct_image_ind, proper_direct_image_ind,
)
from .presheaf import HomPresheaf, hom_presheaf, check_glueing
from .checks import (
    DimLine, CheckReport, generator_opens, compare_on_opens,
    check_tensor_ihom, check_inverse_direct, check_alpha_iota, check_beta_alpha, check_alpha_ihom,
    check_tensor_inverse, projection_formula_check, base_change_check,
    comparison_map, comparison_check, nonzero_stalk_witness,
)

__all__ = [
    'tensor_ind', 'ihom_ind', 'restrict', 'inverse_image_ind', 'stalk', 'direct_image_ind',
    'proper_direct_image_ind', 'HomPresheaf', 'hom_presheaf', 'check_glueing',
    'DimLine', 'CheckReport', 'generator_opens', 'compare_on_opens',
    'check_tensor_ihom', 'check_inverse_direct', 'check_alpha_iota', 'check_beta_alpha', 'check_alpha_ihom',
    'check_tensor_inverse', 'projection_formula_check', 'base_change_check',
    'comparison_map', 'comparison_check', 'nonzero_stalk_witness',
]
