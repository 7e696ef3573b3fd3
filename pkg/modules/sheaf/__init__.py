"""
层模块
有限维茎的可构造层、层态射、Hom 与截面、层运算和表示
"""

from .sheaf import (
    Sheaf, SheafMorphism, HomSpace, SectionSpace, assemble, build_morphism, chart_cells, common_chart,
    constant_on, constant_sheaf, generator_map, hom_kernel, hom_space, identity_morphism, projective,
    sections, zero_morphism, zero_sheaf,
)
from .operations import (
    column_morphism, coimage, cokernel, compact_sections, compact_sections_dim, direct_image, direct_image_morphism,
    direct_sum, direct_sum_many, direct_sum_morphisms, extend_by_zero, factor_through_epi,
    factor_through_mono, fibre_product, hom_sheaf, hom_sheaf_morphism, image, image_coimage_iso, injections,
    inverse_image, inverse_image_morphism, kernel, natural_map, projections, proper_direct_image, proper_to_direct,
    restrict_support, restrict_to_closed, row_morphism, support_map, tensor, tensor_morphisms,
    translate, translate_morphism,
)
from .presentation import Presentation, presentation, STRATEGIES

__all__ = [
    'Sheaf', 'SheafMorphism', 'HomSpace', 'SectionSpace', 'assemble', 'build_morphism', 'chart_cells',
    'common_chart', 'constant_on', 'constant_sheaf', 'generator_map', 'hom_kernel', 'hom_space',
    'identity_morphism', 'projective', 'sections', 'zero_morphism', 'zero_sheaf',
    'column_morphism', 'coimage', 'cokernel', 'compact_sections', 'compact_sections_dim', 'direct_image',
    'direct_image_morphism', 'direct_sum', 'direct_sum_many', 'direct_sum_morphisms', 'extend_by_zero',
    'factor_through_epi', 'factor_through_mono', 'fibre_product', 'hom_sheaf', 'hom_sheaf_morphism', 'image',
    'image_coimage_iso', 'injections', 'inverse_image', 'inverse_image_morphism', 'kernel',
    'natural_map', 'projections', 'proper_direct_image', 'proper_to_direct', 'restrict_support', 'restrict_to_closed',
    'row_morphism', 'support_map', 'tensor', 'tensor_morphisms', 'translate', 'translate_morphism',
    'Presentation', 'presentation', 'STRATEGIES',
]
