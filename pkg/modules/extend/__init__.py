"""
延拓模块
满足 Mayer-Vietoris 条件的有界开集预层 F 给出 ind-对象 F⁺，以 Hom 函子的形式求值
"""

from .presheaf import (
    KINDS, PresheafOnT, MVLine, MVReport, sheaf_sections, all_cell_functions, bounded_cell_functions,
    constant_presheaf, table, check_mv, mv_pair, pair_label, sample_pairs, constant_counterexample,
)
from .functor import Evaluation, FunctorBackedInd, RhoView, extend, rho_view, left_exactness

__all__ = [
    'KINDS', 'PresheafOnT', 'MVLine', 'MVReport', 'sheaf_sections', 'all_cell_functions',
    'bounded_cell_functions', 'constant_presheaf', 'table', 'check_mv', 'mv_pair', 'pair_label',
    'sample_pairs', 'constant_counterexample',
    'Evaluation', 'FunctorBackedInd', 'RhoView', 'extend', 'rho_view', 'left_exactness',
]
