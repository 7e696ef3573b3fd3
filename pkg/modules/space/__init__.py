"""
空间模块
有限 Alexandrov 偏序集、组合直线、开集与单调单元映射
"""

from .cells import Space, FinitePoset, CombLine, LINE, V, E, cell_name, point, poset_from_pairs, chart_bounds
from .opens import (
    CellSet, OpenSet, LocallyClosedSet, CellMap,
    line_set, locally_closed, whole, empty, cell_set,
    open_interval, closed_interval, closed_ray, open_ray, vertex, star, up_closure,
    compact_core, exhaustion, relatively_compact_opens,
    identity_map, translation, to_point, point_inclusion, preimage, fiber_square, open_embedding,
)

__all__ = [
    'Space', 'FinitePoset', 'CombLine', 'LINE', 'V', 'E', 'cell_name', 'point', 'poset_from_pairs',
    'chart_bounds', 'CellSet', 'OpenSet', 'LocallyClosedSet', 'CellMap', 'line_set', 'locally_closed',
    'whole', 'empty', 'cell_set', 'open_interval', 'closed_interval', 'closed_ray', 'open_ray', 'vertex',
    'star', 'up_closure', 'compact_core', 'exhaustion', 'relatively_compact_opens', 'identity_map',
    'translation', 'to_point', 'point_inclusion', 'preimage', 'fiber_square', 'open_embedding',
]
