"""
测试公共夹具
域、固定种子的随机数与 hypothesis 策略（矩阵、射线系统、远处的开集）
"""

import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from modules.indcat.generators import ray_sequence, ray_system  # noqa: E402
from modules.linalg import LinearMap, PrimeField, Rationals  # noqa: E402
from modules.space import open_interval  # noqa: E402

Q = Rationals()
F5 = PrimeField(5)


@pytest.fixture
def q():
    return Q


@pytest.fixture
def f5():
    return F5


@pytest.fixture(params=["q", "fp:5"])
def field(request):
    return Q if request.param == "q" else F5


@pytest.fixture
def rng():
    return random.Random(20261017)


@st.composite
def matrices(draw, field=Q, max_dim=4, rows=None, cols=None):
    """小整数元素的矩阵，行列数可固定"""
    r = draw(st.integers(0, max_dim)) if rows is None else rows
    c = draw(st.integers(0, max_dim)) if cols is None else cols
    entries = tuple(
        tuple(field.coerce(draw(st.integers(-3, 3))) for _ in range(c)) for _ in range(r))
    return LinearMap(field, r, c, entries)


@st.composite
def composable(draw, field=Q, max_dim=4):
    """(g, f)，g∘f 有定义"""
    f = draw(matrices(field, max_dim))
    g = draw(matrices(field, max_dim, cols=f.codomain_dim))
    return g, f


offsets = st.lists(st.integers(-3, 3), min_size=1, max_size=3).map(sorted)


@st.composite
def ray_systems(draw, field=Q):
    """平移证书的射线系统 "lim" ⊕ k_[n+o, ∞)"""
    return ray_system(field, draw(offsets))


@st.composite
def ray_sequences(draw, field=Q):
    """射线系统之间分裂的短正合列 (incl, proj)"""
    return ray_sequence(field, draw(offsets), draw(offsets))


@st.composite
def far_opens(draw):
    """直线上离原点可能很远的开区间"""
    a = draw(st.integers(-60, 60))
    return open_interval(a, a + draw(st.integers(1, 4)))
