import pytest
from hypothesis import given
from hypothesis import strategies as st

from modules.common import IndSheafError, SpaceMismatchError
from modules.space import (
    LINE, CellMap, E, V, cell_name, cell_set, closed_interval, closed_ray, compact_core, fiber_square,
    locally_closed, open_interval, point, poset_from_pairs, preimage, relatively_compact_opens, star,
    to_point, translation, up_closure, vertex, whole,
)


def chain(n=3):
    cells = [f"c{i}" for i in range(n)]
    return poset_from_pairs(cells, list(zip(cells, cells[1:])), name=f"chain{n}")


def test_cell_encoding():
    assert V(0) == 0 and E(0) == 1 and V(-1) == -2 and E(-1) == -1
    assert cell_name(V(3)) == "V3"
    assert cell_name(E(-2)) == "E-2"
    assert LINE.leq(V(0), E(0)) and LINE.leq(V(0), E(-1))
    assert not LINE.leq(E(0), V(0))
    assert LINE.up_covers(V(1)) == (E(0), E(1))


def test_poset_order_and_equality():
    P = chain(3)
    assert P.leq("c0", "c2")
    assert not P.leq("c2", "c0")
    assert P.up_covers("c0") == ("c1",)
    Q = poset_from_pairs(["c0", "c1", "c2"], [("c0", "c1"), ("c1", "c2"), ("c0", "c2")])
    assert P == Q
    assert P.up_set("c1") == frozenset({"c1", "c2"})


def test_poset_rejects_cycles_and_unknown_cells():
    with pytest.raises(IndSheafError):
        poset_from_pairs(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(IndSheafError):
        poset_from_pairs(["a"], [("a", "z")])


def test_interval_shapes():
    U = open_interval(0, 3)
    assert U.finite_cells() == [E(0), V(1), E(1), V(2), E(2)]
    assert U.is_open() and U.is_bounded()
    assert closed_interval(0, 2).is_closed()
    assert closed_ray(0).is_closed()
    assert not closed_ray(0).is_bounded()
    assert open_interval(2, 2).is_empty()


def test_open_set_rejects_non_up_sets():
    with pytest.raises(IndSheafError):
        vertex(0).as_open()


def test_closure_and_up_closure_of_vertex():
    assert vertex(0).closure() == vertex(0)
    assert up_closure(vertex(0)) == open_interval(-1, 1)
    assert star(LINE, V(0)) == open_interval(-1, 1)


@given(st.integers(-5, 5), st.integers(1, 4), st.integers(-3, 3))
def test_translation_moves_intervals(a, length, units):
    U = open_interval(a, a + length)
    assert U.translate(units) == open_interval(a + units, a + length + units)
    assert preimage(translation(units), U.translate(units)) == U


@given(st.integers(-4, 4), st.integers(1, 4))
def test_set_algebra_on_line(a, length):
    U = open_interval(a, a + length)
    assert U.union(U.complement()) == whole(LINE)
    assert U.intersection(U.complement()).is_empty()
    assert U.issubset(U.closure())
    assert U.interior() == U


def test_compact_core_of_interval():
    assert compact_core(open_interval(0, 3)) == open_interval(1, 2)
    members = list(relatively_compact_opens(open_interval(0, 3)))
    assert members[0] == open_interval(1, 2)
    assert members[-1].is_empty()


def test_relatively_compact_opens_of_line_is_increasing():
    chain_of_opens = relatively_compact_opens(whole(LINE))
    first, second = next(chain_of_opens), next(chain_of_opens)
    assert first.finite_cells() == [E(-1), V(0), E(0)]
    assert first.issubset(second)


def test_locally_closed():
    lc = locally_closed(vertex(0))
    assert lc.contains(V(0)) and not lc.contains(E(0))
    P = chain(3)
    with pytest.raises(IndSheafError):
        locally_closed(cell_set(P, ["c0", "c2"]))


def test_components():
    assert cell_set(LINE, [V(0), V(2)]).components() == 2
    assert closed_interval(0, 2).components() == 1


def test_cell_maps():
    P = chain(2)
    Q = poset_from_pairs(["x", "y"], [("x", "y")], name="Q")
    with pytest.raises(IndSheafError):
        CellMap(P, Q, "table", (("c0", "y"), ("c1", "x")))
    f = CellMap(P, Q, "table", (("c0", "x"), ("c1", "y")))
    assert f.fiber("y") == ["c1"]
    assert preimage(f, cell_set(Q, ["y"]).as_open()) == cell_set(P, ["c1"])
    assert preimage(to_point(LINE), whole(point())) == whole(LINE)
    with pytest.raises(SpaceMismatchError):
        preimage(f, whole(P))


def test_fiber_square_of_products():
    P, Q = chain(2), chain(3)
    product, f_prime, g_prime = fiber_square(to_point(P), to_point(Q))
    assert len(product.cells) == 6
    assert f_prime.target == Q and g_prime.target == P
    assert product.leq("c0|c0", "c1|c2")
