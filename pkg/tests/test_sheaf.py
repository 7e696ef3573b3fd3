import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q
from modules.common import IndSheafError, PresentationError
from modules.linalg import from_rows, identity
from modules.sheaf import (
    Sheaf, assemble, cokernel, constant_on, constant_sheaf, direct_image, direct_sum, hom_space,
    identity_morphism, inverse_image, kernel, natural_map, presentation, projective, sections, tensor,
    translate, zero_morphism,
)
from modules.sheaf.generators import random_morphism, random_poset, random_sheaf
from modules.space import (
    LINE, E, V, closed_interval, open_interval, point, poset_from_pairs, to_point, vertex, whole,
)


def diamond():
    return poset_from_pairs(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                            name="diamond")


def test_window_is_normalized():
    F = constant_on(LINE, Q, closed_interval(0, 2))
    assert F.window == (E(-1), E(2))
    wide = assemble(LINE, Q, F.stalk_dim, F.gen, (-9, 9))
    assert wide == F
    assert constant_sheaf(LINE, Q).window == (-1, -1)
    assert constant_sheaf(LINE, Q, 2).stalk_dim(V(100)) == 2


def test_line_sheaf_needs_edge_window():
    with pytest.raises(IndSheafError):
        Sheaf(LINE, Q, ((0, 1),), (), (0, 0))


def test_poset_sheaf_must_commute():
    P = diamond()

    def gen_of(a, b):
        return from_rows(Q, [[2]]) if (a, b) == ("c", "d") else from_rows(Q, [[1]])

    with pytest.raises(IndSheafError):
        assemble(P, Q, lambda c: 1, gen_of)


def test_poset_sheaf_needs_every_generization():
    P = diamond()
    with pytest.raises(IndSheafError):
        Sheaf(P, Q, tuple((c, 1) for c in P.cells), ())


def test_transition_composes_along_chains():
    P = poset_from_pairs(["x", "y", "z"], [("x", "y"), ("y", "z")])
    F = assemble(P, Q, lambda c: 1, lambda a, b: from_rows(Q, [[2]]))
    assert F.transition("x", "z") == from_rows(Q, [[4]])


def test_hom_from_projective_is_stalk():
    F = constant_sheaf(LINE, Q, 2)
    assert hom_space(projective(LINE, Q, V(0)), F).dim == 2
    G = constant_on(LINE, Q, closed_interval(0, 2))
    assert hom_space(projective(LINE, Q, E(3)), G).dim == 0


def test_global_sections_of_supports():
    kX = constant_sheaf(LINE, Q)
    assert hom_space(kX, constant_on(LINE, Q, closed_interval(0, 2))).dim == 1
    assert hom_space(kX, constant_on(LINE, Q, open_interval(0, 3))).dim == 0
    assert hom_space(constant_on(LINE, Q, open_interval(0, 3)), kX).dim == 1


def test_hom_counts_components_on_posets():
    P = poset_from_pairs(["p", "q"], [])
    assert hom_space(constant_sheaf(P, Q), constant_sheaf(P, Q)).dim == 2
    assert hom_space(constant_sheaf(diamond(), Q), constant_sheaf(diamond(), Q)).dim == 1


def test_sections_and_restriction():
    kX = constant_sheaf(LINE, Q)
    big = sections(kX, open_interval(0, 3))
    small = sections(kX, open_interval(1, 2))
    assert big.dim == small.dim == 1
    assert big.restriction(small).is_iso()
    with pytest.raises(IndSheafError):
        small.restriction(big)


def test_kernel_of_closed_restriction():
    phi = natural_map(LINE, Q, closed_interval(0, 2), vertex(0))
    assert phi.is_epi()
    K, incl = kernel(phi)
    assert K.stalk_dim(V(0)) == 0
    assert K.stalk_dim(E(0)) == 1 and K.stalk_dim(V(2)) == 1
    assert incl.is_mono()
    C, _ = cokernel(phi)
    assert C.is_zero()


def test_cokernel_of_open_inclusion():
    phi = natural_map(LINE, Q, open_interval(0, 3), whole(LINE))
    assert phi.is_mono()
    C, proj = cokernel(phi)
    assert C.stalk_dim(V(0)) == 1 and C.stalk_dim(E(1)) == 0
    assert proj.after(phi).is_zero()


def test_sum_and_tensor_dimensions():
    F = constant_on(LINE, Q, closed_interval(0, 2), 2)
    G = constant_on(LINE, Q, open_interval(1, 4))
    assert direct_sum(F, G).stalk_dim(V(2)) == 3
    assert tensor(F, G).stalk_dim(V(2)) == 2
    assert tensor(F, G).stalk_dim(V(0)) == 0


def test_translate_shifts_supports():
    F = constant_on(LINE, Q, closed_interval(0, 1))
    assert translate(F, 2) == constant_on(LINE, Q, closed_interval(2, 3))


def test_inverse_and_direct_image_to_point():
    pt = point()
    assert inverse_image(to_point(LINE), constant_sheaf(pt, Q, 2)) == constant_sheaf(LINE, Q, 2)
    pushed = direct_image(to_point(LINE), constant_on(LINE, Q, closed_interval(0, 2)))
    assert pushed.stalk_dim("pt") == 1


def test_presentation_of_closed_interval():
    F = constant_on(LINE, Q, closed_interval(0, 2))
    p = presentation(F, "minimal")
    assert p.generator_cells() == [V(0), V(1), V(2)]
    assert p.epsilon.is_epi()
    assert p.epsilon.after(p.d1).is_zero()
    assert len(presentation(F, "full").generators) == 5


def test_presentation_rejects_unbounded_support():
    with pytest.raises(PresentationError):
        presentation(constant_sheaf(LINE, Q))
    with pytest.raises(PresentationError):
        presentation(constant_on(LINE, Q, vertex(0)), "greedy")


def test_presentation_of_chain_constant_sheaf():
    P = poset_from_pairs(["x", "y"], [("x", "y")])
    p = presentation(constant_sheaf(P, Q))
    assert p.generator_cells() == ["x"]
    assert p.relations == ()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_morphisms_compose_with_identity(seed):
    rng = random.Random(seed)
    P = random_poset(rng, 4)
    F, G = random_sheaf(P, Q, rng), random_sheaf(P, Q, rng)
    phi = random_morphism(F, G, rng)
    assert phi.after(identity_morphism(F)).equals(phi)
    assert identity_morphism(G).after(phi).equals(phi)
    assert zero_morphism(F, G).add(phi).equals(phi)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_random_presentations_are_exact(seed):
    rng = random.Random(seed)
    space = LINE if seed % 2 else random_poset(rng, 4)
    F = random_sheaf(space, Q, rng)
    for strategy in ("minimal", "full", "random"):
        p = presentation(F, strategy, seed)
        assert p.epsilon.is_epi()
        assert p.epsilon.after(p.d1).is_zero()


def test_identity_morphism_is_iso():
    F = constant_on(LINE, Q, closed_interval(-1, 1), 2)
    assert identity_morphism(F).is_iso()
    assert identity_morphism(F).component(V(0)) == identity(Q, 2)
