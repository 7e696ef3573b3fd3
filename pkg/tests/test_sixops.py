import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q, far_opens, ray_systems
from modules.cli import canonical_transition
from modules.common import SpaceMismatchError, UnsupportedShapeError
from modules.indcat import EXACT, PeriodCert, SeqSystem, alpha, hom_from_sheaf, iota, iota_morphism, is_ind_zero
from modules.sheaf import constant_on, constant_sheaf, natural_map, tensor, translate, zero_morphism
from modules.sheaf.generators import random_monotone_map, random_poset, random_sheaf
from modules.sixops import (
    base_change_check, check_alpha_ihom, check_glueing, check_inverse_direct, check_tensor_ihom,
    comparison_check, comparison_map, direct_image_ind, generator_opens, hom_presheaf, inverse_image_ind,
    nonzero_stalk_witness, projection_formula_check, restrict, stalk, tensor_ind,
)
from modules.space import (
    LINE, cell_set, closed_interval, closed_ray, open_embedding, open_interval, point, poset_from_pairs,
    star, to_point, translation, up_closure, vertex,
)


def diamond():
    return poset_from_pairs(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
                            name="diamond")


def rays():
    first = constant_on(LINE, Q, closed_ray(0))
    t0 = canonical_transition(first, constant_on(LINE, Q, closed_ray(1)))
    return SeqSystem.from_prefix([first], [t0], PeriodCert(0, 1, "shift", units=1), "rays")


def test_rays_vanish_on_bounded_opens():
    G = rays()
    v = is_ind_zero(restrict(G, open_interval(0, 3)))
    assert v.value and not v.is_truncated


def test_rays_vanish_on_opens_far_from_the_origin():
    restricted = restrict(rays(), open_interval(20, 23))
    v = is_ind_zero(restricted)
    assert v.value and v.tag == EXACT
    assert hom_from_sheaf(constant_sheaf(LINE, Q), restricted).dim == 0


@settings(max_examples=10, deadline=None)
@given(ray_systems(), far_opens())
def test_ray_systems_vanish_on_every_bounded_open(X, U):
    v = is_ind_zero(restrict(X, U))
    assert v.value and not v.is_truncated


def test_restriction_needs_an_open_set():
    with pytest.raises(UnsupportedShapeError):
        restrict(rays(), closed_interval(0, 1))


def test_stalk_of_iota_image():
    P = diamond()
    F = constant_sheaf(P, Q, 2)
    assert alpha(stalk(iota(F), "b")).stalk_dim("pt_b") == 2


def test_tensor_of_iota_images():
    P = diamond()
    F = constant_on(P, Q, cell_set(P, ["b", "d"]))
    G = constant_sheaf(P, Q, 2)
    assert alpha(tensor_ind(iota(F), iota(G))) == tensor(F, G)


def test_translation_pulls_back_exhaustions():
    F = constant_on(LINE, Q, closed_interval(0, 1))
    pulled = inverse_image_ind(translation(1), iota(F))
    assert pulled.cert.rule == "exhaust"
    assert alpha(pulled) == translate(F, -1)


def test_direct_image_to_a_point():
    F = constant_on(LINE, Q, closed_interval(0, 2))
    pushed = direct_image_ind(to_point(LINE), iota(F))
    assert alpha(pushed).stalk_dim("pt") == 1
    with pytest.raises(SpaceMismatchError):
        direct_image_ind(to_point(diamond()), iota(F))


def test_generator_opens_of_a_chain():
    P = poset_from_pairs(["x", "y"], [("x", "y")])
    assert len(generator_opens(P)) == 3
    with pytest.raises(UnsupportedShapeError):
        generator_opens(LINE)


def test_comparison_to_direct_image_is_not_iso_on_the_line():
    verdict = comparison_check(to_point(LINE), constant_sheaf(LINE, Q), to_direct=True)
    assert not verdict.value
    # 比较的目标是 f_* F（整体截面 k），f_! F 在 0 次上为 0
    F = constant_sheaf(LINE, Q)
    assert alpha(comparison_map(to_point(LINE), F, to_direct=True).target).stalk_dim("pt") == 1
    assert alpha(comparison_map(to_point(LINE), F).target).stalk_dim("pt") == 0


def test_comparison_is_iso_on_posets():
    P = diamond()
    assert comparison_check(to_point(P), constant_sheaf(P, Q)).value


def test_glueing_on_a_poset_cover():
    P = diamond()
    presheaf = hom_presheaf(iota(constant_sheaf(P, Q)), iota(constant_on(P, Q, cell_set(P, ["b", "c", "d"]))))
    cover = [star(P, "b"), star(P, "c")]
    v = check_glueing(presheaf, cover)
    assert v.value, v.detail


def test_glueing_on_the_line():
    presheaf = hom_presheaf(constant_sheaf(LINE, Q), constant_sheaf(LINE, Q, 2))
    v = check_glueing(presheaf, [open_interval(0, 2), open_interval(1, 3)])
    assert v.value, v.detail
    assert presheaf.dim(open_interval(0, 3)) == 2


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_adjunctions_on_random_posets(seed):
    rng = random.Random(seed)
    P, R = random_poset(rng, 3), random_poset(rng, 3)
    X, K, Y = (iota(random_sheaf(P, Q, rng)) for _ in range(3))
    assert check_tensor_ihom(X, K, Y).passed
    F, G = random_sheaf(P, Q, rng), random_sheaf(P, Q, rng)
    assert check_alpha_ihom(F, G).passed
    f = random_monotone_map(P, R, rng)
    if f is not None:
        H = random_sheaf(R, Q, rng)
        assert check_inverse_direct(f, iota(H), iota(F)).passed


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_projection_formula_and_base_change(seed):
    rng = random.Random(seed)
    P, R = random_poset(rng, 3), random_poset(rng, 3)
    f = random_monotone_map(P, R, rng)
    if f is None:
        return
    X = iota(random_sheaf(P, Q, rng))
    assert projection_formula_check(f, X, iota(constant_sheaf(R, Q))).passed
    U = up_closure(cell_set(R, [R.cells[-1]]))
    assert base_change_check(f, open_embedding(R, U), X).passed


def test_pulled_back_constant_has_no_global_sections():
    pulled = inverse_image_ind(to_point(LINE), iota(constant_sheaf(point(), Q)))
    cs = hom_from_sheaf(constant_sheaf(LINE, Q), pulled)
    assert cs.dim == 0 and cs.is_exact


def test_nonzero_stalk_witness():
    phi = natural_map(LINE, Q, closed_interval(0, 2), vertex(0))
    assert nonzero_stalk_witness(iota_morphism(phi)) == 0
    zero = zero_morphism(phi.source, phi.target)
    assert nonzero_stalk_witness(iota_morphism(zero)) is None
