import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F5, Q, ray_sequences
from modules.cli import canonical_transition
from modules.common import (
    CertificateError, IndSheafError, InfiniteColimitError, NotRepresentableError, UnsupportedShapeError,
)
from modules.indcat import (
    EXACT, INF, ColimSpace, FiniteDiagram, IndMorphism, PeriodCert, SeqSystem, alpha, beta, cokernel_ind,
    constant_cert, derive_cert, exactness_report, format_dim, hom_from_sheaf, hom_ind, iota, iota_morphism,
    is_ind_zero, kernel_ind, n_a_fixture, representable, short_exact, truncated_tag,
)
from modules.indcat.generators import nilpotent_rays, ray_sequence, ray_system
from modules.linalg import LinearMap
from modules.sheaf import (
    build_morphism, cokernel, constant_on, constant_sheaf, hom_space, identity_morphism, natural_map,
    zero_morphism, zero_sheaf,
)
from modules.sheaf.generators import random_poset, random_sheaf
from modules.space import LINE, cell_set, closed_ray, point, poset_from_pairs, whole


def powers_of_k(field=Q):
    """"lim" k^n on a point"""
    pt = point()
    k = constant_sheaf(pt, field)
    return SeqSystem(pt, field, lambda n: constant_sheaf(pt, field, n),
                     lambda n: canonical_transition(constant_sheaf(pt, field, n), constant_sheaf(pt, field, n + 1)),
                     PeriodCert(0, 1, "block", block=k), "k^n")


def rays(field=Q):
    """"lim" k_[n, inf)"""
    first = constant_on(LINE, field, closed_ray(0))
    t0 = canonical_transition(first, constant_on(LINE, field, closed_ray(1)))
    return SeqSystem.from_prefix([first], [t0], PeriodCert(0, 1, "shift", units=1), "rays")


def dying(field=Q):
    """k, k, 0, 0, ...：第 1 个转移为零"""
    pt = point()
    k, z = constant_sheaf(pt, field), zero_sheaf(pt, field)

    def level(n):
        return k if n < 2 else z

    def transition(n):
        if n == 0:
            return identity_morphism(k)
        if n == 1:
            return zero_morphism(k, z)
        return identity_morphism(z)

    return SeqSystem(pt, field, level, transition, None, "dying")


def test_certificate_shapes():
    with pytest.raises(CertificateError):
        PeriodCert(0, 2, "constant")
    with pytest.raises(CertificateError):
        PeriodCert(0, 1, "shift")
    with pytest.raises(CertificateError):
        PeriodCert(0, 1, "block")
    with pytest.raises(CertificateError):
        PeriodCert(0, 1, "spiral")
    with pytest.raises(CertificateError):
        PeriodCert(-1, 1, "constant")
    assert PeriodCert(2, 1, "shift", units=1).cert_id == "shift(n0=2,p=1,units=1)"
    assert constant_cert(3).cert_id == "constant(n0=3,p=1)"


def test_infinite_hom_is_certified():
    X = powers_of_k()
    cs = hom_from_sheaf(constant_sheaf(point(), Q), X)
    assert cs.dim == INF and not cs.is_finite
    assert cs.tag == "certified:block(n0=0,p=1,block=1)"
    assert cs.dim_text() == "inf [certified:block(n0=0,p=1,block=1)]"


def test_infinite_colimit_is_not_representable():
    X = powers_of_k(F5)
    v = representable(X)
    assert not v.value and v.tag == EXACT
    with pytest.raises(InfiniteColimitError):
        alpha(X)
    assert not is_ind_zero(X).value


def test_wrong_certificate_is_rejected():
    pt = point()
    k = constant_sheaf(pt, Q)
    with pytest.raises(CertificateError):
        SeqSystem(pt, Q, lambda n: k, lambda n: identity_morphism(k), PeriodCert(0, 1, "block", block=k))


def test_prefix_must_cover_the_certificate():
    first = constant_on(LINE, Q, closed_ray(0))
    with pytest.raises(CertificateError):
        SeqSystem.from_prefix([first], [], PeriodCert(2, 1, "shift", units=1))


def test_rays_have_one_global_section():
    G = rays()
    assert G.level(3) == constant_on(LINE, Q, closed_ray(3))
    cs = hom_from_sheaf(constant_sheaf(LINE, Q), G)
    assert cs.dim == 1 and cs.is_exact
    assert cs.dim_text() == "1 [exact]"


def test_derive_cert_only_settles_candidates():
    X = dying()
    assert derive_cert(X) is None
    assert derive_cert(X, [constant_cert(0)]) is None
    assert derive_cert(X, [constant_cert(2)]) == constant_cert(2)
    X.cert = derive_cert(X, [constant_cert(2)])
    v = is_ind_zero(X)
    assert v.value and v.tag == EXACT
    assert representable(X).witness.is_zero()


def test_uncertified_verdicts_are_truncated():
    X = dying()
    v = is_ind_zero(X, truncation=8)
    assert v.value and v.tag == truncated_tag(8)
    with pytest.raises(NotRepresentableError):
        alpha(X)


def test_format_dim():
    assert format_dim(INF) == "inf"
    assert format_dim(3) == "3"


def test_finite_diagram_needs_a_maximum():
    P = poset_from_pairs(["a", "b"], [])
    k = constant_sheaf(P, Q)
    with pytest.raises(IndSheafError):
        FiniteDiagram(P, {"a": k, "b": k}, {})


def test_chain_diagram_colimit_is_top_object():
    pt = point()
    k = constant_sheaf(pt, Q)
    D = FiniteDiagram.chain([k, constant_sheaf(pt, Q, 2)], [canonical_transition(k, constant_sheaf(pt, Q, 2))])
    assert D.is_one_object()
    assert alpha(D).stalk_dim("pt") == 2


def test_iota_on_the_line_is_an_exhaustion():
    F = constant_sheaf(LINE, Q)
    X = iota(F)
    assert X.cert.rule == "exhaust"
    assert X.level(0).has_bounded_support()
    assert alpha(X) == F
    assert representable(X).value


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_iota_is_fully_faithful_on_posets(seed):
    rng = random.Random(seed)
    P = random_poset(rng, 4)
    F, G = random_sheaf(P, Q, rng), random_sheaf(P, Q, rng)
    assert alpha(iota(F)) == F
    assert hom_ind(iota(F), iota(G)).dim == hom_space(F, G).dim


def test_beta_of_projective_on_a_poset():
    P = poset_from_pairs(["x", "y"], [("x", "y")])
    F = constant_sheaf(P, Q)
    B = beta(F)
    assert alpha(B).stalk_dim("x") == 1 and alpha(B).stalk_dim("y") == 1


def test_kernel_and_cokernel_of_an_open_inclusion():
    P = poset_from_pairs(["x", "y"], [("x", "y")])
    phi = iota_morphism(natural_map(P, Q, cell_set(P, ["y"]), whole(P)))
    K, _ = kernel_ind(phi)
    assert is_ind_zero(K).value
    C, proj = cokernel_ind(phi)
    assert alpha(C).stalk_dim("x") == 1 and alpha(C).stalk_dim("y") == 0
    assert short_exact(phi, proj).value
    verdicts = exactness_report(phi, proj)
    assert all(v.value for v in verdicts.values())


def test_non_exact_sequence():
    pt = point()
    k = constant_sheaf(pt, Q)
    zero = iota_morphism(zero_morphism(k, k))
    ident = iota_morphism(identity_morphism(k), zero.target)
    # k -0-> k -id-> k: 中间的同调是 ker(id)/im(0) = 0，但 0 不是单射
    assert not short_exact(zero, ident).value


def test_ind_morphism_compatibility_is_checked():
    X = powers_of_k()

    def component(n):
        src, tgt = X.level(n), X.level(n)
        return build_morphism(src, tgt, lambda c: identity_morphism(src).component(c).scale(Q.coerce(n + 1)))

    with pytest.raises(IndSheafError):
        IndMorphism(X, X, component)
    assert IndMorphism.identity(X).equals(IndMorphism.identity(X))


def test_n_a_is_not_zero():
    fixture = n_a_fixture(0, Q)
    assert not is_ind_zero(fixture.N).value
    assert short_exact(fixture.inclusion, fixture.projection).value


def test_cokernel_of_identity_is_zero():
    F = constant_on(LINE, Q, closed_ray(0))
    C, q = cokernel(identity_morphism(F))
    assert C.is_zero()
    assert q.is_epi()


def test_block_certificate_needs_a_nonzero_block():
    pt = point()
    with pytest.raises(CertificateError):
        PeriodCert(0, 1, "block", block=zero_sheaf(pt, Q))


def test_colimit_rank_accumulates_over_periods():
    # 每个周期的转移秩为 1，但两次之后为零
    N = LinearMap(Q, 2, 2, ((Q.coerce(0), Q.coerce(0)), (Q.coerce(1), Q.coerce(0))))
    cs = ColimSpace(Q, lambda n: 2, lambda n: N, PeriodCert(0, 1, "periodic"))
    assert cs.dim == 0 and cs.is_exact
    assert cs.ranks == [0, 0, 0]


def _on_point(field, entries):
    pt = point()
    k2 = constant_sheaf(pt, field, 2)
    m = LinearMap(field, 2, 2, tuple(tuple(field.coerce(x) for x in row) for row in entries))
    return k2, build_morphism(k2, k2, lambda c: m)


def test_periodic_system_is_represented_by_the_stable_image():
    k2, t = _on_point(Q, ((1, 0), (0, 0)))
    X = SeqSystem(point(), Q, lambda n: k2, lambda n: t, PeriodCert(0, 1, "periodic"), "projector")
    v = representable(X)
    assert v.value and v.tag == EXACT
    assert v.witness.stalk_dim("pt") == 1
    assert not is_ind_zero(X).value
    assert hom_from_sheaf(constant_sheaf(point(), Q), X).dim == 1


def test_nilpotent_periodic_system_is_zero():
    k2, t = _on_point(F5, ((0, 0), (1, 0)))
    X = SeqSystem(point(), F5, lambda n: k2, lambda n: t, PeriodCert(0, 1, "periodic"), "nilpotent")
    v = is_ind_zero(X)
    assert v.value and v.tag == EXACT
    assert representable(X).witness.is_zero()


def test_nilpotent_rays_have_no_sections():
    X = nilpotent_rays(Q)
    cs = hom_from_sheaf(constant_sheaf(LINE, Q), X)
    assert cs.dim == 0 and cs.is_exact
    v = is_ind_zero(X)
    assert v.value and v.tag == EXACT


def test_rays_are_not_representable():
    X = ray_system(Q, [0, 2])
    assert not is_ind_zero(X).value
    v = representable(X)
    assert not v.value and v.tag == EXACT


def test_beta_is_not_defined_on_the_line():
    with pytest.raises(UnsupportedShapeError):
        beta(constant_sheaf(LINE, Q))


def test_split_ray_sequence_is_exactly_short_exact():
    incl, proj = ray_sequence(Q, [0], [-1, 2])
    v = short_exact(incl, proj)
    assert v.value and v.tag == EXACT
    verdicts = exactness_report(incl, proj)
    assert len({v.value for v in verdicts.values()}) == 1


@settings(max_examples=10, deadline=None)
@given(ray_sequences())
def test_ray_sequences_are_short_exact(sequence):
    incl, proj = sequence
    v = short_exact(incl, proj)
    assert v.value and not v.is_truncated
