import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q
from modules.cli import canonical_transition
from modules.common import CertificateError, IndSheafError, MVViolationError, UnsupportedShapeError
from modules.extend import (
    all_cell_functions, bounded_cell_functions, check_mv, constant_counterexample, constant_presheaf, extend,
    left_exactness, rho_view, sample_pairs, sheaf_sections, table,
)
from modules.indcat import PeriodCert, SeqSystem
from modules.linalg import from_rows
from modules.sheaf import cokernel, constant_on, constant_sheaf, hom_space, identity_morphism, kernel, natural_map
from modules.sheaf.generators import random_open, random_sheaf
from modules.space import LINE, closed_interval, closed_ray, open_interval, vertex, whole


def test_cell_functions_count_cells():
    F = all_cell_functions(LINE, Q)
    assert F.dim(open_interval(0, 3)) == 5
    r = F.restriction(open_interval(0, 3), open_interval(1, 2))
    assert (r.codomain_dim, r.domain_dim) == (1, 5)
    assert F.is_functorial(open_interval(0, 3), open_interval(1, 3), open_interval(1, 2))


def test_presheaves_live_on_bounded_opens():
    F = all_cell_functions(LINE, Q)
    with pytest.raises(UnsupportedShapeError):
        F.dim(whole(LINE))
    with pytest.raises(UnsupportedShapeError):
        F.dim(closed_interval(0, 1))


def test_bounded_cell_functions():
    F = bounded_cell_functions(LINE, Q, 2)
    assert F.dim(open_interval(0, 3)) == 2
    assert check_mv(F, sample_pairs(LINE, random.Random(3), 10)).passed
    with pytest.raises(IndSheafError):
        bounded_cell_functions(LINE, Q, -1)


def test_cell_functions_satisfy_mv(rng):
    report = check_mv(all_cell_functions(LINE, Q), sample_pairs(LINE, rng, 20))
    assert report.passed
    assert report.failing is None
    assert report.text().startswith("check-mv all-cell-functions: pass")


def test_constant_presheaf_fails_mv():
    F, report = constant_counterexample(Q)
    assert not report.passed
    assert report.failing == (open_interval(0, 1), open_interval(2, 3))
    assert "FAIL" in report.text()
    with pytest.raises(MVViolationError) as info:
        extend(F, [(open_interval(0, 1), open_interval(2, 3))])
    assert info.value.pair == (open_interval(0, 1), open_interval(2, 3))


def test_constant_presheaf_is_caught_during_evaluation():
    Fp = extend(constant_presheaf(LINE, Q))
    with pytest.raises(MVViolationError):
        Fp.dim(constant_on(LINE, Q, closed_interval(0, 3)))


def test_table_composes_along_chains():
    U, V, W = open_interval(0, 3), open_interval(1, 3), open_interval(1, 2)
    F = table(LINE, Q, {U: 1, V: 1, W: 1},
              {(U, V): from_rows(Q, [[2]]), (V, W): from_rows(Q, [[3]])})
    assert F.restriction(U, W) == from_rows(Q, [[6]])
    with pytest.raises(IndSheafError):
        F.dim(open_interval(5, 6))


def test_unknown_presheaf_kind():
    from modules.extend import PresheafOnT

    with pytest.raises(IndSheafError):
        PresheafOnT(LINE, Q, "spectral", lambda U: 0, lambda U, V: None)


def test_evaluation_counts_cells():
    Fp = extend(all_cell_functions(LINE, Q))
    U = open_interval(0, 3)
    ev = Fp.evaluate(constant_on(LINE, Q, U))
    assert ev.dim == 5
    assert ev.text() == "dim = 5 [exact]"
    assert Fp.evaluate(constant_on(LINE, Q, U)) is ev


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_evaluation_on_random_opens(seed):
    rng = random.Random(seed)
    Fp = extend(all_cell_functions(LINE, Q))
    U = random_open(LINE, rng)
    assert Fp.dim(constant_on(LINE, Q, U)) == len(U.finite_cells())


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_evaluation_is_independent_of_presentation(seed):
    rng = random.Random(seed)
    Fp = extend(all_cell_functions(LINE, Q))
    G = random_sheaf(LINE, Q, rng)
    assert Fp.dim(G, "minimal") == Fp.dim(G, "full") == Fp.dim(G, "random", seed)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_sections_extension_recovers_hom(seed):
    rng = random.Random(seed)
    G, H = random_sheaf(LINE, Q, rng), random_sheaf(LINE, Q, rng)
    Fp = extend(sheaf_sections(G))
    assert Fp.dim(H) == hom_space(H, G).dim


def test_evaluation_is_left_exact():
    Fp = extend(all_cell_functions(LINE, Q))
    phi = natural_map(LINE, Q, closed_interval(0, 2), vertex(0))
    K, incl = kernel(phi)
    C, proj = cokernel(incl)
    assert left_exactness(Fp, incl, proj).value


def test_rho_view_of_rays():
    first = constant_on(LINE, Q, closed_ray(0))
    t0 = canonical_transition(first, constant_on(LINE, Q, closed_ray(1)))
    G = SeqSystem.from_prefix([first], [t0], PeriodCert(0, 1, "shift", units=1), "rays")
    view = rho_view(G)
    assert view.dim(constant_on(LINE, Q, closed_interval(0, 1))) == 0
    with pytest.raises(UnsupportedShapeError):
        view.dim(constant_sheaf(LINE, Q))


def test_rho_view_needs_a_certificate():
    k = constant_sheaf(LINE, Q)
    X = SeqSystem(LINE, Q, lambda n: k, lambda n: identity_morphism(k), None, "bare")
    with pytest.raises(CertificateError):
        rho_view(X)
