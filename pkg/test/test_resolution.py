import pytest

from app.cohomology import CochainComplex, cohomology
from app.fixtures import expected
from app.resolution import FreeModule, Resolution, resolution_dims

from test_helpers import constant, permutation


@pytest.mark.main
def test_free_module_of_a_single_object(e1):
    G, F, L, gamma = e1
    P = FreeModule(L.category, [0, 0])
    assert P.rank == 2
    assert P.dim(0) == 2 * L.n_morphisms


@pytest.mark.main
def test_resolution_covers_the_constant_functor(e1):
    G, F, L, gamma = e1
    R = Resolution(L.category, 3, 2)
    assert R.modules[0].rank == L.n_objects


@pytest.mark.main
def test_resolution_agrees_with_the_nerve_on_sym3(e1):
    G, F, L, gamma = e1
    M = constant(L)
    assert resolution_dims(L.category, M, 4) == expected("E1", "group_dims")
    P = permutation(L, gamma)
    assert resolution_dims(L.category, P, 3) == cohomology(CochainComplex(P), 3).dims


@pytest.mark.feature
@pytest.mark.parametrize("name, fixture, maxdeg", [("E2", "e2", 4), ("E3", "e3", 2), ("E4", "e4", 4)])
def test_resolution_matches_the_registry(name, fixture, maxdeg, request):
    G, F, L, gamma = request.getfixturevalue(fixture)
    dims = resolution_dims(L.category, constant(L), maxdeg)
    assert dims == expected(name, "group_dims")[: maxdeg + 1]
