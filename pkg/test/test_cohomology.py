import numpy as np
import pytest

from app.cohomology import (
    ChainBasis,
    CochainComplex,
    SubsystemCohomology,
    check_d_squared,
    chain_count,
    cohomology,
    cup,
    stable_elements,
    unit_cocycle,
)
from app.errors import DegreeCapExceeded, InputError, NotAnAlgebra
from app.fixtures import expected
from app.gamma import make_section
from app.oracles import group_dims, subgroup_as_group

from test_helpers import constant, permutation, random_cochains


@pytest.mark.main
def test_chain_counts(e1):
    G, F, L, gamma = e1
    C = L.category
    # one object and five non-identity automorphisms
    assert [chain_count(C, n) for n in range(4)] == [1, 5, 25, 125]
    basis = ChainBasis(C, 2)
    assert len(basis) == 25
    assert basis.objects(basis.chains[0]) == [0, 0, 0]
    with pytest.raises(DegreeCapExceeded):
        ChainBasis(C, 3, cap=100)


@pytest.mark.main
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_d_squared_vanishes(n, e1):
    G, F, L, gamma = e1
    assert check_d_squared(CochainComplex(permutation(L, gamma)), n)


@pytest.mark.main
def test_constant_coefficients_of_sym3(e1):
    G, F, L, gamma = e1
    result = cohomology(CochainComplex(constant(L)), 4)
    assert result.dims == expected("E1", "group_dims")
    degrees = result.to_json()
    assert [d["degree"] for d in degrees] == [0, 1, 2, 3, 4]
    assert all(len(d["representatives"]) == d["dim"] for d in degrees)


@pytest.mark.main
def test_permutation_coefficients_give_the_sylow(e1):
    G, F, L, gamma = e1
    result = cohomology(CochainComplex(permutation(L, gamma)), 4)
    assert result.dims == group_dims(subgroup_as_group(F.S)[0], 3, 4)


@pytest.mark.main
def test_coordinates_and_coboundaries(e1):
    G, F, L, gamma = e1
    complex_ = CochainComplex(constant(L))
    result = cohomology(complex_, 3)
    for n in range(4):
        for k, rep in enumerate(result.representatives[n]):
            assert result.coordinates(n, rep).tolist() == np.eye(result.dims[n], dtype=int)[k].tolist()
    for phi in random_cochains(complex_, 2, 5):
        boundary = complex_.differential(2) @ phi % 3
        assert result.is_coboundary(3, boundary)
        assert not np.any(result.coordinates(3, boundary))


@pytest.mark.main
def test_coordinates_reject_non_cocycles(e1):
    G, F, L, gamma = e1
    complex_ = CochainComplex(constant(L))
    result = cohomology(complex_, 1)
    z = np.zeros(complex_.dim(1), dtype=np.int64)
    z[0] = 1
    with pytest.raises(InputError):
        result.coordinates(1, z)


@pytest.mark.main
def test_column_cap(e1):
    G, F, L, gamma = e1
    with pytest.raises(DegreeCapExceeded):
        cohomology(CochainComplex(constant(L)), 4, column_cap=20)


@pytest.mark.main
def test_cup_with_the_unit(e1):
    G, F, L, gamma = e1
    complex_ = CochainComplex(constant(L))
    result = cohomology(complex_, 4)
    one = unit_cocycle(complex_)
    for n in range(5):
        for rep in result.representatives[n]:
            assert np.array_equal(cup(complex_, one, 0, rep, n), rep % 3)
            assert np.array_equal(cup(complex_, rep, n, one, 0), rep % 3)
    with pytest.raises(NotAnAlgebra):
        P = CochainComplex(permutation(L, gamma))
        cup(P, np.ones(2, dtype=np.int64), 0, np.ones(2, dtype=np.int64), 0)


@pytest.mark.main
def test_transfer_of_the_full_section_is_the_identity(e1):
    G, F, L, gamma = e1
    ctx = SubsystemCohomology(gamma, constant(L), 4)
    whole = gamma.whole
    section = make_section(gamma, whole)
    for n in range(5):
        d = ctx.result(whole).dims[n]
        assert np.array_equal(ctx.res_map(whole, whole, n), np.eye(d, dtype=np.int64))
        assert np.array_equal(ctx.tr_map(section, n), np.eye(d, dtype=np.int64))


@pytest.mark.main
def test_tr_res_is_the_index(e1):
    G, F, L, gamma = e1
    ctx = SubsystemCohomology(gamma, constant(L), 4)
    H = gamma.trivial
    section = make_section(gamma, H)
    for n in range(5):
        product = ctx.tr_map(section, n) @ ctx.res_map(H, gamma.whole, n) % 3
        d = product.shape[0]
        assert np.array_equal(product, 2 * np.eye(d, dtype=np.int64))


@pytest.mark.main
def test_stable_elements_of_sym3(e1):
    G, F, L, gamma = e1
    ctx = SubsystemCohomology(gamma, constant(L), 4)
    rows = [stable_elements(ctx, gamma.trivial, n) for n in range(5)]
    assert all(row["equal"] for row in rows)
    assert [row["image_dim"] for row in rows] == expected("E1", "group_dims")


@pytest.mark.feature
def test_constant_coefficients_of_alt4(e2):
    G, F, L, gamma = e2
    result = cohomology(CochainComplex(constant(L)), 3)
    assert result.dims == expected("E2", "group_dims")[:4]


@pytest.mark.feature
def test_constant_coefficients_of_sym4(e3):
    G, F, L, gamma = e3
    result = cohomology(CochainComplex(constant(L)), 2)
    assert result.dims == expected("E3", "group_dims")[:3]
