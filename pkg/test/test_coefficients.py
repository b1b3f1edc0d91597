import numpy as np
import pytest

from app.coefficients import (
    NaturalTransformation,
    change_of_section,
    exactness_probe,
    identity_transformation,
    pre_transfer,
    random_short_exact_sequence,
    restrict_system,
    right_kan_extension,
    system_from_spec,
    unit_delta,
)
from app.errors import (
    AxiomViolation,
    InputError,
    InputNotExact,
    NotAnAlgebra,
    SectionMismatch,
)
from app.gamma import make_section, parse_subgroup_spec, random_section

from test_helpers import constant, permutation


def sign_spec(L, gamma):
    return {
        "type": "explicit",
        "dims": {str(a): 1 for a in range(L.n_objects)},
        "matrices": {
            str(m): [[2 if gamma.theta_hat[m] else 1]]
            for m in range(L.n_morphisms)
        },
    }


@pytest.mark.main
def test_constant_system_is_an_algebra(e1):
    G, F, L, gamma = e1
    M = constant(L, 2)
    assert M.dims == (2,)
    assert M.check_functoriality() == []
    assert M.check_algebra() == []
    assert M.locally_constant
    x, y = np.array([1, 2]), np.array([2, 2])
    assert M.multiply(0, x, y).tolist() == [2, 1]


@pytest.mark.main
def test_permutation_system(e1):
    G, F, L, gamma = e1
    M = permutation(L, gamma)
    assert M.dims == (2,)
    assert M.check_functoriality() == []
    assert M.locally_constant
    with pytest.raises(NotAnAlgebra):
        M.multiply(0, np.array([1, 0]), np.array([0, 1]))
    assert permutation(L, gamma, gamma.whole).dims == (1,)


@pytest.mark.main
def test_restrict_system(e1):
    G, F, L, gamma = e1
    _, L_1 = gamma.subsystem(gamma.trivial)
    M_1 = restrict_system(permutation(L, gamma), L_1)
    assert M_1.category is L_1.category
    assert M_1.check_functoriality() == []
    # Aut_{L_1}(S) lies over the identity of Gamma
    assert all(np.array_equal(A, np.eye(2)) for A in M_1.mats)


@pytest.mark.main
@pytest.mark.parametrize("name", ["e1", "e2", "e4"])
def test_pre_transfer_after_delta_is_the_index(name, request):
    G, F, L, gamma = request.getfixturevalue(name)
    M = constant(L)
    for H in gamma.subgroups():
        section = make_section(gamma, H)
        M_H = M if H == gamma.whole else restrict_system(M, gamma.subsystem(H)[1])
        R = right_kan_extension(M_H, gamma, section)
        assert R.dims == (section.index,) * L.n_objects
        composite = pre_transfer(M, gamma, section, R).compose(
            unit_delta(M, gamma, section, R)
        )
        assert composite.equals(identity_transformation(M, section.index))


@pytest.mark.main
def test_change_of_section_intertwines(e4):
    G, F, L, gamma = e4
    M = constant(L)
    H = gamma.trivial
    M_H = restrict_system(M, gamma.subsystem(H)[1])
    sigma = make_section(gamma, H)
    R_sigma = right_kan_extension(M_H, gamma, sigma)
    rng = np.random.default_rng(7)
    for _ in range(3):
        tau = random_section(gamma, H, rng)
        R_tau = right_kan_extension(M_H, gamma, tau)
        phi = change_of_section(R_sigma, R_tau, M_H)
        assert phi.check_naturality() == []
        assert pre_transfer(M, gamma, sigma, R_sigma).compose(phi).equals(
            pre_transfer(M, gamma, tau, R_tau)
        )


@pytest.mark.main
def test_section_mismatch(e4):
    G, F, L, gamma = e4
    M = constant(L)
    K = parse_subgroup_spec(gamma, "index:1")
    R = right_kan_extension(
        restrict_system(M, gamma.subsystem(K)[1]), gamma, make_section(gamma, K)
    )
    with pytest.raises(SectionMismatch):
        pre_transfer(M, gamma, make_section(gamma, gamma.trivial), R)
    R_1 = right_kan_extension(
        restrict_system(M, gamma.subsystem(gamma.trivial)[1]),
        gamma,
        make_section(gamma, gamma.trivial),
    )
    with pytest.raises(SectionMismatch):
        change_of_section(R, R_1, restrict_system(M, gamma.subsystem(K)[1]))


@pytest.mark.main
def test_kan_extension_is_exact(e1):
    G, F, L, gamma = e1
    H = gamma.trivial
    M_H = constant(gamma.subsystem(H)[1])
    rng = np.random.default_rng(0)
    for _ in range(10):
        f, g = random_short_exact_sequence(M_H, M_H, rng)
        probe = exactness_probe(f, g, gamma, make_section(gamma, H))
        assert probe["exact"], probe["failures"]


@pytest.mark.main
def test_exactness_probe_rejects_non_exact_input(e1):
    G, F, L, gamma = e1
    M_H = constant(gamma.subsystem(gamma.trivial)[1])
    f, g = random_short_exact_sequence(M_H, M_H, np.random.default_rng(0))
    zero = NaturalTransformation(f.source, f.target, [np.zeros((2, 1))])
    with pytest.raises(InputNotExact):
        exactness_probe(zero, g, gamma, make_section(gamma, gamma.trivial))


@pytest.mark.main
def test_unnatural_transformation(e1):
    G, F, L, gamma = e1
    M, P = constant(L, 2), permutation(L, gamma)
    with pytest.raises(AxiomViolation):
        NaturalTransformation(M, P, [np.array([[1, 0], [0, 0]])])


@pytest.mark.main
def test_system_from_spec(e1):
    G, F, L, gamma = e1
    assert system_from_spec({"type": "constant", "dim": 3}, L, gamma, 3).dims == (3,)
    P = system_from_spec({"type": "permutation", "subgroup": "trivial"}, L, gamma, 3)
    assert P.dims == (2,)
    sign = system_from_spec(sign_spec(L, gamma), L, gamma, 3)
    assert sign.check_functoriality() == []
    assert sign.locally_constant


@pytest.mark.main
def test_system_from_spec_errors(e1):
    G, F, L, gamma = e1
    with pytest.raises(InputError):
        system_from_spec({"type": "sheaf"}, L, gamma, 3)
    spec = sign_spec(L, gamma)
    spec["matrices"] = {"1": [[2]]}
    with pytest.raises(InputError):
        system_from_spec(spec, L, gamma, 3)
    spec = sign_spec(L, gamma)
    spec["matrices"] = {
        str(m): [[2]] for m in range(L.n_morphisms) if not L.category.is_identity(m)
    }
    with pytest.raises(InputError) as e:
        system_from_spec(spec, L, gamma, 3)
    assert e.value.witness is not None
    spec = sign_spec(L, gamma)
    spec["matrices"]["1"] = [[1, 2]]
    with pytest.raises(InputError):
        system_from_spec(spec, L, gamma, 3)
