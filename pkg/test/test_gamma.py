import numpy as np
import pytest

from app.category import poset_category
from app.errors import CategoryNotConnected, CosetCapExceeded, SubgroupSpecError
from app.gamma import (
    PresentedGroup,
    SectionFrame,
    check_theta_hat,
    compose_sections,
    double_coset_section,
    enumerate_GH,
    make_section,
    parse_subgroup_spec,
    pi1_presentation,
    random_section,
    todd_coxeter,
)


def over_cosets(gamma, section):
    return all(
        int(gamma.theta_hat[s]) in coset
        for s, coset in zip(section.elements, section.cosets)
    )


@pytest.mark.main
@pytest.mark.parametrize(
    "name, order", [("e1", 2), ("e2", 3), ("e4", 4)]
)
def test_gamma_orders(name, order, request):
    G, F, L, gamma = request.getfixturevalue(name)
    assert gamma.gamma.order == order
    assert check_theta_hat(gamma) == []
    assert all(gamma.theta(x) == 0 for x in F.S.key)
    image = {int(gamma.theta_hat[m]) for m in L.aut_S()}
    assert image == set(range(order))
    # one object and S abelian: Gamma is Aut_F(S)
    assert L.n_objects == 1
    assert len(F.aut(F.S)) == order


@pytest.mark.feature
def test_gamma_of_sym4_is_trivial(e3):
    G, F, L, gamma = e3
    assert gamma.gamma.order == 1
    assert not np.any(gamma.theta_hat)


@pytest.mark.main
def test_todd_coxeter_cyclic():
    group, images = todd_coxeter(PresentedGroup((7,), ((1, 1, 1, 1),)))
    assert group.order == 4
    assert group.element_order(images[0]) == 4


@pytest.mark.main
def test_todd_coxeter_cap():
    with pytest.raises(CosetCapExceeded):
        todd_coxeter(PresentedGroup((0,), ()), coset_cap=50)


@pytest.mark.main
def test_pi1_of_a_poset_is_trivial():
    P = poset_category(3, [(0, 1), (1, 2)])
    presentation = pi1_presentation(P)
    group, _ = todd_coxeter(presentation)
    assert group.order == 1
    with pytest.raises(CategoryNotConnected):
        pi1_presentation(poset_category(2, []))


@pytest.mark.main
def test_parse_subgroup_spec(e4):
    G, F, L, gamma = e4
    assert parse_subgroup_spec(gamma, "trivial") == gamma.trivial
    assert parse_subgroup_spec(gamma, " full ") == gamma.whole
    assert [H.order for H in gamma.subgroups()] == [1, 2, 4]
    assert parse_subgroup_spec(gamma, "index:1").order == 2
    autos = gamma.aut_S()
    for i, m in enumerate(autos):
        expected = gamma.gamma.subgroup([int(gamma.theta_hat[m])])
        assert parse_subgroup_spec(gamma, f"gens:a{i}") == expected
    squared = parse_subgroup_spec(gamma, "gens:a1^2*a1^-2")
    assert squared == gamma.trivial
    for bad in ["index:3", "index:x", "gens:b1", f"gens:a{len(autos)}", "half"]:
        with pytest.raises(SubgroupSpecError):
            parse_subgroup_spec(gamma, bad)


@pytest.mark.main
def test_sections(e4):
    G, F, L, gamma = e4
    section = make_section(gamma, gamma.trivial)
    assert section.index == 4
    assert section.elements[0] == L.category.identities[L.s_index]
    assert over_cosets(gamma, section)
    rng = np.random.default_rng(0)
    for _ in range(5):
        assert over_cosets(gamma, random_section(gamma, gamma.trivial, rng))
    assert section.to_dict()["elements"] == list(section.elements)


@pytest.mark.main
def test_compose_sections(e4):
    G, F, L, gamma = e4
    K = parse_subgroup_spec(gamma, "index:1")
    outer = make_section(gamma, K)
    inner = make_section(gamma, gamma.trivial, K)
    assert inner.index == 2
    composed = compose_sections(gamma, outer, inner)
    assert composed.index == 4
    assert over_cosets(gamma, composed)
    with pytest.raises(SubgroupSpecError):
        compose_sections(gamma, inner, outer)


@pytest.mark.main
def test_double_coset_section(e4):
    G, F, L, gamma = e4
    H = parse_subgroup_spec(gamma, "index:1")
    section, blocks = double_coset_section(gamma, H, H)
    assert len(blocks) == 2
    assert section.index == 2
    assert over_cosets(gamma, section)
    assert all(b.W == H and b.V == H for b in blocks)


@pytest.mark.main
@pytest.mark.parametrize("name", ["e1", "e2", "e4"])
def test_groupoid_components_match_cosets(name, request):
    G, F, L, gamma = request.getfixturevalue(name)
    for H in gamma.subgroups():
        components = enumerate_GH(L, gamma, H, L.s_index)
        assert sorted(c["coset"] for c in components) == list(range(gamma.index(H)))


@pytest.mark.main
def test_lift_and_frame(e1):
    G, F, L, gamma = e1
    for g in range(gamma.gamma.order):
        assert int(gamma.theta_hat[gamma.lift(g)]) == g
    frame = SectionFrame(gamma, make_section(gamma, gamma.trivial))
    assert frame.index == 2
    assert frame.moved == [[0], [0]]


@pytest.mark.main
def test_subsystem_automorphisms_of_sym5(e4):
    G, F, L, gamma = e4
    H = parse_subgroup_spec(gamma, "index:1")
    assert gamma.index(H) == 2
    assert len(gamma.subsystem(H)[1].aut_S()) == 10
    sizes = [len(gamma.subsystem(K)[1].aut_S()) for K in gamma.subgroups()]
    assert sizes == [5, 10, 20]
