import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from app.errors import DegreeMismatch, ElementCapExceeded, InputError
from app.groups import (
    all_subgroups,
    center,
    centralizer,
    check_prime,
    compose,
    cycle_string,
    double_cosets,
    generate_group,
    invert,
    is_p_centric,
    left_cosets,
    normalizer,
    p_part,
    quotient_group,
    sylow_subgroup,
    transporter,
)

SYM3 = [(1, 0, 2), (1, 2, 0)]
SYM4 = [(1, 0, 2, 3), (1, 2, 3, 0)]
ALT4 = [(1, 2, 0, 3), (0, 2, 3, 1)]


@pytest.mark.main
def test_compose_right_to_left():
    a, b = (1, 2, 0), (1, 0, 2)
    assert compose(a, b) == (2, 1, 0)
    assert compose(a, invert(a)) == (0, 1, 2)
    assert invert((1, 2, 0)) == (2, 0, 1)


@pytest.mark.main
def test_generate_group_orders_elements_from_identity():
    G = generate_group(SYM3)
    assert G.order == 6
    assert G.elements[0] == (0, 1, 2)
    for a in range(G.order):
        assert G.mul(a, G.inv(a)) == 0
        assert G.mul(0, a) == a


@pytest.mark.main
def test_mul_matches_compose():
    G = generate_group(SYM4)
    for a in range(G.order):
        for b in (1, 5, 17):
            product = compose(G.elements[a], G.elements[b])
            assert G.elements[G.mul(a, b)] == product


@pytest.mark.main
def test_generate_group_rejects_bad_input():
    with pytest.raises(DegreeMismatch):
        generate_group([(1, 0), (1, 2, 0)])
    with pytest.raises(InputError):
        generate_group([(0, 0, 1)])
    with pytest.raises(ElementCapExceeded):
        generate_group(SYM4, cap=10)


@pytest.mark.main
def test_p_part_and_primes():
    assert p_part(24, 2) == 8
    assert p_part(60, 5) == 5
    assert p_part(7, 3) == 1
    check_prime(5)
    with pytest.raises(InputError):
        check_prime(4)


@pytest.mark.main
def test_cycle_string():
    assert cycle_string((1, 2, 0, 4, 3)) == "(0 1 2)(3 4)"
    assert cycle_string((0, 1)) == "()"


@pytest.mark.main
@pytest.mark.parametrize(
    "gens, p", [(SYM3, 3), (SYM4, 2), (SYM4, 3), (ALT4, 2), (ALT4, 3)]
)
def test_sylow_order_matches_sympy(gens, p):
    G = generate_group(gens)
    S = sylow_subgroup(G, p)
    reference = PermutationGroup([Permutation(list(g)) for g in gens])
    assert S.order == reference.sylow_subgroup(p).order()
    assert S.is_p_group(p)


@pytest.mark.main
def test_subgroup_lattice_of_sym3():
    G = generate_group(SYM3)
    subgroups = all_subgroups(G.whole)
    assert [H.order for H in subgroups] == [1, 2, 2, 2, 3, 6]
    assert subgroups[0] == G.trivial
    assert subgroups[-1] == G.whole


@pytest.mark.main
def test_normalizer_centralizer_transporter():
    G = generate_group(SYM3)
    S = sylow_subgroup(G, 3)
    assert normalizer(G, S) == G.whole
    assert centralizer(G, S) == S
    assert center(S) == S
    assert len(transporter(G, S, S)) == 6
    assert is_p_centric(G, S, 3)


@pytest.mark.main
def test_cosets_partition_the_group():
    G = generate_group(SYM4)
    H = sylow_subgroup(G, 3)
    cosets = left_cosets(G, H)
    assert len(cosets) == 8
    assert cosets[0] == H.key
    assert sorted(x for c in cosets for x in c) == list(range(24))
    blocks = double_cosets(G, H, H)
    assert sum(len(b) for b in blocks) == 24


@pytest.mark.main
def test_quotient_group():
    G = generate_group(SYM4)
    S = sylow_subgroup(G, 2)
    Q = quotient_group(S, center(S))
    assert Q.order == S.order // center(S).order
