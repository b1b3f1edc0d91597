import pytest

from app.category import classifying_category, poset_category
from app.errors import AxiomViolation
from app.groups import generate_group


@pytest.mark.main
def test_classifying_category():
    G = generate_group([(1, 0, 2), (1, 2, 0)])
    BG = classifying_category(G)
    assert BG.n_objects == 1
    assert BG.n_morphisms == 6
    assert BG.identities == (0,)
    assert BG.check_associativity() == []
    for g in range(6):
        assert BG.compose(BG.inverse(g), g) == 0


@pytest.mark.main
def test_poset_category():
    P = poset_category(3, [(0, 1), (1, 2)])
    # arrows (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    assert P.n_morphisms == 6
    assert P.identities == (0, 3, 5)
    assert P.compose(4, 1) == 2
    assert P.is_connected()
    assert P.inverses == (0, -1, -1, 3, -1, 5)
    with pytest.raises(ValueError):
        P.compose(1, 1)


@pytest.mark.main
def test_components():
    P = poset_category(4, [(0, 1), (2, 3)])
    assert P.components() == [[0, 1], [2, 3]]
    assert not P.is_connected()


@pytest.mark.main
def test_subcategory_must_be_closed():
    P = poset_category(3, [(0, 1), (1, 2)])
    sub, embedding = P.subcategory([1])
    assert embedding.tolist() == [0, 1, 3, 5]
    assert sub.n_morphisms == 4
    with pytest.raises(AxiomViolation):
        P.subcategory([1, 4])


@pytest.mark.main
def test_out_morphisms_skip_identities():
    P = poset_category(3, [(0, 1), (1, 2)])
    assert P.out_morphisms == ((1, 2), (4,), ())
    assert P.hom(0, 2) == [2]
