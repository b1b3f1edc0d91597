import pytest

from app.errors import InputError
from app.fixtures import FIXTURES, expected, fixture, load_registry

from test_helpers import rel_path


@pytest.mark.main
def test_fixture_lookup():
    assert fixture("E3").p == 2
    with pytest.raises(InputError):
        fixture("E9")


@pytest.mark.main
@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_registry_entries_name_their_oracle(name):
    registry = load_registry(name, rel_path("fixtures"))
    assert {"gamma_order", "objects", "morphisms", "aut_S", "group_dims"} <= set(registry)
    for entry in registry.values():
        assert entry["oracle"]
        assert entry["command"] == f"fuscoh verify oracles {name} --regen-oracles"


@pytest.mark.main
def test_missing_registry(tmp_path):
    assert load_registry("E1", str(tmp_path)) == {}
    with pytest.raises(InputError):
        expected("E1", "group_dims", str(tmp_path))
