import json

import pytest

from app.cache import FORMAT_VERSION, cache_name, load_cache, write_cache
from app.errors import ConsistencyError, InputError
from app.utils import dump_json


@pytest.mark.main
def test_cache_name():
    assert cache_name("builtin: sym 3", 3) == "builtin-sym-3-p3"


@pytest.mark.main
def test_write_cache_is_byte_identical(tmp_path):
    path, payload, (G, F, L, gamma) = write_cache("builtin:sym 3", 3, str(tmp_path))
    first = open(path, "rb").read()
    again, _, _ = write_cache("builtin:sym 3", 3, str(tmp_path))
    assert again == path
    assert open(again, "rb").read() == first
    assert payload["format_version"] == FORMAT_VERSION
    assert payload["gamma"]["order"] == gamma.gamma.order == 2
    assert len(payload["theta_hat"]) == L.n_morphisms


@pytest.mark.main
def test_load_cache_rebuilds(tmp_path):
    path, _, (G, F, L, gamma) = write_cache("builtin:sym 3", 3, str(tmp_path))
    G2, F2, L2, gamma2 = load_cache(path)
    assert G2.order == G.order
    assert L2.n_morphisms == L.n_morphisms
    assert gamma2.gamma.order == gamma.gamma.order


@pytest.mark.main
def test_tampered_cache(tmp_path):
    path, payload, _ = write_cache("builtin:sym 3", 3, str(tmp_path))
    payload["theta_hat"][1] = 1 - payload["theta_hat"][1]
    with open(path, "w") as f:
        f.write(dump_json(payload))
    with pytest.raises(ConsistencyError):
        load_cache(path)


@pytest.mark.main
def test_bad_cache_files(tmp_path):
    with pytest.raises(InputError):
        load_cache(str(tmp_path))
    path = tmp_path / "old.json"
    path.write_text(json.dumps({"format_version": 0, "group": "builtin:sym 3", "p": 3}))
    with pytest.raises(InputError):
        load_cache(str(path))
    path.write_text("{not json")
    with pytest.raises(InputError):
        load_cache(str(path))
    path.write_text(json.dumps({"format_version": FORMAT_VERSION}))
    with pytest.raises(InputError):
        load_cache(str(path))


@pytest.mark.main
def test_cache_from_a_relative_group_file(tmp_path, monkeypatch):
    groups = tmp_path / "groups"
    groups.mkdir()
    (groups / "s3.txt").write_text("(0 1)\n(0 1 2)\n")
    monkeypatch.chdir(tmp_path)
    path, payload, _ = write_cache("groups/s3.txt", 3, str(tmp_path / "cache"))
    assert payload["group"] == "groups/s3.txt"
    elsewhere = tmp_path / "elsewhere"
    elsewhere.mkdir()
    monkeypatch.chdir(elsewhere)
    G, F, L, gamma = load_cache(path)
    assert G.order == 6
    assert gamma.gamma.order == 2
