import json

import pytest
from click.testing import CliRunner

from app import INPUT_ERROR, RESOURCE_CAP, SUCCESS, __version__
from app.fixtures import expected
from fuscoh import cli


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def payload(result):
    """The JSON document on stdout, skipping log lines around it."""
    lines = result.output.splitlines()
    start = lines.index("{")
    end = lines.index("}", start)
    return json.loads("\n".join(lines[start:end + 1]))


@pytest.mark.main
def test_version():
    result = invoke("--version")
    assert result.exit_code == SUCCESS
    assert f"fuscoh v{__version__}" in result.output


@pytest.mark.main
def test_build(tmp_path):
    result = invoke("build", "builtin:sym 3", "--p", "3", "--cache-dir", str(tmp_path))
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["order"] == 6
    assert data["sylow_order"] == 3
    assert data["morphisms"] == expected("E1", "morphisms")
    assert data["gamma_order"] == expected("E1", "gamma_order")
    assert (tmp_path / "fuscoh.log").is_file()
    again = invoke("cohomology", data["cache"], "--maxdeg", "2")
    assert again.exit_code == SUCCESS, again.output
    assert [d["dim"] for d in payload(again)["degrees"]] == [1, 0, 0]


@pytest.mark.main
def test_build_rejects_bad_generators(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("(0 1 2)\n(0 1\n")
    result = invoke("build", str(path), "--p", "3", "--cache-dir", str(tmp_path))
    assert result.exit_code == INPUT_ERROR


@pytest.mark.main
@pytest.mark.parametrize("engine", ["nerve", "resolution"])
def test_cohomology(engine):
    result = invoke("cohomology", "E1", "--engine", engine)
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["engine"] == engine
    assert [d["dim"] for d in data["degrees"]] == expected("E1", "group_dims")


@pytest.mark.main
def test_cohomology_with_permutation_coefficients():
    result = invoke(
        "cohomology", "E1", "--coeff", '{"type": "permutation", "subgroup": "trivial"}'
    )
    assert result.exit_code == SUCCESS, result.output
    assert [d["dim"] for d in payload(result)["degrees"]] == [1, 1, 1, 1, 1]


@pytest.mark.main
def test_transfer():
    result = invoke("transfer", "E1", "--maxdeg", "3")
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["index"] == 2
    assert all(row["index_times_identity"] for row in data["degrees"])
    assert [row["dim_K"] for row in data["degrees"]] == [1, 0, 0, 1]


@pytest.mark.feature
def test_transfer_in_alt4():
    result = invoke("transfer", "E2", "--maxdeg", "2")
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["index"] == 3
    assert all(row["index_times_identity"] for row in data["degrees"])


@pytest.mark.main
def test_transfer_needs_a_chain():
    result = invoke("transfer", "E4", "--H", "index:1", "--K", "trivial", "--maxdeg", "1")
    assert result.exit_code == INPUT_ERROR


@pytest.mark.main
def test_gamma():
    result = invoke("gamma", "E4")
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["order"] == 4
    assert [H["order"] for H in data["subgroups"]] == [1, 2, 4]
    assert len(data["aut_S"]) == expected("E4", "aut_S")


@pytest.mark.main
def test_subsystem():
    result = invoke("subsystem", "E1")
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["index"] == 2
    assert data["objects"] == 1
    assert data["morphisms"] == 3
    assert len(data["embedding"]) == 3


@pytest.mark.main
def test_verify_normalization():
    result = invoke("verify", "normalization", "E1", "--maxdeg", "2")
    assert result.exit_code == SUCCESS, result.output
    data = payload(result)
    assert data["properties"] == ["normalization"]
    assert all(r["status"] == "pass" for r in data["reports"])


@pytest.mark.main
@pytest.mark.parametrize(
    "args",
    [
        ["cohomology", "E1", "--H", "index:9"],
        ["cohomology", "E1", "--coeff", "[1, 2]"],
        ["cohomology", "missing-cache.json"],
        ["verify", "stable-elements", "E1", "--H", "gens:a99"],
    ],
)
def test_input_errors(args):
    assert invoke(*args).exit_code == INPUT_ERROR


@pytest.mark.main
def test_resource_cap():
    result = invoke("cohomology", "E1", "--maxdeg", "6")
    assert result.exit_code == RESOURCE_CAP
