import pytest

from app.errors import UnknownProperty
from app.fixtures import expected, load_registry, write_registry
from app.gamma import parse_subgroup_spec
from app.verification import (
    PROPERTIES,
    Session,
    oracle_values,
    registry_report,
    run_property,
)

from test_helpers import assert_passed, constant, permutation


def session_for(built, maxdeg=2, trials=5, M=None, **kwargs):
    G, F, L, gamma = built
    M = M if M is not None else constant(L)
    return Session(G, F, L, gamma, M, maxdeg, trials=trials, **kwargs)


@pytest.mark.main
def test_every_property_is_registered():
    assert sorted(PROPERTIES) == [
        "double-coset",
        "frobenius",
        "gamma-surjectivity",
        "geometric-comparison",
        "kan-exactness",
        "linking-axioms",
        "normalization",
        "oracles",
        "saturation",
        "section-independence",
        "shapiro",
        "stable-elements",
        "transitivity",
    ]
    assert all(statement for statement, _ in PROPERTIES.values())


@pytest.mark.main
@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_properties_hold_for_sym3(name, e1):
    reports = run_property(name, session_for(e1, fixture="E1"))
    assert reports
    assert_passed(reports)
    assert all(r.to_dict()["status"] == "pass" for r in reports)


@pytest.mark.main
def test_passing_report_has_no_witness(e1):
    session = session_for(e1)
    [r] = run_property("stable-elements", session)
    assert r.witness is None
    assert r.to_dict()["details"]["failures"] == 0


@pytest.mark.main
def test_unknown_property(e1):
    with pytest.raises(UnknownProperty):
        run_property("sheaf-condition", session_for(e1))


@pytest.mark.feature
@pytest.mark.parametrize("name", ["normalization", "transitivity", "double-coset", "section-independence"])
def test_chain_of_subgroups_in_sym5(name, e4):
    session = session_for(e4, trials=100)
    G, F, L, gamma = e4
    H = gamma.trivial
    K = parse_subgroup_spec(gamma, "index:1")
    assert_passed(run_property(name, session, H=H, K=K))


@pytest.mark.feature
def test_frobenius_up_to_degree_four(e1):
    session = session_for(e1, maxdeg=4, trials=100)
    [r] = run_property("frobenius", session)
    assert_passed([r])
    # classes in degrees 0, 3, 4 of L against every degree of L_1
    assert r.details["pairs"] == 8


@pytest.mark.feature
def test_frobenius_in_sym5(e4):
    [r] = run_property("frobenius", session_for(e4, maxdeg=2))
    assert_passed([r])
    assert r.details["pairs"] == 3


@pytest.mark.feature
@pytest.mark.parametrize("name", ["section-independence", "double-coset"])
def test_transfer_identities_up_to_degree_four(name, e1):
    session = session_for(e1, maxdeg=4, trials=100)
    reports = run_property(name, session)
    assert_passed(reports)
    if name == "double-coset":
        assert reports[0].details["trials"] == 100
    else:
        assert reports[0].details["sections"] == 5


@pytest.mark.feature
@pytest.mark.parametrize(
    "name, maxdeg, dims", [("e1", 4, [1, 0, 0, 1, 1]), ("e2", 3, [1, 0, 1, 2])]
)
def test_stable_elements_of_the_trivial_subsystem(name, maxdeg, dims, request):
    session = session_for(request.getfixturevalue(name), maxdeg=maxdeg)
    [r] = run_property("stable-elements", session)
    assert_passed([r])
    assert r.details["stable_dims"] == r.details["image_dims"]
    assert r.details["image_dims"] == dims


@pytest.mark.feature
@pytest.mark.parametrize("name", ["e1", "e2", "e4"])
@pytest.mark.parametrize("coefficients", ["constant", "permutation"])
def test_shapiro_for_every_subgroup(name, coefficients, request):
    built = request.getfixturevalue(name)
    G, F, L, gamma = built
    M = constant(L) if coefficients == "constant" else permutation(L, gamma)
    reports = run_property("shapiro", session_for(built, maxdeg=4, M=M))
    assert len(reports) == len(gamma.subgroups())
    assert_passed(reports)


@pytest.mark.main
def test_registry_report(tmp_path, e1):
    session = session_for(e1, maxdeg=4, fixture="E1", fixtures_dir=str(tmp_path))
    entries = oracle_values(session)
    assert entries["group_dims"]["value"] == expected("E1", "group_dims")
    assert entries["gamma_order"]["command"] == "fuscoh verify oracles E1 --regen-oracles"
    write_registry("E1", entries, str(tmp_path))
    assert registry_report("E1", entries, str(tmp_path)).passed
    entries["aut_S"]["value"] = 7
    r = registry_report("E1", entries, str(tmp_path))
    assert not r.passed
    assert r.witness == {"key": "aut_S", "stored": 6, "computed": 7}


@pytest.mark.main
def test_registry_report_needs_every_degree(tmp_path, e1):
    stored = oracle_values(session_for(e1, maxdeg=4, fixture="E1"))
    write_registry("E1", stored, str(tmp_path))
    fresh = oracle_values(session_for(e1, maxdeg=2, fixture="E1"))
    assert registry_report("E1", fresh, str(tmp_path), degrees=3).passed
    r = registry_report("E1", fresh, str(tmp_path), degrees=5)
    assert not r.passed
    assert r.witness == {
        "key": "group_dims",
        "reason": "fewer than 5 degrees",
        "stored": 5,
        "computed": 3,
    }
    assert not registry_report("E1", fresh, str(tmp_path)).passed


@pytest.mark.main
def test_regenerate_oracles(tmp_path, e1):
    session = session_for(e1, fixture="E1", fixtures_dir=str(tmp_path), regen_oracles=True)
    assert_passed(run_property("oracles", session))
    registry = load_registry("E1", str(tmp_path))
    assert registry["morphisms"]["value"] == 6
    assert registry["invariant_dims"]["value"] == [1, 0, 0]
