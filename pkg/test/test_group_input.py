import pytest

from app.errors import InputError, ParseError
from app.group_input import (
    builtin_generators,
    cycles_to_perm,
    load_group,
    parse_cycles,
    parse_group_text,
)


@pytest.mark.main
def test_parse_cycles():
    assert parse_cycles("(0 1 2)(3 4)") == [[0, 1, 2], [3, 4]]
    assert cycles_to_perm([[0, 1, 2], [3, 4]], 5) == (1, 2, 0, 4, 3)


@pytest.mark.main
@pytest.mark.parametrize("line", ["(0 1", "0 1 2", "(0 1)(1 2)", "(0 0)"])
def test_parse_cycles_rejects(line):
    with pytest.raises(ParseError):
        parse_cycles(line, 1)


@pytest.mark.main
def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as e:
        parse_group_text("(0 1 2)\n\n(0 1\n")
    assert e.value.line == 3
    assert "line 3" in str(e.value)


@pytest.mark.main
def test_group_text_with_comments():
    gens = parse_group_text("# S3\n(0 1)\n(0 1 2)  # rotation\n")
    assert gens == [(1, 0, 2), (1, 2, 0)]


@pytest.mark.main
def test_builtin_must_stand_alone():
    with pytest.raises(ParseError):
        parse_group_text("builtin: sym 3\n(0 1)\n")


@pytest.mark.main
@pytest.mark.parametrize(
    "spec, order",
    [
        ("builtin:sym 4", 24),
        ("builtin:alt 4", 12),
        ("builtin:dihedral 8", 8),
        ("builtin:cyclic 6", 6),
        ("builtin:gl 3 2", 168),
        ("builtin:gl 2 3", 48),
    ],
)
def test_builtins(spec, order):
    G, normalized = load_group(spec)
    assert G.order == order
    assert normalized.startswith("builtin: ")


@pytest.mark.main
def test_bad_builtins():
    with pytest.raises(ParseError):
        builtin_generators("dihedral", 7)
    with pytest.raises(ParseError):
        builtin_generators("gl", 2)
    with pytest.raises(ParseError):
        builtin_generators("gl", 2, 4)
    with pytest.raises(ParseError):
        builtin_generators("mathieu", 11)


@pytest.mark.main
def test_load_group_from_file(tmp_path):
    path = tmp_path / "s3.txt"
    path.write_text("(0 1)\n(0 1 2)\n")
    G, spec = load_group(str(path))
    assert G.order == 6
    assert spec == str(path)


@pytest.mark.main
def test_load_group_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_group(str(tmp_path / "missing.txt"))
