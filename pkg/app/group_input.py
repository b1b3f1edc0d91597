"""Group specifications: generator files in cycle notation and builtins."""
import itertools
import re

import numpy as np
from sympy.combinatorics.named_groups import (
    AlternatingGroup,
    CyclicGroup,
    DihedralGroup,
    SymmetricGroup,
)
from sympy import isprime, primitive_root

from app.errors import ParseError
from app.groups import generate_group, identity_perm
from app.logging import get_logger
from app.utils import check_if_valid_file_path

logger = get_logger()

CYCLE_LINE = re.compile(r"^\s*(\(\s*(\d+(\s+\d+)*)?\s*\)\s*)+$")
CYCLE = re.compile(r"\(([^()]*)\)")
BUILTIN = re.compile(r"^\s*builtin\s*:\s*(\w+)\s+(\d+)(?:\s+(\d+))?\s*$")


def parse_cycles(line: str, line_no: int = None) -> list:
    """One generator in disjoint-cycle notation, as a list of cycles."""
    if not CYCLE_LINE.match(line):
        raise ParseError(f"invalid cycle notation `{line.strip()}`", line_no)
    cycles, used = [], set()
    for body in CYCLE.findall(line):
        points = [int(x) for x in body.split()]
        if len(set(points)) != len(points) or used & set(points):
            raise ParseError(
                f"cycles are not disjoint in `{line.strip()}`", line_no
            )
        used.update(points)
        cycles.append(points)
    return cycles


def cycles_to_perm(cycles: list, degree: int) -> tuple:
    perm = list(identity_perm(degree))
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            perm[a] = b
    return tuple(perm)


def gl_generators(n: int, q: int) -> list:
    """GL_n(F_q), q prime, acting on the nonzero column vectors of F_q^n.

    Generated by the elementary transvections and one diagonal matrix
    carrying a primitive root.
    """
    if not isprime(q):
        raise ParseError(f"gl builtin needs a prime field size, got {q}")
    vectors = [
        np.array(v) for v in itertools.product(range(q), repeat=n) if any(v)
    ]
    position = {tuple(v): i for i, v in enumerate(vectors)}
    matrices = []
    for i, j in itertools.permutations(range(n), 2):
        E = np.eye(n, dtype=np.int64)
        E[i, j] = 1
        matrices.append(E)
    if q > 2:
        D = np.eye(n, dtype=np.int64)
        D[0, 0] = primitive_root(q)
        matrices.append(D)
    return [
        tuple(position[tuple(A @ v % q)] for v in vectors) for A in matrices
    ]


def builtin_generators(name: str, a: int, b: int = None) -> list:
    if name == "sym":
        group = SymmetricGroup(a)
    elif name == "alt":
        group = AlternatingGroup(a)
    elif name == "dihedral":
        if a % 2 or a < 4:
            raise ParseError(f"dihedral order must be even and >= 4, got {a}")
        group = DihedralGroup(a // 2)
    elif name == "cyclic":
        group = CyclicGroup(a)
    elif name == "gl":
        if b is None:
            raise ParseError("gl builtin needs `gl n q`")
        return gl_generators(a, b)
    else:
        raise ParseError(f"unknown builtin `{name}`")
    return [tuple(g.array_form) for g in group.generators]


def parse_group_text(text: str) -> list:
    """Generators (array form) described by a group file's contents."""
    parsed, builtin = [], None
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("builtin"):
            match = BUILTIN.match(stripped)
            if not match:
                raise ParseError(f"invalid builtin line `{stripped}`", line_no)
            if builtin is not None or parsed:
                raise ParseError("a builtin line must stand alone", line_no)
            name, a, b = match.groups()
            builtin = builtin_generators(name, int(a), int(b) if b else None)
            continue
        if builtin is not None:
            raise ParseError("a builtin line must stand alone", line_no)
        parsed.append(parse_cycles(stripped, line_no))
    if builtin is not None:
        return builtin
    degree = 1 + max(
        (x for cycles in parsed for cycle in cycles for x in cycle),
        default=-1,
    )
    return [cycles_to_perm(cycles, degree) for cycles in parsed]


def load_group(source: str):
    """Build a group from `builtin:<name> <args>` or a group file path.

    Returns the group together with the normalized spec string.
    """
    if source.strip().startswith("builtin"):
        text = source.replace("builtin:", "builtin: ", 1)
        spec = " ".join(text.split())
    else:
        check_if_valid_file_path(source)
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
        spec = source
    gens = parse_group_text(text)
    G = generate_group(gens)
    logger.info(f"Loaded {spec}: order {G.order} on {G.degree} points")
    return G, spec
