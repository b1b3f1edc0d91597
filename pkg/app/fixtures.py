"""Named test fixtures and the oracle registry stored next to the tests."""
import os
from dataclasses import dataclass

import yaml

from app.cache import build_all
from app.config import config
from app.errors import InputError
from app.logging import get_logger
from app.types import RegistryEntry

logger = get_logger()


@dataclass(frozen=True)
class Fixture:
    name: str
    group: str
    p: int
    description: str


FIXTURES = {
    "E1": Fixture("E1", "builtin:sym 3", 3, "symmetric group of degree 3 at p=3"),
    "E2": Fixture("E2", "builtin:alt 4", 2, "alternating group of degree 4 at p=2"),
    "E3": Fixture("E3", "builtin:sym 4", 2, "symmetric group of degree 4 at p=2"),
    "E4": Fixture("E4", "builtin:sym 5", 5, "symmetric group of degree 5 at p=5"),
}

_built = {}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise InputError(
            f"unknown fixture {name!r}, expected one of {sorted(FIXTURES)}"
        ) from None


def build_fixture(name: str):
    """(G, F, L, GammaData) for a named fixture, built once per process."""
    if name not in _built:
        spec = fixture(name)
        _, G, F, L, gamma = build_all(spec.group, spec.p)
        _built[name] = (G, F, L, gamma)
    return _built[name]


def registry_path(name: str, fixtures_dir: str = None) -> str:
    if fixtures_dir is None:
        fixtures_dir = config.get('fixtures_dir', 'test/fixtures/')
    return os.path.join(fixtures_dir, f"{name}.yaml")


def load_registry(name: str, fixtures_dir: str = None) -> dict[str, RegistryEntry]:
    """Expected values of a fixture: {key: {value, oracle, command}}."""
    path = registry_path(name, fixtures_dir)
    if not os.path.isfile(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def expected(name: str, key: str, fixtures_dir: str = None):
    registry = load_registry(name, fixtures_dir)
    if key not in registry:
        raise InputError(f"no expected value {key!r} recorded for {name}")
    return registry[key]["value"]


def write_registry(name: str, entries: dict[str, RegistryEntry], fixtures_dir: str = None) -> str:
    path = registry_path(name, fixtures_dir)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(entries, f, sort_keys=True)
    logger.info(f"Oracle registry written to {path}")
    return path
