"""Versioned JSON cache of a built p-local finite group."""
import json
import os

from app.data_writer import DataWriter
from app.errors import ConsistencyError, InputError
from app.fusion import build_fusion
from app.gamma import gamma_p_prime
from app.group_input import load_group
from app.groups import generate_group
from app.linking import build_linking
from app.logging import get_logger, timed
from app.utils import check_if_valid_json, dump_json, slugify

logger = get_logger()

FORMAT_VERSION = 1


def cache_name(spec: str, p: int) -> str:
    return slugify(f"{spec}-p{p}")


def build_all(spec: str, p: int, generators=None):
    """(normalized spec, G, F, L, GammaData) for a group spec and prime.

    With ``generators`` the group is generated from them and ``spec`` is
    kept as its label only.
    """
    with timed(f"Built {spec} at p={p}"):
        if generators is None:
            G, spec = load_group(spec)
        else:
            G = generate_group(generators)
        F = build_fusion(G, p)
        L = build_linking(F)
        gamma = gamma_p_prime(F, L)
    return spec, G, F, L, gamma


def cache_payload(spec: str, G, F, L, gamma) -> dict:
    homs = []
    for (i, j), maps in sorted(F.homs.items()):
        for phi in maps:
            homs.append(
                {"source": i, "target": j, "images": list(phi.images)}
            )
    return {
        "format_version": FORMAT_VERSION,
        "group": spec,
        "generators": [list(g) for g in G.generators],
        "p": F.p,
        "S": sorted(F.S.members),
        "fusion": {
            "subgroups": [list(P.key) for P in F.subgroups],
            "homs": homs,
        },
        "linking": L.to_dict(),
        "gamma": {
            "order": gamma.gamma.order,
            "generators": [list(g) for g in gamma.gamma.generators],
        },
        "theta_hat": [int(t) for t in gamma.theta_hat],
    }


def write_cache(spec: str, p: int, cache_dir: str):
    """Build everything for (spec, p) and write the cache file."""
    spec, G, F, L, gamma = build_all(spec, p)
    payload = cache_payload(spec, G, F, L, gamma)
    path = DataWriter(cache_dir).write_json(payload, cache_name(spec, p))
    logger.info(f"Cache written to {path}")
    return path, payload, (G, F, L, gamma)


def load_cache(path: str):
    """Rebuild from the generators recorded in a cache and compare with it."""
    if os.path.isdir(path):
        raise InputError(f"{path} is a directory, expected a cache file")
    data = check_if_valid_json(path)
    if data.get("format_version") != FORMAT_VERSION:
        raise InputError(
            f"cache format {data.get('format_version')!r} is not supported"
        )
    try:
        spec, p = data["group"], int(data["p"])
        generators = [tuple(int(x) for x in g) for g in data["generators"]]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed cache {path}: {e}") from e
    spec, G, F, L, gamma = build_all(spec, p, generators)
    rebuilt = cache_payload(spec, G, F, L, gamma)
    if json.loads(dump_json(rebuilt)) != data:
        raise ConsistencyError(
            f"cache {path} does not match a rebuild from {spec!r}"
        )
    logger.debug(f"Cache {path} verified against a rebuild")
    return G, F, L, gamma
