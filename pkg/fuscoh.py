import sys

import click
import numpy as np

from app import VERIFICATION_FAILURE, __app_name__, __version__, commands
from app.cache import write_cache
from app.cohomology import SubsystemCohomology
from app.commands.common import (
    cache_dir,
    coeff,
    emit,
    exits_on_error,
    load_coefficients,
    load_source,
    load_subgroup,
    maxdeg,
    prime,
    setup_logging,
    subgroup_H,
    subgroup_K,
    verbose_logging,
)
from app.errors import NotASubgroupChain
from app.gamma import make_section
from app.logging import get_logger
from app.resolution import resolution_dims

logger = get_logger()


def print_version(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    click.echo(f"{__app_name__} v{__version__}")
    ctx.exit()


@click.option(
    "-v",
    "--version",
    is_flag=True,
    callback=print_version,
    expose_value=False,
    is_eager=True,
    help="Show the application's version and exit.",
)
@click.group()
def cli():
    pass


source_argument = click.argument("source", nargs=1)


@cli.command()
@click.argument("group", nargs=1)
@prime
@cache_dir
@verbose_logging
@exits_on_error
def build(group: str, p: int, cache_dir: str, verbose: bool):
    """Build S, F, L and Gamma for a group and write the cache. \n
    GROUP is a generator file in cycle notation or a builtin such as
    `builtin:sym 4`.
    """
    setup_logging(verbose, cache_dir)
    path, payload, (G, F, L, gamma) = write_cache(group, p, cache_dir)
    emit(
        {
            "cache": path,
            "group": payload["group"],
            "p": p,
            "order": G.order,
            "sylow_order": F.S.order,
            "objects": L.n_objects,
            "morphisms": L.n_morphisms,
            "gamma_order": gamma.gamma.order,
        }
    )


@cli.command()
@source_argument
@click.option(
    "--H",
    "h_spec",
    type=str,
    default="full",
    show_default=True,
    help="Compute over the subsystem L_H instead of L",
)
@coeff
@maxdeg
@click.option(
    "--engine",
    type=click.Choice(["nerve", "resolution"]),
    default="nerve",
    show_default=True,
    help="'nerve': normalized cochains with representative cocycles. "
    "'resolution': dimensions from a projective resolution only.",
)
@verbose_logging
@exits_on_error
def cohomology(source, h_spec, coeff, maxdeg, engine, verbose):
    """H^n(L_H; M) for n <= maxdeg. \n
    SOURCE is a fixture name (E1..E4) or a cache written by `build`.
    """
    setup_logging(verbose)
    G, F, L, gamma = load_source(source)
    M = load_coefficients(coeff, L, gamma)
    H = load_subgroup(gamma, h_spec)
    ctx = SubsystemCohomology(gamma, M, maxdeg)
    output = {
        "H": list(H.key),
        "p": M.p,
        "coefficients": M.to_dict(),
        "engine": engine,
    }
    if engine == "resolution":
        M_H = ctx.complex(H).M
        dims = resolution_dims(M_H.category, M_H, maxdeg)
        output["degrees"] = [
            {"degree": n, "dim": d} for n, d in enumerate(dims)
        ]
    else:
        output["degrees"] = ctx.result(H).to_json()
    emit(output)


@cli.command()
@source_argument
@subgroup_H
@subgroup_K
@coeff
@maxdeg
@verbose_logging
@exits_on_error
def transfer(source, h_spec, k_spec, coeff, maxdeg, verbose):
    """Matrices of Res^K_H, Tr_H^K and Tr∘Res per degree. \n
    K defaults to Gamma. The matrices are written in the bases reported
    by `cohomology`; Tr∘Res is compared with [K:H]·id.
    """
    setup_logging(verbose)
    G, F, L, gamma = load_source(source)
    M = load_coefficients(coeff, L, gamma)
    H = load_subgroup(gamma, h_spec)
    K = load_subgroup(gamma, k_spec) or gamma.whole
    if not H <= K:
        raise NotASubgroupChain(f"{H} is not contained in {K}")
    section = make_section(gamma, H, K)
    ctx = SubsystemCohomology(gamma, M, maxdeg)
    p = M.p
    rows = []
    for n in range(maxdeg + 1):
        res = ctx.res_map(H, K, n)
        tr = ctx.tr_map(section, n)
        product = tr @ res % p
        scalar = section.index * np.eye(product.shape[0], dtype=np.int64) % p
        rows.append(
            {
                "degree": n,
                "dim_H": ctx.result(H).dims[n],
                "dim_K": ctx.result(K).dims[n],
                "res": res.tolist(),
                "tr": tr.tolist(),
                "tr_res": product.tolist(),
                "index_times_identity": bool(np.array_equal(product, scalar)),
            }
        )
    emit(
        {
            "H": list(H.key),
            "K": list(K.key),
            "index": section.index,
            "section": section.to_dict(),
            "degrees": rows,
        }
    )
    if not all(row["index_times_identity"] for row in rows):
        logger.error(f"Tr∘Res differs from {section.index}·id")
        sys.exit(VERIFICATION_FAILURE)


@cli.command()
@source_argument
@verbose_logging
@exits_on_error
def gamma(source, verbose):
    """Gamma_{p'}(G), Theta-hat and the subgroups of Gamma in the order
    used by `index:k`. `gens:` words refer to the elements of Aut_L(S)
    listed under `aut_S`.
    """
    setup_logging(verbose)
    G, F, L, data = load_source(source)
    output = data.to_dict()
    output["subgroups"] = [
        {"index": k, "order": H.order, "members": list(H.key)}
        for k, H in enumerate(data.subgroups())
    ]
    output["aut_S"] = [
        {"name": f"a{i}", "morphism": int(m), "theta": int(data.theta_hat[m])}
        for i, m in enumerate(data.aut_S())
    ]
    emit(output)


@cli.command()
@source_argument
@subgroup_H
@verbose_logging
@exits_on_error
def subsystem(source, h_spec, verbose):
    """The subsystem (F_H, L_H) of index prime to p over H <= Gamma."""
    setup_logging(verbose)
    G, F, L, gamma = load_source(source)
    H = load_subgroup(gamma, h_spec)
    if H == gamma.whole:
        F_H, L_H = F, L
    else:
        F_H, L_H = gamma.subsystem(H)
    emit(
        {
            "H": list(H.key),
            "index": gamma.index(H),
            "fusion": {
                "subgroups": len(F_H.subgroups),
                "homs": sum(len(maps) for maps in F_H.homs.values()),
            },
            "linking": L_H.to_dict(),
            "objects": L_H.n_objects,
            "morphisms": L_H.n_morphisms,
            "aut_S": len(L_H.aut_S()),
            "embedding": [int(r) for r in L_H.embedding],
        }
    )


cli.add_command(commands.verify)

if __name__ == '__main__':
    cli()
