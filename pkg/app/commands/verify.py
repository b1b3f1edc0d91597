import sys

import click

from app import VERIFICATION_FAILURE
from app.config import config
from app.fixtures import FIXTURES
from app.logging import get_logger
from app.verification import PROPERTIES, Session, run_property

from .common import (
    coeff,
    emit,
    exits_on_error,
    load_coefficients,
    load_source,
    load_subgroup,
    maxdeg,
    seed,
    setup_logging,
    verbose_logging,
)

logger = get_logger()

subgroup_H = click.option(
    "--H",
    "h_spec",
    type=str,
    default=None,
    help="Subgroup H of Gamma (default: trivial, or every subgroup for the "
    "checks that range over all of them)",
)
subgroup_K = click.option(
    "--K",
    "k_spec",
    type=str,
    default=None,
    help="Second subgroup K, for double-coset and transitivity",
)
trials = click.option(
    "--trials",
    type=int,
    default=config.getint('trials', 100),
    show_default=True,
    help="Number of seeded random trials",
)
regen_oracles = click.option(
    "--regen-oracles",
    is_flag=True,
    default=False,
    help="Rewrite the fixture's oracle registry instead of comparing with it",
)


@click.group()
def verify():
    """Verify a property of the p-local finite group. \n
    SOURCE is a fixture name (E1..E4) or a cache written by `build`.
    Reports are printed as JSON; the exit code is 1 if any fails.
    """
    pass


def run(names, source, h_spec, k_spec, coeff, maxdeg, seed, trials, regen=False):
    G, F, L, gamma = load_source(source)
    M = load_coefficients(coeff, L, gamma)
    session = Session(
        G,
        F,
        L,
        gamma,
        M,
        maxdeg,
        seed=seed,
        trials=trials,
        fixture=source if source in FIXTURES else None,
        regen_oracles=regen,
    )
    H = load_subgroup(gamma, h_spec)
    K = load_subgroup(gamma, k_spec)
    reports = []
    for name in names:
        reports.extend(run_property(name, session, H=H, K=K))
    emit(
        {
            "source": source,
            "properties": list(names),
            "maxdeg": maxdeg,
            "seed": seed,
            "reports": [r.to_dict() for r in reports],
        }
    )
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.error(f"{len(failed)} report(s) failed: {', '.join(failed)}")
        sys.exit(VERIFICATION_FAILURE)


def property_command(name: str, statement: str):
    options = [
        click.argument("source", nargs=1),
        subgroup_H,
        subgroup_K,
        coeff,
        maxdeg,
        seed,
        trials,
        verbose_logging,
    ]
    if name == "oracles":
        options.append(regen_oracles)

    def command(source, h_spec, k_spec, coeff, maxdeg, seed, trials, verbose, regen_oracles=False):
        setup_logging(verbose)
        run([name], source, h_spec, k_spec, coeff, maxdeg, seed, trials, regen_oracles)

    command = exits_on_error(command)
    for option in reversed(options):
        command = option(command)
    return click.command(name=name, help=f"Checks that {statement}.")(command)


for _name, (_statement, _) in PROPERTIES.items():
    verify.add_command(property_command(_name, _statement))


@verify.command(name="all")
@click.argument("source", nargs=1)
@subgroup_H
@subgroup_K
@coeff
@maxdeg
@seed
@trials
@verbose_logging
@exits_on_error
def verify_all(source, h_spec, k_spec, coeff, maxdeg, seed, trials, verbose):
    """Run every property in turn."""
    setup_logging(verbose)
    run(list(PROPERTIES), source, h_spec, k_spec, coeff, maxdeg, seed, trials)
