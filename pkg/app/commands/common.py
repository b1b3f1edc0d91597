"""Options and plumbing shared by the fuscoh commands."""
import functools
import logging
import sys
import traceback

import click

from app import VERIFICATION_FAILURE
from app.cache import load_cache
from app.coefficients import system_from_spec
from app.config import config
from app.errors import FuscohError, InputError
from app.fixtures import FIXTURES, build_fixture
from app.gamma import parse_subgroup_spec
from app.logging import configure_logger, get_logger
from app.utils import dump_json, parse_json_option

logger = get_logger()

DEFAULT_COEFF = '{"type": "constant", "dim": 1}'

prime = click.option(
    "--p",
    "p",
    type=int,
    required=True,
    help="The prime p",
)
maxdeg = click.option(
    "--maxdeg",
    type=int,
    default=config.getint('maxdeg', 4),
    show_default=True,
    help="Highest cohomological degree to compute",
)
subgroup_H = click.option(
    "--H",
    "h_spec",
    type=str,
    default="trivial",
    show_default=True,
    help="Subgroup H of Gamma: trivial | full | index:k | gens:a1,a2*a3^-1",
)
subgroup_K = click.option(
    "--K",
    "k_spec",
    type=str,
    default=None,
    help="Second subgroup K of Gamma, same syntax as --H",
)
coeff = click.option(
    "--coeff",
    type=str,
    default=DEFAULT_COEFF,
    show_default=True,
    help="Coefficient system as inline JSON or a path to a JSON file",
)
seed = click.option(
    "--seed",
    type=int,
    default=config.getint('seed', 0),
    show_default=True,
    help="Seed of every random trial",
)
cache_dir = click.option(
    "--cache-dir",
    type=str,
    default=config.get('cache_dir', 'cache/'),
    show_default=True,
    help="Directory the build cache is written to",
)
verbose_logging = click.option(
    "-V",
    "--verbose",
    is_flag=True,
    default=config.getboolean('verbose', False),
    help="Supply this flag to enable verbose logging",
)


def setup_logging(verbose: bool, working_dir=None):
    configure_logger(logging.DEBUG if verbose else logging.INFO, working_dir)


def exits_on_error(func):
    """Map fuscoh errors to their exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FuscohError as e:
            logger.error(f"{type(e).__name__}: {e}")
            if e.witness is not None:
                logger.error(f"witness: {e.witness}")
            sys.exit(e.exit_code)
        except Exception as e:
            logger.error(f"Exited with error: {e}")
            logger.debug(traceback.format_exc())
            sys.exit(VERIFICATION_FAILURE)

    return wrapper


def load_source(source: str):
    """(G, F, L, GammaData) from a fixture name or a build cache."""
    if source in FIXTURES:
        logger.info(f"Building fixture {source}")
        return build_fixture(source)
    return load_cache(source)


def load_subgroup(gamma, spec):
    if spec is None:
        return None
    return parse_subgroup_spec(gamma, spec)


def load_coefficients(text: str, L, gamma):
    spec = parse_json_option(text, "--coeff")
    if not isinstance(spec, dict):
        raise InputError("--coeff must be a JSON object")
    return system_from_spec(spec, L, gamma, L.p)


def emit(data):
    click.echo(dump_json(data))
