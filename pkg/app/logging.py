import logging
import time
from contextlib import contextmanager
from pathlib import Path

from app import __app_name__

STREAM_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
FILE_FORMAT = '%(asctime)s %(name)s [%(levelname)s] %(message)s'


def configure_logger(log_level, working_dir=None):
    """Stream to stderr at ``log_level``; with a working directory, also
    write everything to ``<working_dir>/fuscoh.log``. Calling it again
    replaces the previous handlers."""
    logger = get_logger()
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    # stdout is reserved for JSON output
    sh = logging.StreamHandler()
    sh.setLevel(log_level)
    sh.setFormatter(logging.Formatter(STREAM_FORMAT))

    if working_dir is not None:
        Path(working_dir).mkdir(parents=True, exist_ok=True)
        filehandler = logging.FileHandler(
            Path(working_dir) / f"{__app_name__}.log", encoding="utf-8"
        )
        filehandler.setLevel(logging.DEBUG)
        filehandler.setFormatter(logging.Formatter(FILE_FORMAT))
        logger.addHandler(filehandler)

    logger.addHandler(sh)
    logger.setLevel(logging.DEBUG)


def get_logger():
    return logging.getLogger(__app_name__)


@contextmanager
def timed(label: str, level=logging.INFO):
    """Log ``label`` with the elapsed wall time when the block exits."""
    start = time.perf_counter()
    yield
    get_logger().log(level, f"{label} in {time.perf_counter() - start:.2f}s")
