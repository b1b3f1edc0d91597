import logging

import pytest

from app.config import DEFAULTS, read_config
from app.logging import configure_logger, get_logger, timed


@pytest.mark.main
def test_defaults_without_a_file(tmp_path):
    config = read_config(path=str(tmp_path / "missing.ini"))
    assert config.getint('column_cap') == int(DEFAULTS['column_cap'])
    assert config.get('fixtures_dir') == 'test/fixtures/'
    assert not config.getboolean('verbose')


@pytest.mark.main
def test_profile_overrides(tmp_path):
    path = tmp_path / "config.ini"
    path.write_text("[DEFAULT]\nmaxdeg = 3\n\n[small]\ncolumn_cap = 50\n")
    small = read_config('small', str(path))
    assert small.getint('column_cap') == 50
    assert small.getint('maxdeg') == 3
    assert read_config('DEFAULT', str(path)).getint('column_cap') == 8000
    assert read_config('other', str(path)).getint('chain_cap') == 1000000


@pytest.mark.main
def test_log_file_in_working_dir(tmp_path):
    configure_logger(logging.INFO, str(tmp_path / "work"))
    with timed("step", level=logging.DEBUG):
        get_logger().debug("inside")
    for handler in get_logger().handlers:
        handler.flush()
    text = (tmp_path / "work" / "fuscoh.log").read_text()
    assert "inside" in text
    assert "step in " in text
    configure_logger(logging.INFO)
    assert len(get_logger().handlers) == 1
