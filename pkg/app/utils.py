import json
import os
import re

import numpy as np

from app.errors import InputError
from app.logging import get_logger

logger = get_logger()


def slugify(text):
    text = text.replace('_', '-')
    return re.sub(r'\W+', '-', text).strip('-').lower()


def check_if_valid_file_path(file_path):
    if not isinstance(file_path, str) or not os.path.isfile(file_path):
        raise InputError(f"Not a valid file: {file_path}")


def check_if_valid_json(file_path):
    check_if_valid_file_path(file_path)
    try:
        with open(file_path) as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise InputError(f"Not a valid JSON file: {file_path}") from e


def parse_json_option(text, option):
    """Value of a CLI option holding inline JSON or a path to a JSON file."""
    if text is None:
        return None
    if os.path.isfile(text):
        return check_if_valid_json(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{option}: neither a JSON file nor inline JSON") from e


def _builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dump_json(data):
    """Canonical JSON text: sorted keys, two-space indent."""
    return json.dumps(data, sort_keys=True, indent=2, default=_builtin)
