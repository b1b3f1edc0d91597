"""Settings from config.ini.

The section used is the profile named by PROFILE in `.env` (DEFAULT when
unset); CONFIG_FILE in `.env` points at another ini file. Keys missing
from the file fall back to DEFAULTS.
"""
import configparser

from dotenv import dotenv_values

DEFAULTS = {
    'element_cap': '100000',
    'coset_cap': '100000',
    'chain_cap': '1000000',
    'column_cap': '8000',
    'block_rows': '512',
    'maxdeg': '4',
    'seed': '0',
    'trials': '100',
    'cache_dir': 'cache/',
    'fixtures_dir': 'test/fixtures/',
    'verbose': 'false',
}


def read_config(profile='DEFAULT', path='config.ini'):
    config = configparser.ConfigParser(defaults=DEFAULTS)
    config.read(path)
    if profile != 'DEFAULT' and not config.has_section(profile):
        config.add_section(profile)

    return config[profile]


env = dotenv_values(".env")
config = read_config(
    env.get("PROFILE", "DEFAULT"), env.get("CONFIG_FILE", "config.ini")
)
