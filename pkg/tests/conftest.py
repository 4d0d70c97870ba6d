from functools import lru_cache

from repalg.cli import resolve
from repalg.scenario import load_scenario


@lru_cache(maxsize=None)
def corpus(name):
    """Load a shipped scenario once per test session."""
    return load_scenario(resolve(name))
