import os

import pytest

from radbound.dptable import build_table, load_table, save_table

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
TABLE_PATH = os.path.join(ROOT, "tables", "d400.rdmc")
D0_CACHE = os.path.join(ROOT, ".cache", "radbound")


@pytest.fixture(scope="session")
def table():
    """The full-resolution certified table (loaded if present, else built)."""
    if os.path.exists(TABLE_PATH):
        return load_table(TABLE_PATH)
    t = build_table(d0_cache=D0_CACHE, progress=False)
    os.makedirs(os.path.dirname(TABLE_PATH), exist_ok=True)
    save_table(t, TABLE_PATH)
    return t


@pytest.fixture(scope="session")
def table_path(table):
    return TABLE_PATH
