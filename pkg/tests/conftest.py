import os
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

from cartanhunt.builtins import S3_LABELS, builtin_group, builtin_subgroup, s3_decomposition_p3
from cartanhunt.chartab import character_table

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"
PARTITION_ORDER = S3_LABELS  # chi_(3), chi_(2,1), chi_(1^3)
PROPERTY_GROUPS = ("S3", "S4", "C6", "D4", "Q8")


@pytest.fixture(scope="session")
def S3():
    return builtin_group("S3")


@pytest.fixture(scope="session")
def s3_table(S3):
    return character_table(S3)


@pytest.fixture(scope="session")
def s3_trio(S3):
    return [builtin_subgroup(S3, n) for n in ("diag", "Lb", "Lc")]


@pytest.fixture(scope="session")
def D3():
    return s3_decomposition_p3()


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@lru_cache(maxsize=None)
def table_of(name):
    return character_table(builtin_group(name))


@lru_cache(maxsize=None)
def small_pool(name):
    """Cyclic subgroups of G x G up to conjugacy, with their Delta matrices."""
    from cartanhunt.hunt import enumerate_pair_subgroups
    return enumerate_pair_subgroups(builtin_group(name), max_generators=1,
                                    table=table_of(name))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
