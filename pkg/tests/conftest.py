import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=50
)
settings.load_profile("ci")

SESSION_T0 = time.monotonic()


@pytest.fixture(scope="session")
def session_start() -> float:
    return SESSION_T0


def pytest_collection_modifyitems(items):
    # run the acceptance criteria last so their wall-clock budget check
    # covers the whole session
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")
