import pytest

from holonomy.rings.fields import QQ, REFERENCE_PRIMES
from holonomy.utils.events import drain_events


@pytest.fixture(autouse=True)
def clean_events():
    drain_events()
    yield
    drain_events()


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv("HOLONOMY_CACHE_DIR", raising=False)
    monkeypatch.delenv("HOLONOMY_PRIMES", raising=False)


@pytest.fixture
def prime():
    return REFERENCE_PRIMES[0]


@pytest.fixture
def q():
    """QQ(a, b) shorthand."""
    return lambda a, b=1: QQ(a, b)
