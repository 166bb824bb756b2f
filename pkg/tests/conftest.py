import pytest
from hypothesis import settings

from lambdap.engines.hopf import ExteriorHopfAlgebra

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("LAMBDAP_WORKERS", "LAMBDAP_BUDGET", "LAMBDAP_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def algebra1():
    return ExteriorHopfAlgebra(1)


@pytest.fixture
def algebra2():
    return ExteriorHopfAlgebra(2)


@pytest.fixture
def algebra3():
    return ExteriorHopfAlgebra(3)
