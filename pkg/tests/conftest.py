import os

import pytest

from dynamo_lab.config import reset_settings
from dynamo_lab.generators import gen_complete, gen_cycle, gen_petersen, gen_star
from dynamo_lab.monitor import get_run_monitor


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    # tests see the built-in defaults unless they set DYNAMO_LAB_* themselves
    for key in list(os.environ):
        if key.startswith("DYNAMO_LAB_"):
            monkeypatch.delenv(key)
    reset_settings()
    get_run_monitor().reset()
    yield
    reset_settings()


@pytest.fixture
def k4():
    return gen_complete(4)


@pytest.fixture
def k6():
    return gen_complete(6)


@pytest.fixture
def c4():
    return gen_cycle(4)


@pytest.fixture
def c5():
    return gen_cycle(5)


@pytest.fixture
def c6():
    return gen_cycle(6)


@pytest.fixture
def star5():
    return gen_star(5)


@pytest.fixture
def petersen():
    return gen_petersen()
