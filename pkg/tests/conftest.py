import math
import os
import tempfile

os.environ.setdefault("LOEWNER_LAB_LOG_DIR", tempfile.mkdtemp(prefix="loewner-lab-logs-"))

import pytest
from fastapi.testclient import TestClient

from src.settings import settings


@pytest.fixture(scope="session")
def client():
    from src.app import app
    with TestClient(app) as c:
        yield c


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"


@pytest.fixture(autouse=True)
def restore_settings():
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def theta():
    return math.pi / 3.0
