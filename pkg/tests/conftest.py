import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def catalog_dir(tmp_path, monkeypatch):
    root = tmp_path / "catalog"
    monkeypatch.setenv("GDD4_CATALOG", str(root))
    return root
