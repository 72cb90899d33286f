from __future__ import annotations

import pytest

from chainedbell import build_plan, datasets


@pytest.fixture(scope="session")
def plan6():
    return build_plan(6)


@pytest.fixture(scope="session")
def reference_counts():
    return datasets.load_reference_counts()


@pytest.fixture(scope="session")
def reference_tomo():
    return datasets.load_reference_tomography()
