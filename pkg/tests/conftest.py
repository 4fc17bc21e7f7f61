from __future__ import annotations

import pytest

from mandelmult import atlas as at
from mandelmult import regions as rg
from mandelmult.dynamics import DEFAULT_CONFIG


@pytest.fixture(scope="session")
def config():
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def ledger():
    return rg.default_ledger()


@pytest.fixture(scope="session")
def cardioid():
    return at.main_cardioid()


@pytest.fixture(scope="session")
def period2():
    return at.build_component(-1.0, 2)


@pytest.fixture(scope="session")
def rabbit():
    center = [c for c in at.find_centers(3) if c.imag > 0.5][0]
    return at.build_component(center, 3)
