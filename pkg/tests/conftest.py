from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from lrcc.construct import build_base_a, build_base_b, example1_final_spec, example1_initial_spec, example2_spec, gf49
from lrcc.convert import make_plan
from lrcc.lrc import Regime

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def F49():
    return gf49()


@pytest.fixture(scope="session")
def ex1_initial():
    return build_base_a(example1_initial_spec())


@pytest.fixture(scope="session")
def ex1_base():
    return build_base_a(example1_final_spec())


@pytest.fixture(scope="session")
def ex1_plan(ex1_base):
    return make_plan(ex1_base, 8, 1, regime=Regime.IMPROVED)


@pytest.fixture(scope="session")
def ex2_base():
    return build_base_b(example2_spec())


@pytest.fixture(scope="session")
def ex2_plan(ex2_base):
    return make_plan(ex2_base, 2, 1, regime=Regime.STANDARD)
