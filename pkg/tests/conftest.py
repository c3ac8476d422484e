"""Shared fixtures: the default motor model and one full transient run.

Building the stator (mesh + eigensolve) and running the 5 ms transient are
the two expensive steps, so both are session-scoped and reused across
test modules.
"""

import pytest

from twmotor import runner
from twmotor.config import RunConfig


@pytest.fixture(scope="session")
def default_config():
    return RunConfig()


@pytest.fixture(scope="session")
def stator_model(default_config):
    return runner.build_stator(default_config)


@pytest.fixture(scope="session")
def default_run(default_config, stator_model):
    """(MotorTimeSeries, summary dict) of the default 5 ms transient."""
    return runner.run_motor(default_config, model=stator_model)
