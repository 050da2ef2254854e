from importlib import resources
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from covercheck.cli import load_presentation
from covercheck.problem import load_problem

settings.register_profile("ci", derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

CORPUS = Path(str(resources.files("covercheck") / "corpus"))


@pytest.fixture
def corpus() -> Path:
    return CORPUS


def problem(name):
    return load_problem(CORPUS / f"{name}.cov")


def presentation(name):
    return load_presentation(problem(name))
