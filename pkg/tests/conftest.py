import warnings

import pytest
from hypothesis import HealthCheck, settings

from relalg.algebra import make_algebra
from relalg.constructions import lyndon, mackenzie
from relalg.proper import abstract, full_re, full_sb
from relalg.relations import ConcreteRelation

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def build_lyndon(n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return lyndon(n, (1, 3))


@pytest.fixture(scope="session")
def mck():
    return make_algebra(mackenzie())


@pytest.fixture(scope="session")
def re2():
    return make_algebra(abstract(full_re(2)))


@pytest.fixture(scope="session")
def re3():
    return make_algebra(abstract(full_re(3)))


@pytest.fixture(scope="session")
def sb_id3():
    return make_algebra(abstract(full_sb(ConcreteRelation.identity(3))))


@pytest.fixture(scope="session")
def ly4():
    return make_algebra(build_lyndon(4))


@pytest.fixture(scope="session")
def ly5():
    return make_algebra(build_lyndon(5))
