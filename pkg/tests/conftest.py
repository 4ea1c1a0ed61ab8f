import pytest

from asramify.ffield import ff_make
from asramify.formats import corpus_paths, parse_cover


@pytest.fixture(scope="session")
def F2():
    return ff_make(2, 1)


@pytest.fixture(scope="session")
def F3():
    return ff_make(3, 1)


@pytest.fixture(scope="session")
def F4():
    return ff_make(2, 2, [1, 1, 1])


@pytest.fixture(scope="session")
def F8():
    return ff_make(2, 3, [1, 1, 0, 1])


@pytest.fixture(scope="session")
def F9():
    return ff_make(3, 2, [1, 0, 1])


@pytest.fixture(scope="session")
def corpus():
    return {path.rsplit("/", 1)[-1][:-len(".cover")]: parse_cover(path) for path in corpus_paths()}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
