import pytest
from hypothesis import settings

from sl4cybe.catalog import read_catalog_text
from sl4cybe.lie import sl4
from sl4cybe.report import Context, entries

settings.register_profile("suite", max_examples=40, deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def g():
    return sl4()


@pytest.fixture(scope="session")
def ctx():
    """Run context for the shipped catalog; expensive results are cached per context."""
    return Context(read_catalog_text(), ())


@pytest.fixture(scope="session")
def cat(ctx):
    return entries(ctx)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
