import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run long tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, ok, detail)``; returns ok."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((label, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'} {label} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
