import pytest

_OUTCOMES = {}


def pytest_runtest_makereport(item, call):
    if call.when != "call" or item.get_closest_marker("acceptance") is None:
        return
    label = dict(item.user_properties).get("criterion", item.name)
    detail = dict(item.user_properties).get("detail", "")
    _OUTCOMES[item.nodeid] = (label, call.excinfo is None, detail)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(_OUTCOMES.values(), key=lambda o: o[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())


@pytest.fixture
def criterion(record_property):
    """Register the acceptance label and a free-form detail string for the summary."""
    def register(label, **details):
        record_property("criterion", label)
        record_property("detail", " ".join(f"{k}={v}" for k, v in details.items()))
    return register
