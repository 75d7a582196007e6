import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: dict[int, list] = {}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow-tagged tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="slow; enable with --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "XFAIL" if rep.skipped else "XPASS"
        else:
            status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ran = [s for _, s in parts if s != "SKIP"]
        verdict = "PASS" if ran and all(s == "PASS" for s in ran) else "FAIL"
        notes = [f"{name}={s}" for name, s in parts if s not in ("PASS", "SKIP")]
        skipped = [name for name, s in parts if s == "SKIP"]
        if skipped:
            notes.append("not run without --slow: " + ", ".join(skipped))
        tr.write_line(f"criterion {n}: {verdict}" + (f"  ({'; '.join(notes)})" if notes else ""))
