import pytest

from steinerfp import FieldCtx


@pytest.fixture(params=[3, 5, 7], ids=lambda p: f"p{p}")
def ctx(request):
    return FieldCtx(request.param)


@pytest.fixture
def f5():
    return FieldCtx(5)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion number k")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    k, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    # parametrized criteria share one line: any failure sticks, details accumulate
    prev = item.config._criteria.get(k)
    if prev is not None:
        status = "FAIL" if "FAIL" in (prev[0], status) else status
        detail = "; ".join(x for x in (prev[2], detail) if x)
    item.config._criteria[k] = (status, title, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_criteria", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        status, title, detail = results[k]
        line = f"criterion {k:2d}: {status}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
