import pytest

from fpgraev.catalog import metric_battery
from fpgraev.graev import GraevExtension
from fpgraev.metrics import discrete_metric, rho_from_open_set
from fpgraev.topology import sierpinski


@pytest.fixture
def sierp():
    return sierpinski()


@pytest.fixture
def rho_a(sierp):
    return rho_from_open_set({"a"}, sierp)


@pytest.fixture
def discrete_ext():
    return GraevExtension(discrete_metric(["a", "b"]), name="discrete")


@pytest.fixture
def sierp_ext(rho_a):
    return GraevExtension(rho_a, name="rho_a")


@pytest.fixture(scope="session")
def battery2():
    return metric_battery(("a", "b"), samples=0)


@pytest.fixture(scope="session")
def battery3():
    return metric_battery(("a", "b", "c"))


# -- one summary line per acceptance criterion -------------------------------


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or rep.failed:
        detail = dict(item.user_properties).get("detail", "")
        if rep.failed and not detail:
            detail = rep.longreprtext.strip().splitlines()[-1] if rep.longreprtext else ""
        item.config._acceptance[number] = (title, rep.passed and rep.when == "call", detail)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok, detail = results[number]
        line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {title}"
        terminalreporter.write_line(line + (f" | {detail}" if detail else ""))
