import pytest

from genrest import cache

CRITERIA = {
    1: "counterexample reproduction",
    2: "Rodier finite analogue",
    3: "multiplicity one",
    4: "genericity transfer",
    5: "table correctness",
    6: "definition equivalence",
    7: "structural oracles",
    8: "determinism",
}

_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")
    # keep the suite hermetic: no disk cache unless a test asks for one
    cache.set_cache_dir(None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n = mark.args[0]
        ok = rep.passed
        prev = _outcomes.get(n, (True, []))
        failed = prev[1] + ([item.name] if not ok else [])
        _outcomes[n] = (prev[0] and ok, failed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, name in CRITERIA.items():
        if n not in _outcomes:
            tr.write_line(f"criterion {n} ({name}): NOT RUN")
            continue
        ok, failed = _outcomes[n]
        line = f"criterion {n} ({name}): {'PASS' if ok else 'FAIL'}"
        if failed:
            line += "  [" + ", ".join(failed) + "]"
        tr.write_line(line)
