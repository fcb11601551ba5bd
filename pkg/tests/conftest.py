import time

import pytest

ACCEPTANCE: dict = {}


class Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.start = time.perf_counter()

    def elapsed(self):
        return time.perf_counter() - self.start


@pytest.fixture
def criterion(request):
    """Times an acceptance criterion and records its outcome for the summary."""
    holder = {}

    def start(number, title, limit):
        holder["c"] = Criterion(number, title, limit)
        return holder["c"]

    yield start
    c = holder.get("c")
    if c is None:
        return
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    ACCEPTANCE[c.number] = (c.title, passed, c.elapsed(), c.limit, None if passed else _reason(rep))


def _reason(rep):
    if rep is None:
        return "did not run"
    crash = getattr(rep.longrepr, "reprcrash", None)
    text = crash.message if crash is not None else str(rep.longrepr)
    return text.splitlines()[0]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, secs, limit, why = ACCEPTANCE[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'} {secs:7.2f}s (limit {limit}s) {title}"
        if why:
            line += f" -- {why}"
        terminalreporter.write_line(line)
