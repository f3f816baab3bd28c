import os
from pathlib import Path

import pytest

from partition_rules.corpus import toy_corpus
from partition_rules.textkit import normalize

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "outcomes": []})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2]
        elif report.failed:
            crash = getattr(report.longrepr, "reprcrash", None)
            detail = crash.message.splitlines()[0] if crash else str(report.longrepr).strip().splitlines()[-1]
        entry["outcomes"].append((item.name, report.outcome, detail))
        entry.setdefault("notes", []).extend(v for k, v in report.user_properties if k == "note")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        outcomes = [o for _, o, _ in entry["outcomes"]]
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif outcomes and all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        tr.write_line(f"criterion {number}: {status}  {entry['title']}")
        for name, o, detail in entry["outcomes"]:
            if o != "passed":
                tr.write_line(f"    {name}: {o}  {detail}")
        for note in entry.get("notes", []):
            tr.write_line(f"    note: {note}")


@pytest.fixture(scope="session")
def toy_docs():
    return toy_corpus()


@pytest.fixture(scope="session")
def toy_split(toy_docs):
    """Normalized (in-class B, out-of-class A) document lists."""
    ins = [normalize(d.body) for d in toy_docs if d.label == "B"]
    outs = [normalize(d.body) for d in toy_docs if d.label != "B"]
    return ins, outs


@pytest.fixture(scope="session")
def reuters_dir():
    path = os.environ.get("REUTERS21578_DIR")
    if not path or not Path(path).is_dir():
        pytest.skip("Reuters-21578 not available: set REUTERS21578_DIR to the SGML directory")
    return Path(path)
