import sys
from pathlib import Path

import pytest

from macrorule import corpus_path, emit, normalize, parse_spec, print_rules, read_spec

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
sys.path.insert(0, str(HERE))


def compile_text(text, seed=None):
    """(rule system, diagnostics) for spec source text."""
    spec = parse_spec(text)
    result = normalize(spec, seed=seed)
    return emit(result.rules, spec.symbols), result.diagnostics


def compile_file(path, seed=None):
    spec = read_spec(path)
    result = normalize(spec, seed=seed)
    return emit(result.rules, spec.symbols), result.diagnostics


def pretty_lines(rs):
    return print_rules(rs, "pretty").splitlines()


@pytest.fixture
def corpus():
    return corpus_path


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name


# ---- acceptance summary: one PASS/FAIL line per criterion

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[number] = (report.outcome == "passed", item.function.__doc__.strip().splitlines()[0])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        ok, title = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
