import pytest

from zetalim.corpus import CurveData, binary_corpus, default_corpus

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def corpus_data():
    """The default seeded corpus with counts and roots computed once."""
    data = [CurveData(c) for c in default_corpus(0)]
    for d in data:
        d.inverse_roots
    return data


@pytest.fixture(scope="session")
def binary_data():
    return [CurveData(c) for c in binary_corpus()]


@pytest.fixture
def record_acceptance():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
