import numpy as np
import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Store an acceptance outcome; the summary prints one line per criterion."""

    def _record(key: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE[key] = (bool(ok), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit()) or 0), k)):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
