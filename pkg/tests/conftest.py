import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store one PASS/FAIL line for the acceptance summary."""

    def _record(key: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE[key] = (bool(ok), detail)

    return _record


def _order(key: str):
    num = "".join(c for c in key if c.isdigit())
    return (int(num) if num else 0, key)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=_order):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:<4} {'PASS' if ok else 'FAIL'}  {detail}")
