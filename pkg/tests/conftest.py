"""Collects the acceptance verdicts and prints them at the end of the run."""

VERDICTS: dict[int, str] = {}


def record(number: int, ok: bool, title: str, detail: str) -> str:
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    VERDICTS[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
