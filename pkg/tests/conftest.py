import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> [(part, ok, detail)]
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(n: int, ok: bool, detail: str, part: str = "") -> None:
    ACCEPTANCE.setdefault(n, []).append((part, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{part} {'ok' if good else 'FAILED'}: {d}" if part else d for part, good, d in parts)
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
