from pathlib import Path

import numpy as np
import pytest

from gnarsil.tableau import CssCode, build_css_tableau, multiply_stabilizer_rows

DATA = Path(__file__).resolve().parent.parent / "data"

# criterion number -> list of (label, ok) checks, filled by test_acceptance
ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


def support_rows(supports, n):
    """Bit matrix from 1-based supports."""
    M = np.zeros((len(supports), n), dtype=np.uint8)
    for i, s in enumerate(supports):
        M[i, [q - 1 for q in s]] = 1
    return M


SHOR = CssCode(
    support_rows([[1, 2, 3, 4, 5, 6], [4, 5, 6, 7, 8, 9]], 9),
    support_rows([[1, 2], [2, 3], [4, 5], [5, 6], [7, 8], [8, 9]], 9),
)
SURFACE = CssCode(
    support_rows([[1, 2, 4, 5], [5, 6, 8, 9], [2, 3], [7, 8]], 9),
    support_rows([[2, 3, 5, 6], [4, 5, 7, 8], [1, 4], [6, 9]], 9),
)

# 0-based tableau rows: Z1Z2 <- Z4Z5 Z7Z8 and Z2Z3 <- Z5Z6 Z8Z9
SHOR_PREPROCESS = [(3, [5, 7]), (4, [6, 8])]
SHOR_REPLACE = (5, 6, 7, 8)
# boundary stabilizers X7X8 and Z1Z4
SURFACE_REPLACE = (4, 7)


def preprocessed_shor():
    T = build_css_tableau(SHOR)
    for target, sources in SHOR_PREPROCESS:
        T = multiply_stabilizer_rows(T, target, sources)
    return T


@pytest.fixture
def shor():
    return build_css_tableau(SHOR)


@pytest.fixture
def surface():
    return build_css_tableau(SURFACE)


def record(criterion: int, label: str, ok) -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok)))
    return bool(ok)


def acceptance_lines() -> list[str]:
    lines = []
    for n in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[n]
        failed = [label for label, ok in checks if not ok]
        status = "FAIL" if failed else "PASS"
        detail = "; ".join(failed) if failed else f"{len(checks)} checks"
        lines.append(f"criterion {n}: {status} ({detail})")
    return lines


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines():
            terminalreporter.write_line(line)
