from fractions import Fraction

import numpy as np
import pytest

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns the verdict so tests can assert on it."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        ok = bool(ok)
        ACCEPTANCE.append((label, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'} {label} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {label} {detail}")


def exact_step(b, w, confirmation_bias=False):
    """Belief update evaluated in rational arithmetic.

    Average over all j of B_i + f_ij * I[j][i] * (B_j - B_i).  Used as an
    independent oracle for the vectorised float implementation.
    """
    b = [Fraction(x) for x in b]
    w = [[Fraction(x) for x in row] for row in w]
    n = len(b)
    out = []
    for i in range(n):
        total = Fraction(0)
        for j in range(n):
            f = 1 - abs(b[j] - b[i]) if confirmation_bias else 1
            total += b[i] + f * w[j][i] * (b[j] - b[i])
        out.append(total / n)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20201019)
