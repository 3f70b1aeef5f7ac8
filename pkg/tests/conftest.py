from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# derandomized so every run explores the same examples
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repro")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def on_shell(v3):
    v3 = np.asarray(v3, dtype=float)
    g = 1.0 / np.sqrt(1.0 - v3 @ v3)
    return np.concatenate([[g], g * v3])


# acceptance results, filled by tests/test_acceptance.py and printed after the run
ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[2:])):
        parts = ACCEPTANCE[key]
        ok = all(p for p, _ in parts)
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}: " + "; ".join(d for _, d in parts))
