import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "sclforge", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("sclforge")

SEED = int(os.environ.get("SCLFORGE_SEED", "0"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance check."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call" and status != "error":
                continue
            if "test_acceptance.py" in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
