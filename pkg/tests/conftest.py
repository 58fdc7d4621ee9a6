import json
import random
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from jumploci.cdga import CDGA
from jumploci.exactalg.rational import qq

settings.register_profile(
    "ci", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "jumploci" / "data" / "fixtures"
SCHEMAS = FIXTURES.parent / "schemas"


def fixture_path(rel: str) -> Path:
    return FIXTURES / rel


def load_json(rel: str) -> dict:
    return json.loads(fixture_path(rel).read_text(encoding="utf-8"))


def load_cdga(name: str) -> CDGA:
    return CDGA.load(fixture_path(f"cdga/{name}.json"))


def random_points(n: int, count: int, seed: int = 0x5EED, include_zero: bool = True):
    rng = random.Random(seed)
    pts = [[qq(0)] * n] if include_zero else []
    for _ in range(count):
        pts.append([qq(rng.randint(-40, 40)) / rng.randint(1, 12) for _ in range(n)])
    return pts


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


# --- acceptance reporting ------------------------------------------------------------

ACCEPTANCE: list = []
SUITE_BUDGET = 300.0
_START = time.monotonic()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line[1])
    elapsed = time.monotonic() - _START
    verdict = "PASS" if elapsed < SUITE_BUDGET else "FAIL"
    terminalreporter.write_line(f"{verdict} suite runtime {elapsed:.1f}s (budget {SUITE_BUDGET:.0f}s)")


def pytest_sessionfinish(session, exitstatus):
    if ACCEPTANCE and time.monotonic() - _START >= SUITE_BUDGET and exitstatus == 0:
        session.exitstatus = 1
