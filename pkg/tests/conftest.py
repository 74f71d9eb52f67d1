from fractions import Fraction

import pytest
from hypothesis import settings

from gtml.zw import ZwParams

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

HALF = Fraction(1, 2)


@pytest.fixture
def params_a():
    return ZwParams.from_values(HALF, HALF, HALF, HALF)


@pytest.fixture
def params_c():
    return ZwParams.from_values((HALF, 1), (HALF, -1), Fraction(1, 4), Fraction(1, 4))


@pytest.fixture(params=["A", "C"])
def params(request, params_a, params_c):
    return params_a if request.param == "A" else params_c


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
