import math

import numpy as np
import pytest
from hypothesis import settings

from strip_hardy import BlaschkeData, BlaschkeZero, make_grid

settings.register_profile("strip", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("strip")

MIDLINE = -0.5j * math.pi


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(16, 2048)


@pytest.fixture(scope="session")
def big_grid():
    return make_grid()


@pytest.fixture(scope="session")
def gaussian(small_grid):
    return small_grid.sample(lambda th: np.exp(-th * th / 2))


def midline_zeros(*re_parts):
    return BlaschkeData(tuple(BlaschkeZero(x + MIDLINE) for x in re_parts))


def paired(alpha):
    return BlaschkeData((BlaschkeZero(alpha), BlaschkeZero(alpha.conjugate() - 1j * math.pi)))


def rel_l2(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) / np.sum(np.abs(b) ** 2)))


ACCEPTANCE = []


def verdict(number, ok, detail):
    """Record and print one acceptance line; returns ``ok`` for the assert."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
