import math

import numpy as np
import pytest

from btps.symbols import (SphereSymbol, linear_sphere_symbol, model_symbol, scottish_flag,
                          twist_demo)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def x3():
    return SphereSymbol.coordinate(3)


@pytest.fixture
def FA():
    return linear_sphere_symbol(1.0)


@pytest.fixture
def scot():
    return scottish_flag()


@pytest.fixture
def twist():
    return twist_demo()


@pytest.fixture
def plane_model():
    return model_symbol(0.5)


def random_sphere_point(rng):
    v = rng.normal(size=3)
    return tuple(0.5 * v / np.linalg.norm(v))


COSH1_HALF = math.cosh(1.0) / 2


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
