import cmath
import math

import pytest


def circle(n):
    return cmath.exp(1j * math.pi / (2 * n))


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(11)


ACCEPTANCE = []


def report(num, ok, detail):
    line = "criterion %2d: %s  %s" % (num, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
