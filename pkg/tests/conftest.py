import random
from fractions import Fraction

import pytest

from polytope_em import builtin

SUITE = ["interval", "square", "cube", "T2", "simplex3"]


def random_weights(n, seed):
    rng = random.Random(seed)
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(n)]


@pytest.fixture(params=SUITE)
def suite_polytope(request):
    return builtin(request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
