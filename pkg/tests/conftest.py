import random
from fractions import Fraction

import pytest

from telesigma import CurveSpec
from telesigma.polyring import LambdaKey
from telesigma.semigroup import TelescopicSequence, is_telescopic

CURVES = [(2, 3), (2, 5), (3, 4), (4, 6, 5)]


def random_telescopic(rng: random.Random, max_t: int = 4, max_a: int = 20):
    while True:
        t = rng.randint(2, max_t)
        a = [rng.randint(1, max_a) for _ in range(t)]
        if is_telescopic(a):
            return TelescopicSequence(tuple(a))


def hyperelliptic(s: int, lam10: int = -1) -> CurveSpec:
    """y^2 = x^s + lam10 * x."""
    seq = TelescopicSequence((2, s))
    return CurveSpec(seq, {LambdaKey(2, (1, 0)): Fraction(lam10)}, "zero")


@pytest.fixture
def elliptic_square():
    return hyperelliptic(3)


@pytest.fixture
def genus_two():
    return hyperelliptic(5)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
