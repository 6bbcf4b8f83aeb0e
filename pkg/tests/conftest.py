import itertools
import random

import pytest

from sphereq.algebra import GroupParams, fold_conjugates
from sphereq.equations import CiseInstance, SphericalInstance


@pytest.fixture
def g31():
    return GroupParams(3, 1)


@pytest.fixture
def g51():
    return GroupParams(5, 1)


@pytest.fixture
def rng():
    return random.Random(20261014)


def el(params, *xs):
    """Element shorthand: ``el(G, x_1, ..., x_n, alpha)``."""
    return params.element(xs[:-1], xs[-1])


def random_element(params, rng):
    return params.element([rng.randrange(params.p) for _ in range(params.n)], rng.randrange(1, params.p))


def naive_solutions(instance):
    """All assignments found by literal enumeration and triple products."""
    if isinstance(instance, SphericalInstance):
        instance = CiseInstance.unconstrained(instance)
    params = instance.params
    pools = [con.candidates(params) for con in instance.constraints]
    return [
        zs
        for zs in itertools.product(*pools)
        if fold_conjugates(zs, instance.base.coefficients) == instance.base.rhs
    ]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
