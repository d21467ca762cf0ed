import sys
import numpy as np
import pytest

from thermoform.gibbs import MarkovMeasure
from thermoform.sft import FnTable

from oracles import random_kernel


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_markov(rng, m, order):
    M, pi = random_kernel(rng, m, order)
    return MarkovMeasure(m, order, pi, M)


def fair_coin():
    return FnTable.constant(2, np.log(0.5), 2)


def ind0():
    return FnTable.indicator(2, [0])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
