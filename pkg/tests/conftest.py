import sys

import numpy as np
import pytest

from kmu_verify.contact import random_structure

KAPPAS = (1.0, 0.5, 0.0)


def structure_for(kappa, m=3, seed=0, c=-3.0):
    return random_structure(m, kappa, c if kappa == 1.0 else None, seed=seed)


@pytest.fixture(params=KAPPAS, ids=lambda k: f"kappa={k}")
def structure(request):
    return structure_for(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
