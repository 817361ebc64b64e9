import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import settings

from torsionkit.exterior import KForm

from oracles import perm_sign

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance():
    """Record one ``criterion -> PASS/FAIL`` line for the terminal summary."""
    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return record


def random_form(rng, n, k, scale=1.0):
    """Random k-form with independent normal coefficients."""
    if k == 0:
        return KForm(n, 0, [rng.normal() * scale])
    return KForm.from_tensor(alternate(rng.normal(size=(n,) * k) * scale, k))


def alternate(t, k):
    return sum(perm_sign(p) * np.transpose(t, p) for p in permutations(range(k))) / math.factorial(k)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
