import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bcfourier.arith import CoefficientSpec, LocalFieldSpec

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

Q2 = LocalFieldSpec(2, 1, "zero-unramified")
Q3 = LocalFieldSpec(3, 1, "zero-unramified")
Q4UR = LocalFieldSpec(2, 2, "zero-unramified")
F2T = LocalFieldSpec(2, 1, "positive")
F4T = LocalFieldSpec(2, 2, "positive")
F3T = LocalFieldSpec(3, 1, "positive")

ACCEPTANCE_FIELDS = [Q2, Q3, F2T, F4T]


def small_ring(field, M, n=2):
    """A coefficient ring with ell != p and a small modulus."""
    ell = 3 if field.p == 2 else 2
    return CoefficientSpec(ell, n, M).ring(field.p)


def roots_needed(field, m, k):
    if field.char_zero:
        return m + k
    return 1 if m + k else 0


@pytest.fixture
def rng(request):
    seed = abs(hash(request.node.nodeid)) % (2**32)
    return np.random.default_rng(seed)


_ACCEPTANCE = []


def record_acceptance(name, passed, detail):
    _ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}: {detail}")
