import numpy as np
import pytest

from eprigidity.exceptions import NotAnEP
from eprigidity.jordan import EPSpec


def uniform_complex(rng, shape):
    return rng.uniform(-0.5, 0.5, shape) + 1j * rng.uniform(-0.5, 0.5, shape)


def random_ep(n, rng, E_EP=None):
    """EPSpec for Q J Q^-1 with a random, reasonably conditioned Q."""
    if E_EP is None:
        E_EP = complex(*rng.uniform(-1, 1, 2))
    J = E_EP * np.eye(n) + np.eye(n, k=1)
    while True:
        Q = uniform_complex(rng, (n, n))
        if np.linalg.cond(Q) > 1e3:
            continue
        try:
            return EPSpec(Q @ J @ np.linalg.inv(Q), E_EP, n)
        except NotAnEP:
            # a rare draw with ||N^(n-1)|| below the relative index threshold
            continue


def random_unitary_oracle(m, rng):
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / abs(np.diag(R)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(key, title, passed, detail):
    ACCEPTANCE[key] = (title, bool(passed), detail)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        title, passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {key} {title}: {detail}")
