import math
import os

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from qadditivity.state import StateParams

settings.register_profile("stress", max_examples=2000, deadline=None)
settings.register_profile("default", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def feasible_params(draw, z_zero=False):
    """Uniform-style draw over the feasible region, boundaries included."""
    p = draw(st.floats(0.0, 1.0))
    # magnitudes this small only exercise float underflow
    if p < 1e-100:
        p = 0.0
    k_min, k_max = -min(p * p, (1 - p) ** 2), p * (1 - p)
    t = draw(st.floats(0.0, 1.0))
    kappa = k_min + t * (k_max - k_min)
    b = max(p * (1 - p) - kappa, 0.0)
    z_mag = 0.0 if z_zero else draw(st.floats(0.0, 1.0)) * b
    if z_mag < 1e-100:
        z_mag = 0.0
    z_phase = draw(st.floats(0.0, 2 * math.pi, exclude_max=True))
    return StateParams(p, kappa, z_mag, z_phase)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def vn_entropy_of_matrix(rho):
    # independent of the analytic spectrum: numerical eigendecomposition
    lams = np.clip(np.linalg.eigvalsh(rho), 0, None)
    return float(-sum(x * np.log(x) for x in lams if x > 1e-15))


def tsallis_of_matrix(rho, q):
    lams = np.clip(np.linalg.eigvalsh(rho), 0, None)
    if q == 1:
        return vn_entropy_of_matrix(rho)
    return float((1 - sum(x**q for x in lams if x > 1e-15)) / (q - 1))


ACCEPTANCE_LOG = []


@pytest.fixture
def criterion():
    """Context manager that records one PASS/FAIL line per acceptance criterion."""
    from contextlib import contextmanager

    @contextmanager
    def _run(label):
        try:
            yield
        except BaseException as exc:
            ACCEPTANCE_LOG.append(f"FAIL  {label}  ({type(exc).__name__}: {exc})".splitlines()[0])
            raise
        ACCEPTANCE_LOG.append(f"PASS  {label}")

    return _run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
