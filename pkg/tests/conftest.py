import sys

import pytest

from sqzcool.optimizer import matched_bandwidth, optimal_phase
from sqzcool.params import OptomechParams, squeezed_model

PHI_OPT = optimal_phase(1.0, 1.0)


def reference_model(s0=0.3, xi=1.0, g=0.1, phi=None, r_plus=None):
    """Cooling reference: kappa = delta = 1, gamma = 2e-7, N_th = 1000."""
    om = OptomechParams(g=g)
    if r_plus is None:
        r_plus = matched_bandwidth(s0, xi, 1.0, 1.0).r_plus if xi > 0 and s0 < 1 else 1.0
    return squeezed_model(om, s0, r_plus, PHI_OPT if phi is None else phi, xi=xi)


@pytest.fixture
def ref():
    return reference_model


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    RESULTS = mod.RESULTS
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
