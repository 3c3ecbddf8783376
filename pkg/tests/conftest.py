import pytest

from spectral_levy import ClassParams, JumpDensity, LevyTriplet


@pytest.fixture
def gaussian_triplet():
    return LevyTriplet(gamma=1.0, sigma2=1.0, lam=1.0, jump_density=JumpDensity.gaussian(0.0, 1.0))


@pytest.fixture
def reference_params():
    return ClassParams(beta=1.0, L=10.0, Lambda=2.0, K=10.0, Sigma=2.0, Gamma=2.0, C=10.0)


ALL_DENSITIES = [
    JumpDensity.gaussian(0.0, 1.0),
    JumpDensity.gaussian(0.5, 0.7),
    JumpDensity.laplace(0.0, 1.0),
    JumpDensity.laplace(-0.3, 0.5),
    JumpDensity.bilateral_exponential(2.0),
    JumpDensity.uniform_sym(1.5),
]


# acceptance criteria report: (number, title, passed, detail)
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
