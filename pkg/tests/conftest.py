import numpy as np
import pytest

from diamondchain import ChainSpec, CouplingSet, ImpurityStrengths, ThermalState


def draw_spec(rng, N=None, coupling=2.0, T_range=(0.05, 5.0), strength=1.0):
    J, Delta, J1, h = map(float, rng.uniform(-coupling, coupling, 4))
    alpha, gamma, eta = map(float, rng.uniform(-strength, strength, 3))
    return ChainSpec(
        host=CouplingSet(J, Delta, J1, h),
        thermal=ThermalState.from_temperature(float(rng.uniform(*T_range))),
        imp=ImpurityStrengths(alpha, gamma, eta),
        N=N,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[_ACCEPTANCE].append


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_ACCEPTANCE]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
