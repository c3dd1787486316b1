import math

import numpy as np
import pytest

from diamondchain.oracle import (
    oracle_dimer_state,
    oracle_full_hilbert,
    oracle_full_hilbert_partition,
    oracle_partition,
    random_specs,
)
from diamondchain.rdm import reduced_density
from diamondchain.spectra import ImpurityStrengths
from diamondchain.transfer import decompose, make_spec, partition_function

from conftest import draw_spec


def test_infinite_temperature_partition():
    spec = make_spec(0.4, 1.1, -1.3, 0.2, math.inf, 0.5, 0.5, 0.5, N=5)
    assert math.exp(oracle_partition(spec)) == pytest.approx(32768, rel=1e-14)


def test_homogeneous_trace_identity():
    spec = make_spec(1.1, -0.6, 0.8, 0.3, 0.7, N=4)
    dec = decompose(spec)
    lp, lm = (x * math.exp(-dec.W.shift / 0.7) for x in (dec.lambda_plus, dec.lambda_minus))
    assert math.exp(oracle_partition(spec)) == pytest.approx(lp**4 + lm**4, rel=1e-12)


def test_random_ring_matches_transfer(rng):
    spec = draw_spec(rng, N=6)
    assert oracle_partition(spec, r=3) == pytest.approx(partition_function(spec), rel=1e-12)


def test_infinite_temperature_state():
    spec = make_spec(1, 2, 3, 0.5, math.inf, N=4)
    assert np.allclose(oracle_dimer_state(spec).rho, np.eye(4) / 4, atol=1e-15)
    assert np.allclose(oracle_full_hilbert(spec).rho, np.eye(4) / 4, atol=1e-15)


def test_three_cell_ring_matches_transfer(rng):
    for _ in range(10):
        spec = draw_spec(rng, N=3)
        assert np.abs(oracle_dimer_state(spec, 2).rho - reduced_density(spec).rho).max() < 1e-12


def test_position_independence(rng):
    for _ in range(10):
        spec = draw_spec(rng, N=5)
        states = [oracle_dimer_state(spec, r).rho for r in range(1, 6)]
        for rho in states[1:]:
            assert np.abs(rho - states[0]).max() < 1e-12


def test_normalisation(rng):
    for _ in range(20):
        rho = oracle_dimer_state(draw_spec(rng, N=int(rng.integers(3, 8)))).rho
        assert abs(np.trace(rho) - 1) < 1e-13


def test_full_hilbert_matches_enumeration(rng):
    for _ in range(5):
        spec = draw_spec(rng, N=3)
        r = int(rng.integers(1, 4))
        full = oracle_full_hilbert(spec, r).rho
        assert np.abs(full - oracle_dimer_state(spec, r).rho).max() < 1e-10
        assert oracle_full_hilbert_partition(spec, r) == pytest.approx(oracle_partition(spec, r), rel=1e-10)
        # off-X entries vanish in the dense calculation
        mask = np.ones((4, 4), bool)
        mask[[0, 1, 1, 2, 2, 3], [0, 1, 2, 1, 2, 3]] = False
        assert np.abs(full[mask]).max() < 1e-12


def test_full_hilbert_homogeneous_matches_transfer():
    spec = make_spec(0.9, 1.3, 0.7, 0.6, 0.4, N=3)
    assert np.abs(oracle_full_hilbert(spec).rho - reduced_density(spec).rho).max() < 1e-10


@pytest.mark.slow
def test_full_hilbert_four_cells():
    spec = make_spec(1.0, 0.9, 1.0, 1.1, 0.5, 0.2, 0.8, -0.8, N=4)
    assert np.abs(oracle_full_hilbert(spec, 2).rho - reduced_density(spec).rho).max() < 1e-10


def test_budget_limits():
    spec = make_spec(1, 1, 1, 0, 1, N=25)
    with pytest.raises(ValueError):
        oracle_partition(spec)
    with pytest.raises(ValueError):
        oracle_full_hilbert(make_spec(1, 1, 1, 0, 1, N=5))
    with pytest.raises(ValueError):
        oracle_partition(make_spec(1, 1, 1, 0, 1))
    with pytest.raises(ValueError):
        oracle_dimer_state(make_spec(1, 1, 1, 0, 1, N=4), r=5)


def test_long_ring_enumeration():
    spec = make_spec(1, 0.9, 1, 1.2, 0.3, gamma=0.8, eta=-0.8, N=16)
    assert oracle_partition(spec, 7) == pytest.approx(partition_function(spec), rel=1e-12)
    assert np.abs(oracle_dimer_state(spec, 7).rho - reduced_density(spec).rho).max() < 1e-12


def test_random_specs_deterministic():
    a = [s for s, _ in random_specs((3, 4), 5, 4)]
    b = [s for s, _ in random_specs((3, 4), 5, 4)]
    assert a == b


def test_zero_exchange_handled():
    spec = make_spec(0.0, 1.0, 1.0, 0.4, 0.5, gamma=0.3, N=5)
    rho = oracle_dimer_state(spec).rho
    assert rho[1, 2] == 0.0
    assert np.abs(rho - reduced_density(spec).rho).max() < 1e-12
