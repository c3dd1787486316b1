import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamondchain.entanglement import (
    concurrence_at,
    concurrence_general,
    concurrence_xstate,
    spin_flip,
    threshold_temperature,
)
from diamondchain.rdm import DimerState, reduced_density
from diamondchain.spectra import CouplingSet, ImpurityStrengths
from diamondchain.transfer import ThermalState, make_spec

from conftest import draw_spec

BELL = DimerState.from_elements(0.0, 0.5, 0.5, 0.5, 0.0)
MIXED = DimerState.from_elements(0.25, 0.25, 0.0, 0.25, 0.25)


@st.composite
def x_states(draw):
    """Random valid X states, including nearly pure ones."""
    w = np.array([draw(st.floats(0, 1)) for _ in range(3)]) + 1e-300
    w = w / w.sum()
    p11, pc, p44 = w
    frac = draw(st.floats(0, 1))
    sign = draw(st.sampled_from([-1.0, 1.0]))
    return DimerState.from_elements(p11, pc / 2, sign * frac * pc / 2, pc / 2, p44)


def test_bell_state():
    assert concurrence_general(BELL).C == pytest.approx(1.0, abs=1e-15)
    assert concurrence_xstate(BELL).C == 1.0


def test_maximally_mixed():
    assert concurrence_general(MIXED).C == 0.0
    assert concurrence_xstate(MIXED).C == 0.0


def test_xstate_zero_coherence():
    assert concurrence_xstate(DimerState.from_elements(0.7, 0.1, 0.0, 0.1, 0.1)).C == 0.0


def test_general_handles_complex_input():
    psi = np.array([0, 1, 1j, 0]) / math.sqrt(2)
    rho = np.outer(psi, psi.conj())
    res = concurrence_general(rho)
    assert res.C == pytest.approx(1.0, abs=1e-7)
    assert np.all(np.diff(res.lambdas) <= 0)


def test_general_does_not_assume_x_structure():
    # |psi> = cos t |00> + sin t |11> has C = |sin 2t|
    t = 0.3
    psi = np.array([math.cos(t), 0, 0, math.sin(t)])
    assert concurrence_general(np.outer(psi, psi)).C == pytest.approx(abs(math.sin(2 * t)), abs=1e-14)
    with pytest.raises(ValueError):
        concurrence_xstate(np.outer(psi, psi))


def test_lambdas_are_spectrum_of_R(rng):
    for _ in range(50):
        d = reduced_density(draw_spec(rng, T_range=(0.3, 5)))
        res = concurrence_general(d)
        eig = np.sort(np.linalg.eigvals(spin_flip(d.rho)).real)[::-1]
        assert np.allclose(res.lambdas, eig, atol=1e-12)
        assert np.all(np.diff(res.lambdas) <= 0) and res.lambdas.min() >= 0


@settings(max_examples=500, deadline=None)
@given(x_states())
def test_methods_agree_on_random_x_states(d):
    g, x = concurrence_general(d), concurrence_xstate(d)
    assert 0.0 <= x.C <= 1.0
    assert abs(g.C - x.C) < 1e-12
    assert np.allclose(g.lambdas, x.lambdas, atol=1e-12)


def test_methods_agree_on_chain_states(rng):
    for _ in range(1000):
        d = reduced_density(draw_spec(rng, N=[None, 3, 6][int(rng.integers(3))]))
        assert abs(concurrence_general(d).C - concurrence_xstate(d).C) < 1e-12


def test_general_rejects_invalid_state():
    with pytest.raises(ValueError):
        concurrence_general(DimerState.from_elements(0.5, 0.25, 0.4, 0.25, 0.0))


def test_infinite_temperature_unentangled():
    assert concurrence_at(make_spec(1, 0.9, 1, 1.0, math.inf, gamma=0.8, eta=-0.8)).C == 0.0


def test_anisotropic_impurity_near_maximal_at_low_field():
    # The plateau of Fig. 4(b) starts around h = 0.5 and peaks near h = 1.
    assert concurrence_at(make_spec(1, 1, 1, 0.5, 0.1, gamma=0.8, eta=-0.8)).C > 0.95
    hs = np.linspace(0, 2.5, 251)
    best = max(concurrence_at(make_spec(1, 1, 1, h, 0.1, gamma=0.8, eta=-0.8)).C for h in hs)
    assert best > 0.999


def test_concurrence_at_validate_mode(rng):
    for _ in range(20):
        assert 0 <= concurrence_at(draw_spec(rng), validate=True).C <= 1


def test_field_reversal_symmetry(rng):
    for _ in range(200):
        spec = draw_spec(rng)
        c = spec.host
        flipped = spec.replace(host=CouplingSet(c.J, c.Delta, c.J1, -c.h))
        assert concurrence_at(spec).C == pytest.approx(concurrence_at(flipped).C, abs=1e-12)


def test_trivial_impurities_reproduce_homogeneous(rng):
    for _ in range(100):
        spec = draw_spec(rng)
        plain = spec.replace(imp=ImpurityStrengths())
        explicit_zero = spec.replace(imp=ImpurityStrengths(0.0, -0.0, 0.0))
        assert concurrence_at(plain).C == pytest.approx(concurrence_at(explicit_zero).C, abs=1e-12)


def test_vanishes_at_high_temperature(rng):
    hot = np.geomspace(20, 1e4, 12)
    for _ in range(30):
        spec = draw_spec(rng)
        for T in hot:
            assert concurrence_at(spec.replace(thermal=ThermalState.from_temperature(T))).C == 0.0


def test_threshold_never_entangled():
    # ferromagnetic Heisenberg dimer: no thermal entanglement at any T
    res = threshold_temperature(make_spec(-1, 1, 1, 0.5, 1.0), T_max=3.0, tol=1e-3)
    assert res.status == "never-entangled" and res.T_th is None


def test_threshold_flags_reentrance():
    # strong field: polarised ground state, singlet admixture only at intermediate T
    res = threshold_temperature(make_spec(1, 0.1, 1, 5.0, 1.0), T_max=3.0, tol=1e-3)
    assert res.status == "found" and res.reentrant


def test_threshold_homogeneous_delta2():
    spec = make_spec(1, 2, 1, 1.6, 1.0)
    tol = 1e-5
    res = threshold_temperature(spec, T_max=3.0, tol=tol)
    assert res.status == "found" and not res.reentrant
    assert 1.0 <= res.T_th <= 1.3
    C = lambda T: concurrence_at(spec.replace(thermal=ThermalState.from_temperature(T))).C
    assert C(res.T_th - 10 * tol) > 0
    assert C(res.T_th + 10 * tol) == 0
    assert C(res.T_th - tol) > 0 and C(res.T_th + tol) < 1e-12
    half = threshold_temperature(spec, T_max=3.0, tol=tol / 2)
    assert abs(half.T_th - res.T_th) <= tol


def test_threshold_entangled_at_tmax():
    res = threshold_temperature(make_spec(1, 2, 1, 1.6, 1.0), T_max=0.5, tol=1e-3)
    assert res.status == "entangled-at-Tmax"


def test_threshold_argument_checks():
    spec = make_spec(1, 2, 1, 1.6, 1.0)
    with pytest.raises(ValueError):
        threshold_temperature(spec, T_max=0, tol=1e-3)
    with pytest.raises(ValueError):
        threshold_temperature(spec, T_max=1, tol=0)
    with pytest.raises(ValueError):
        threshold_temperature(spec, T_max=1, tol=1e-3, n_scan=10)
