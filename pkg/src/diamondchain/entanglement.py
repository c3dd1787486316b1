"""Wootters concurrence of the dimer state and threshold-temperature search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rdm import DimerState, reduced_density
from .transfer import ThermalState

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
# sigma^y (x) sigma^y is real.
YY = np.kron(SIGMA_Y, SIGMA_Y).real

EIG_CLAMP = 1e-12
_X_MASK = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 1],
    ],
    dtype=bool,
)


@dataclass(frozen=True)
class ConcurrenceResult:
    C: float
    lambdas: np.ndarray  # eigenvalues of R, descending
    method: str  # "general" | "xstate"


@dataclass(frozen=True)
class ThresholdResult:
    T_th: float | None
    bracket: tuple[float, float] | None
    status: str  # "found" | "never-entangled" | "entangled-at-Tmax"
    reentrant: bool = False


def _matrix(d):
    rho = d.rho if isinstance(d, DimerState) else np.asarray(d)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if isinstance(d, DimerState):
        d.check()
    return rho


def spin_flip(rho):
    """R = rho (sy x sy) rho* (sy x sy)."""
    return rho @ YY @ rho.conj() @ YY


def concurrence_general(d):
    """Concurrence from the spectrum of R, without assuming X structure.

    For real rho, R = (rho YY)^2 exactly, so sqrt(lambda_i) are the moduli of
    the eigenvalues of rho YY; taking them from that factor keeps absolute
    accuracy on near-pure states where sqrt(eig(R)) would lose half the digits.
    """
    rho = _matrix(d)
    if np.iscomplexobj(rho) and np.abs(rho.imag).max() > 0:
        lam = np.linalg.eigvals(spin_flip(rho))
        if np.abs(lam.imag).max() > 1e-10:
            raise ValueError("R has complex eigenvalues; input is not a density matrix")
        lam = lam.real
        if lam.min() < -EIG_CLAMP:
            raise ValueError(f"R has negative eigenvalue {lam.min():.3e}")
        lam = np.sort(np.clip(lam, 0.0, None))[::-1]
        roots = np.sqrt(lam)
    else:
        rho = rho.real
        factor = np.linalg.eigvals(rho @ YY)
        if np.abs(factor.imag).max() > 1e-10:
            raise ValueError("rho is not positive semidefinite (complex spectrum)")
        roots = np.sort(np.abs(factor))[::-1]
        lam = roots**2
    C = roots[0] - roots[1] - roots[2] - roots[3]
    return ConcurrenceResult(float(min(max(C, 0.0), 1.0)), lam, "general")


def concurrence_xstate(d, tol=1e-12):
    """C = 2 max(0, |rho23| - sqrt(rho11 rho44)) for X-structured states."""
    rho = _matrix(d)
    if np.abs(rho[~_X_MASK]).max() > tol:
        raise ValueError("state is not X-structured")
    r11, r22, r33, r44 = (rho[i, i].real for i in range(4))
    if min(r11, r44) < -tol:
        raise ValueError("negative population")
    c = abs(rho[1, 2])
    outer = math.sqrt(max(r11, 0.0) * max(r44, 0.0))
    inner = math.sqrt(max(r22 * r33, 0.0))
    roots = np.sort([inner + c, abs(inner - c), outer, outer])[::-1]
    C = 2.0 * max(0.0, c - outer)
    return ConcurrenceResult(float(min(C, 1.0)), roots**2, "xstate")


def concurrence_at(spec, validate=False):
    """Concurrence of the isolated dimer for a chain spec.

    With ``validate=True`` the general construction is evaluated too and a
    disagreement beyond 1e-12 raises ``ArithmeticError``.
    """
    dimer = reduced_density(spec)
    result = concurrence_xstate(dimer)
    if validate:
        general = concurrence_general(dimer)
        if abs(general.C - result.C) > 1e-12:
            raise ArithmeticError(
                f"concurrence methods disagree: {general.C!r} vs {result.C!r}"
            )
    return result


def _c_of_T(spec):
    def C(T):
        return concurrence_at(spec.replace(thermal=ThermalState.from_temperature(T))).C

    return C


def threshold_temperature(spec, T_max, tol=1e-4, n_scan=64, T_min=None):
    """Largest temperature in (0, T_max] above which C vanishes.

    Log-spaced coarse scan over [T_min, T_max] (default T_min = T_max/1000),
    then bisection on the last entangled-to-separable step.  ``reentrant``
    flags scans with more than one sign change.
    """
    if not T_max > 0 or not tol > 0:
        raise ValueError("T_max and tol must be positive")
    if n_scan < 64:
        raise ValueError("coarse scan needs at least 64 points")
    T_min = T_max * 1e-3 if T_min is None else T_min
    C = _c_of_T(spec)
    Ts = np.geomspace(T_min, T_max, n_scan)
    entangled = np.array([C(T) > 0 for T in Ts])
    reentrant = int(np.count_nonzero(entangled[1:] != entangled[:-1])) > 1
    if not entangled.any():
        return ThresholdResult(None, None, "never-entangled", reentrant)
    if entangled[-1]:
        return ThresholdResult(None, (float(Ts[-1]), float(Ts[-1])), "entangled-at-Tmax", reentrant)
    i = int(np.flatnonzero(entangled)[-1])
    lo, hi = float(Ts[i]), float(Ts[i + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if C(mid) > 0:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), "found", reentrant)
