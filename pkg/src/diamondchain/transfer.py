"""Boltzmann weight matrices, host transfer-matrix eigensystem and Z_N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .spectra import CouplingSet, ImpurityStrengths, effective_couplings, energy_table


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature (k_B = 1). ``beta == 0`` is infinite temperature."""

    beta: float

    def __post_init__(self):
        if math.isnan(self.beta) or self.beta < 0 or math.isinf(self.beta):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")

    @classmethod
    def from_temperature(cls, T):
        if math.isnan(T) or T <= 0:
            raise ValueError(f"temperature must be > 0, got {T!r}")
        return cls(0.0 if math.isinf(T) else 1.0 / T)

    @property
    def T(self):
        return math.inf if self.beta == 0 else 1.0 / self.beta


@dataclass(frozen=True)
class ChainSpec:
    """Host couplings, impurity strengths, ring size and temperature.

    ``N=None`` selects the thermodynamic limit.  ``host_offset`` and
    ``imp_offset`` add a constant to every host (resp. impurity) plaquette
    energy; they rescale Z_N and leave every normalised quantity unchanged.
    """

    host: CouplingSet
    thermal: ThermalState
    imp: ImpurityStrengths = field(default_factory=ImpurityStrengths)
    N: int | None = None
    host_offset: float = 0.0
    imp_offset: float = 0.0

    def __post_init__(self):
        if self.N is not None and (int(self.N) != self.N or self.N < 3):
            raise ValueError(f"ring needs N >= 3 cells, got N={self.N!r}")

    @property
    def impurity_couplings(self):
        return effective_couplings(self.host, self.imp)

    @property
    def is_finite(self):
        return self.N is not None

    def replace(self, **changes):
        return replace(self, **changes)


def make_spec(J, Delta, J1, h, T, alpha=0.0, gamma=0.0, eta=0.0, N=None):
    """Convenience constructor from flat parameters."""
    return ChainSpec(
        host=CouplingSet(J, Delta, J1, h),
        thermal=ThermalState.from_temperature(T),
        imp=ImpurityStrengths(alpha, gamma, eta),
        N=N,
    )


@dataclass(frozen=True)
class WeightMatrix:
    """2x2 weights ``w[sigma, sigma']`` scaled by ``exp(beta * shift)``.

    The true weight matrix is ``entries * exp(-beta * shift)``.
    """

    entries: np.ndarray
    shift: float

    @property
    def pp(self):
        return self.entries[0, 0]

    @property
    def pm(self):
        return self.entries[0, 1]

    @property
    def mm(self):
        return self.entries[1, 1]


def scaled_exponentials(c, t, offset=0.0):
    """``exp(-beta (eps - shift))`` for every edge configuration and level.

    Returns ``(table, shift)`` with table of shape (2, 2, 4); shift is the
    lowest energy over all edge configurations (0 when beta == 0).
    """
    energies = energy_table(c, offset)
    if np.isnan(energies).any():
        raise ValueError("NaN in plaquette energies")
    if t.beta == 0:
        return np.ones_like(energies), 0.0
    shift = float(energies.min())
    return np.exp(-t.beta * (energies - shift)), shift


def boltzmann_weights(c, t, offset=0.0):
    """Sum of the four scaled exponentials per edge configuration.

    Summed in sorted order so that equal spectra give bitwise-equal weights.
    Entries far below the dominant one (beyond exp(-745)) underflow to 0.
    """
    table, shift = scaled_exponentials(c, t, offset)
    return WeightMatrix(np.sort(table, axis=-1).sum(axis=-1), shift)


@dataclass(frozen=True)
class TransferDecomposition:
    W: WeightMatrix
    Wimp: WeightMatrix
    lambda_plus: float
    lambda_minus: float
    Q: float
    U: np.ndarray
    Uinv: np.ndarray
    # Unit-free eigenvectors of W (columns of U up to scale).
    v_plus: np.ndarray
    v_minus: np.ndarray

    @property
    def ratio(self):
        """Lambda_- / Lambda_+, |ratio| < 1."""
        return self.lambda_minus / self.lambda_plus

    def sandwich(self, X):
        """``U^-1 Wimp X Wimp U`` with the unnormalised eigenvector matrix U."""
        Wt = self.Wimp.entries
        return self.Uinv @ Wt @ X @ Wt @ self.U

    def sandwich_diagonal(self, X):
        """Diagonal of :meth:`sandwich` without forming U^-1.

        W is symmetric, so the columns of U are orthogonal and the diagonal of
        the similarity transform reduces to Rayleigh quotients.  This stays
        defined when w_{+-} underflows.
        """
        Wt = self.Wimp.entries
        M = Wt @ X @ Wt
        vp, vm = self.v_plus, self.v_minus
        return np.array([vp @ M @ vp / (vp @ vp), vm @ M @ vm / (vm @ vm)])


def _diagonalize(W):
    w_pp, w_pm, w_mm = W.pp, W.pm, W.mm
    d = w_pp - w_mm
    Q = math.hypot(d, 2.0 * w_pm)
    # p = Lambda_+ - w_--, m = Lambda_- - w_--, evaluated without cancellation.
    if d >= 0:
        p = 0.5 * (d + Q)
        m = -2.0 * w_pm**2 / (d + Q) if Q > 0 else 0.0
    else:
        m = 0.5 * (d - Q)
        p = 2.0 * w_pm**2 / (Q - d)
    t = 2.0 * w_pm / (abs(d) + Q) if Q > 0 else 0.0
    if d >= 0:
        v_plus, v_minus = np.array([1.0, t]), np.array([-t, 1.0])
    else:
        v_plus, v_minus = np.array([t, 1.0]), np.array([1.0, -t])
    lam_p = w_mm + p
    lam_m = w_mm + m
    U = np.array([[p, m], [w_pm, w_pm]])
    with np.errstate(all="ignore"):
        Uinv = np.array(
            [[1.0 / Q, -m / (Q * w_pm)], [-1.0 / Q, p / (Q * w_pm)]]
        )
    return lam_p, lam_m, Q, U, Uinv, v_plus, v_minus


def decompose(spec):
    W = boltzmann_weights(spec.host, spec.thermal, spec.host_offset)
    Wimp = boltzmann_weights(spec.impurity_couplings, spec.thermal, spec.imp_offset)
    lam_p, lam_m, Q, U, Uinv, vp, vm = _diagonalize(W)
    return TransferDecomposition(W, Wimp, lam_p, lam_m, Q, U, Uinv, vp, vm)


def finite_coefficients(dec):
    """(A, D): diagonal of ``U^-1 Wimp W Wimp U``."""
    A, D = dec.sandwich_diagonal(dec.W.entries)
    return A, D


def partition_function(spec, dec=None):
    """Natural log of Z_N (finite ring) or of Z per cell (N=None).

    Finite ring: Z_N = A Lambda_+^(N-3) + D Lambda_-^(N-3), evaluated as
    (N-3) log Lambda_+ + log(A + D ratio^(N-3)) and corrected for the energy
    shifts of the N-2 host-type and 2 impurity plaquettes.
    """
    dec = decompose(spec) if dec is None else dec
    beta = spec.thermal.beta
    if spec.N is None:
        return math.log(dec.lambda_plus) - beta * dec.W.shift
    N = int(spec.N)
    if N < 3:
        raise ValueError(f"ring needs N >= 3 cells, got N={N}")
    n = N - 3
    A, D = finite_coefficients(dec)
    core = A + D * dec.ratio**n
    if not core > 0:
        raise FloatingPointError(f"non-positive partition sum {core!r}")
    log_z = n * math.log(dec.lambda_plus) + math.log(core)
    return log_z - beta * ((N - 2) * dec.W.shift + 2 * dec.Wimp.shift)
