"""Reduced density operator of the XXZ dimer sitting between the impurities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectra import EDGE_CONFIGS, EdgeSpins
from .transfer import decompose, scaled_exponentials

# (k, l) pairs that can be non-zero; 1-based, matching rho_{k,l}.
X_ELEMENTS = ((1, 1), (2, 2), (2, 3), (3, 3), (4, 4))


@dataclass(frozen=True)
class PlaquetteThermalOperator:
    """Entries of ``sum_j exp(-beta (eps_j - shift)) |phi_j><phi_j|``."""

    rho11: float
    rho22: float
    rho23: float
    rho33: float
    rho44: float
    shift: float

    def element(self, k, l):
        return _element(self, k, l)

    def matrix(self):
        return _x_matrix(self.rho11, self.rho22, self.rho23, self.rho33, self.rho44)


def _element(obj, k, l):
    if (k, l) == (3, 2):
        k, l = 2, 3
    if (k, l) not in X_ELEMENTS:
        raise ValueError(f"({k},{l}) is outside the X pattern")
    return getattr(obj, f"rho{k}{l}")


def _x_matrix(r11, r22, r23, r33, r44):
    return np.array(
        [
            [r11, 0.0, 0.0, 0.0],
            [0.0, r22, r23, 0.0],
            [0.0, r23, r33, 0.0],
            [0.0, 0.0, 0.0, r44],
        ]
    )


def _operator_entries(x):
    """Map level exponentials (..., 4) to the five X entries (..., 5)."""
    sym = 0.5 * (x[..., 1] + x[..., 2])
    anti = 0.5 * (x[..., 1] - x[..., 2])
    return np.stack([x[..., 0], sym, anti, sym, x[..., 3]], axis=-1)


def plaquette_operator(c, e, t, offset=0.0):
    if not isinstance(e, EdgeSpins):
        e = EdgeSpins(*e)
    table, shift = scaled_exponentials(c, t, offset)
    n = EDGE_CONFIGS.index((e.mu_left, e.mu_right))
    entries = _operator_entries(table[n // 2, n % 2])
    return PlaquetteThermalOperator(*map(float, entries), shift=shift)


def p_matrices(spec):
    """All five P_{k,l} of the isolated (host-coupled) plaquette, shape (5, 2, 2)."""
    table, _ = scaled_exponentials(spec.host, spec.thermal, spec.host_offset)
    return np.moveaxis(_operator_entries(table), -1, 0)


def p_matrix(k, l, spec):
    """P_{k,l}: entries rho_{k,l}(mu, mu') of the isolated plaquette."""
    if (k, l) == (3, 2):
        k, l = 2, 3
    if (k, l) not in X_ELEMENTS:
        raise ValueError(f"({k},{l}) is outside the X pattern")
    return p_matrices(spec)[X_ELEMENTS.index((k, l))]


@dataclass(frozen=True)
class DimerState:
    """X-structured 4x4 reduced density matrix; ``N=None`` for the limit."""

    rho: np.ndarray
    N: int | None = None

    @classmethod
    def from_elements(cls, r11, r22, r23, r33, r44, N=None):
        return cls(_x_matrix(r11, r22, r23, r33, r44), N)

    @property
    def rho11(self):
        return self.rho[0, 0]

    @property
    def rho22(self):
        return self.rho[1, 1]

    @property
    def rho23(self):
        return self.rho[1, 2]

    @property
    def rho33(self):
        return self.rho[2, 2]

    @property
    def rho44(self):
        return self.rho[3, 3]

    def element(self, k, l):
        return self.rho[k - 1, l - 1]

    def check(self, tol=1e-12):
        """Raise ``ValueError`` if trace, symmetry or positivity fail beyond tol."""
        rho = self.rho
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > tol:
            raise ValueError(f"trace {np.trace(rho).real!r} differs from 1")
        if min(rho[0, 0].real, rho[3, 3].real) < -tol:
            raise ValueError("negative population")
        if abs(rho[1, 2]) ** 2 - (rho[1, 1] * rho[2, 2]).real > tol:
            raise ValueError("central block is not positive semidefinite")
        return self


def reduced_density_finite(spec, dec=None):
    if spec.N is None or spec.N < 3:
        raise ValueError(f"finite ring needs N >= 3, got N={spec.N!r}")
    dec = decompose(spec) if dec is None else dec
    n = int(spec.N) - 3
    powers = np.array([1.0, dec.ratio**n])
    A, D = dec.sandwich_diagonal(dec.W.entries)
    Z = A * powers[0] + D * powers[1]
    values = [dec.sandwich_diagonal(P) @ powers / Z for P in p_matrices(spec)]
    return DimerState.from_elements(*values, N=int(spec.N))


def reduced_density_limit(spec, dec=None):
    dec = decompose(spec) if dec is None else dec
    A = dec.sandwich_diagonal(dec.W.entries)[0]
    values = [dec.sandwich_diagonal(P)[0] / A for P in p_matrices(spec)]
    return DimerState.from_elements(*values, N=None)


def reduced_density(spec, dec=None):
    if spec.N is None:
        return reduced_density_limit(spec, dec)
    return reduced_density_finite(spec, dec)
