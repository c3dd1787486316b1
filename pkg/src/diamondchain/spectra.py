"""Plaquette Hamiltonians and their closed-form eigensystems.

Basis convention: ``|0> = |up>`` (S^z = +1/2), ``|1> = |down>``, two-spin
product basis ordered ``|00>, |01>, |10>, |11>``.  Energies are kept in the
fixed eigenvector order (phi1..phi4), never sorted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPIN_UP = 0.5
SPIN_DOWN = -0.5

# Edge configurations in transfer-matrix order: (+,+), (+,-), (-,+), (-,-).
EDGE_CONFIGS = (
    (SPIN_UP, SPIN_UP),
    (SPIN_UP, SPIN_DOWN),
    (SPIN_DOWN, SPIN_UP),
    (SPIN_DOWN, SPIN_DOWN),
)

_S = 1.0 / math.sqrt(2.0)
# Columns are |phi1>, |phi2>, |phi3>, |phi4>.
EIGENBASIS = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, _S, _S, 0.0],
        [0.0, _S, -_S, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
EIGENBASIS.setflags(write=False)

_SZ = np.diag([0.5, -0.5])
_SP = np.array([[0.0, 1.0], [0.0, 0.0]])
_SM = _SP.T
_I2 = np.eye(2)


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")


@dataclass(frozen=True)
class CouplingSet:
    """Physical parameters of one diamond plaquette.

    ``Delta`` is dimensionless; the zz term of the dimer carries ``J * Delta``.
    """

    J: float
    Delta: float
    J1: float
    h: float

    def __post_init__(self):
        for name in ("J", "Delta", "J1", "h"):
            _check_finite(name, getattr(self, name))


@dataclass(frozen=True)
class ImpurityStrengths:
    alpha: float = 0.0
    gamma: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "gamma", "eta"):
            _check_finite(name, getattr(self, name))

    @property
    def is_trivial(self):
        return self.alpha == 0.0 and self.gamma == 0.0 and self.eta == 0.0


@dataclass(frozen=True)
class EdgeSpins:
    mu_left: float
    mu_right: float

    def __post_init__(self):
        for value in (self.mu_left, self.mu_right):
            if value not in (SPIN_UP, SPIN_DOWN):
                raise ValueError(f"Ising spins must be +1/2 or -1/2, got {value!r}")

    @property
    def total(self):
        return self.mu_left + self.mu_right


@dataclass(frozen=True)
class PlaquetteSpectrum:
    energies: np.ndarray  # shape (4,), order phi1..phi4

    @property
    def basis(self):
        return EIGENBASIS


def _as_edges(e):
    if isinstance(e, EdgeSpins):
        return e
    return EdgeSpins(*e)


def effective_couplings(host, imp):
    """Impurity couplings: J(1+alpha), Delta(1+gamma), J1(1+eta); h unchanged."""
    return CouplingSet(
        J=host.J * (1.0 + imp.alpha),
        Delta=host.Delta * (1.0 + imp.gamma),
        J1=host.J1 * (1.0 + imp.eta),
        h=host.h,
    )


def _two_site(a, b):
    return np.kron(a, b)


def plaquette_hamiltonian(c, e):
    """Explicit 4x4 plaquette Hamiltonian for fixed edge Ising spins."""
    e = _as_edges(e)
    mu = e.total
    sz_tot = _two_site(_SZ, _I2) + _two_site(_I2, _SZ)
    flip = 0.5 * (_two_site(_SP, _SM) + _two_site(_SM, _SP))
    zz = _two_site(_SZ, _SZ)
    H = (
        c.J * (flip + c.Delta * zz)
        + c.J1 * mu * sz_tot
        - c.h * sz_tot
        - 0.5 * c.h * mu * np.eye(4)
    )
    return H


def closed_form_energies(c, e):
    """Eigenvalues of :func:`plaquette_hamiltonian` paired with ``EIGENBASIS``.

    The fully polarised states see the dimer Zeeman term with weight h (not
    h/2), which is what the explicit Hamiltonian produces.
    """
    e = _as_edges(e)
    mu = e.total
    ising_field = -0.5 * c.h * mu
    jz = 0.25 * c.J * c.Delta
    energies = np.array(
        [
            jz + c.J1 * mu - c.h + ising_field,
            -jz + 0.5 * c.J + ising_field,
            -jz - 0.5 * c.J + ising_field,
            jz - c.J1 * mu + c.h + ising_field,
        ]
    )
    return PlaquetteSpectrum(energies)


def energy_table(c, offset=0.0):
    """Energies for all edge configurations, shape (2, 2, 4).

    Index ``[i, j, k]``: left spin i, right spin j (0 = up, 1 = down), level k.
    """
    table = np.empty((2, 2, 4))
    for n, (ml, mr) in enumerate(EDGE_CONFIGS):
        table[n // 2, n % 2] = closed_form_energies(c, (ml, mr)).energies + offset
    return table
