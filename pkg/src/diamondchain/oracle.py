"""Brute-force references: Ising-configuration sums and full-Hilbert ED.

Nothing here goes through the transfer-matrix machinery; only the plaquette
spectra are shared.  Enumeration works in log space so low temperatures and
long rings neither overflow nor underflow.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .rdm import DimerState
from .spectra import CouplingSet, ImpurityStrengths, effective_couplings, energy_table
from .transfer import ChainSpec, ThermalState

MAX_ENUM_N = 24
MAX_FULL_N = 4
_CHUNK_BITS = 16

# Level coefficients producing rho11, rho22, rho23, rho33, rho44 from the four
# plaquette eigenstates.
_ELEMENT_COEFFS = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.5, 0.0],
        [0.0, 0.5, -0.5, 0.0],
        [0.0, 0.5, 0.5, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def _ring(spec, r, cap):
    if spec.N is None:
        raise ValueError("oracles need a finite ring")
    N = int(spec.N)
    if N > cap:
        raise ValueError(f"N={N} exceeds the oracle budget N <= {cap}")
    if not 1 <= r <= N:
        raise ValueError(f"impurity position r must lie in 1..{N}, got {r}")
    return N, r - 1


def _plaquette_types(N, r0):
    """True for impurity plaquettes (r-1 and r+1, cyclic)."""
    kinds = np.zeros(N, dtype=bool)
    kinds[(r0 - 1) % N] = True
    kinds[(r0 + 1) % N] = True
    return kinds


def _log_tables(spec):
    beta = spec.thermal.beta
    x_host = -beta * energy_table(spec.host, spec.host_offset)
    x_imp = -beta * energy_table(effective_couplings(spec.host, spec.imp), spec.imp_offset)
    log_w_host = logsumexp(x_host, axis=-1)
    log_w_imp = logsumexp(x_imp, axis=-1)
    # Signed log of the five operator entries of the isolated plaquette, (5, 2, 2).
    log_op = np.empty((5, 2, 2))
    sign_op = np.empty((5, 2, 2))
    for k, coeff in enumerate(_ELEMENT_COEFFS):
        with np.errstate(divide="ignore"):
            log_op[k], sign_op[k] = logsumexp(x_host, axis=-1, b=coeff, return_sign=True)
    log_op[sign_op == 0] = -np.inf
    return log_w_host, log_w_imp, log_op, sign_op


def _enumerate(N, r0, log_w_host, log_w_imp):
    """Yield per-chunk spin indices of sites r0, r0+1 and the summed log
    weights of every plaquette except r0."""
    kinds = _plaquette_types(N, r0)
    total = 1 << N
    chunk = min(total, 1 << _CHUNK_BITS)
    for start in range(0, total, chunk):
        m = np.arange(start, start + chunk, dtype=np.int64)
        bits = (m[:, None] >> np.arange(N)) & 1
        logs = np.zeros(chunk)
        for i in range(N):
            if i == r0:
                continue
            table = log_w_imp if kinds[i] else log_w_host
            logs += table[bits[:, i], bits[:, (i + 1) % N]]
        yield bits[:, r0], bits[:, (r0 + 1) % N], logs


def _combine(parts):
    logs = np.array([p[0] for p in parts])
    signs = np.array([p[1] for p in parts])
    if not np.any(signs):
        return -np.inf, 0.0
    keep = signs != 0
    return logsumexp(logs[keep], b=signs[keep], return_sign=True)


def oracle_partition(spec, r=1):
    """log Z_N by explicit summation over all 2^N Ising configurations."""
    N, r0 = _ring(spec, r, MAX_ENUM_N)
    log_w_host, log_w_imp, _, _ = _log_tables(spec)
    parts = []
    for a, b, logs in _enumerate(N, r0, log_w_host, log_w_imp):
        parts.append((logsumexp(logs + log_w_host[a, b]), 1.0))
    return float(_combine(parts)[0])


def oracle_dimer_state(spec, r=1):
    """rho_{k,l} = (1/Z) sum_mu [weights, plaquette r replaced by rho_{k,l}]."""
    N, r0 = _ring(spec, r, MAX_ENUM_N)
    log_w_host, log_w_imp, log_op, sign_op = _log_tables(spec)
    z_parts = []
    el_parts = [[] for _ in range(5)]
    for a, b, logs in _enumerate(N, r0, log_w_host, log_w_imp):
        z_parts.append((logsumexp(logs + log_w_host[a, b]), 1.0))
        for k in range(5):
            s = sign_op[k][a, b]
            if not np.any(s):
                continue
            keep = s != 0
            el_parts[k].append(
                logsumexp((logs + log_op[k][a, b])[keep], b=s[keep], return_sign=True)
            )
    log_z = _combine(z_parts)[0]
    values = []
    for parts in el_parts:
        if not parts:
            values.append(0.0)
            continue
        log_abs, sign = _combine(parts)
        values.append(float(sign * math.exp(log_abs - log_z)) if sign else 0.0)
    return DimerState.from_elements(*values, N=N)


# --- full Hilbert space -----------------------------------------------------

_SZ = np.array([0.5, -0.5])


def _full_hamiltonian(spec, r0):
    """Dense H on (mu_i, a_i, b_i) qubits per cell, site order 3i, 3i+1, 3i+2."""
    N = int(spec.N)
    kinds = _plaquette_types(N, r0)
    imp = effective_couplings(spec.host, spec.imp)
    n_sites = 3 * N
    dim = 1 << n_sites
    states = np.arange(dim, dtype=np.int64)
    # Site 0 is the most significant bit (numpy kron ordering).
    bits = (states[:, None] >> (n_sites - 1 - np.arange(n_sites))) & 1
    sz = _SZ[bits]
    diag = np.zeros(dim)
    H = np.zeros((dim, dim))
    for i in range(N):
        c = imp if kinds[i] else spec.host
        offset = spec.imp_offset if kinds[i] else spec.host_offset
        a, b = 3 * i + 1, 3 * i + 2
        mu_sum = sz[:, 3 * i] + sz[:, (3 * (i + 1)) % n_sites]
        s_tot = sz[:, a] + sz[:, b]
        diag += (
            c.J * c.Delta * sz[:, a] * sz[:, b]
            + c.J1 * s_tot * mu_sum
            - c.h * s_tot
            - 0.5 * c.h * mu_sum
            + offset
        )
        # (J/2)(S+S- + S-S+): connects states where a and b are antiparallel.
        anti = bits[:, a] != bits[:, b]
        src = states[anti]
        dst = src ^ ((1 << (n_sites - 1 - a)) | (1 << (n_sites - 1 - b)))
        H[dst, src] += 0.5 * c.J
    H[states, states] += diag
    return H


def full_hilbert_solution(spec, r):
    N, r0 = _ring(spec, r, MAX_FULL_N)
    H = _full_hamiltonian(spec, r0)
    E, V = np.linalg.eigh(H)
    beta = spec.thermal.beta
    e_min = E[0]
    boltz = np.exp(-beta * (E - e_min))
    log_z = math.log(boltz.sum()) - beta * e_min
    rho_full = (V * boltz) @ V.T
    d_before = 1 << (3 * r0 + 1)
    d_after = 1 << (3 * (N - r0) - 3)
    t = rho_full.reshape(d_before, 4, d_after, d_before, 4, d_after)
    rho = np.einsum("iajibj->ab", t) / boltz.sum()
    return log_z, rho, N


def oracle_full_hilbert(spec, r=1):
    """Dimer r's reduced state from dense diagonalisation of the whole ring."""
    _, rho, N = full_hilbert_solution(spec, r)
    return DimerState(rho, N)


def oracle_full_hilbert_partition(spec, r=1):
    return full_hilbert_solution(spec, r)[0]


def random_specs(seed, count, N, coupling=2.0, T_range=(0.05, 5.0), strength=1.0):
    """Seeded battery of finite-ring specs with a random impurity position.

    Yields ``(spec, r)``; couplings uniform in [-coupling, coupling], T uniform
    in ``T_range`` and impurity strengths uniform in [-strength, strength].
    """
    rng = np.random.default_rng(seed)
    for _ in range(count):
        J, Delta, J1, h = map(float, rng.uniform(-coupling, coupling, 4))
        T = float(rng.uniform(*T_range))
        alpha, gamma, eta = map(float, rng.uniform(-strength, strength, 3))
        r = int(rng.integers(1, N + 1))
        spec = ChainSpec(
            host=CouplingSet(J, Delta, J1, h),
            thermal=ThermalState.from_temperature(T),
            imp=ImpurityStrengths(alpha, gamma, eta),
            N=N,
        )
        yield spec, r
