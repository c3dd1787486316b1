"""Exact solver for the spin-1/2 Ising-XXZ diamond chain with two impurities."""

from .entanglement import (
    ConcurrenceResult,
    ThresholdResult,
    concurrence_at,
    concurrence_general,
    concurrence_xstate,
    threshold_temperature,
)
from .rdm import (
    DimerState,
    PlaquetteThermalOperator,
    p_matrix,
    plaquette_operator,
    reduced_density,
    reduced_density_finite,
    reduced_density_limit,
)
from .spectra import (
    CouplingSet,
    EdgeSpins,
    ImpurityStrengths,
    PlaquetteSpectrum,
    closed_form_energies,
    effective_couplings,
    plaquette_hamiltonian,
)
from .transfer import (
    ChainSpec,
    ThermalState,
    TransferDecomposition,
    WeightMatrix,
    boltzmann_weights,
    decompose,
    make_spec,
    partition_function,
)

__version__ = "0.1.0"
