"""gapscan: Ramsey-hold annealing sweeps for direct spectral-gap estimation.

Simulates a closed-system annealing protocol on small spin chains: ramp from
a transverse-field driver to a target Hamiltonian, hold, ramp back, project
onto the initial superposition.  The Fourier transform of the hold-duration
sweep exposes the target's level gaps, which are validated against exact
diagonalization.
"""
from .config import ExperimentConfig, SpectrumConfig, echo_mapping, from_mapping, load_config
from .errors import ConfigError, GapScanError, NumericalError
from .evolution import StepPolicy, evolve_interval, interval_unitary, step, trajectory
from .model import ModelParams, Schedule, build_driver, build_problem, hamiltonian_at, schedule_value
from .operators import HermitianOperator, QuantumState, apply, embed, inner, pauli
from .oracle import (
    EigenSystem,
    GapTable,
    LevelPopulations,
    diagonalize,
    gaps,
    instantaneous_populations,
)
from .protocol import (
    CosineFit,
    RamseySeries,
    SweepGrid,
    cosine_fit,
    initial_state,
    run_once,
    segment_unitaries,
    sweep,
)
from .spectrum import (
    GapMatch,
    Peak,
    PeakReport,
    Spectrum,
    dft,
    find_peaks,
    match_to_oracle,
    refine_peak,
    refine_report,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CosineFit",
    "EigenSystem",
    "ExperimentConfig",
    "GapMatch",
    "GapScanError",
    "GapTable",
    "HermitianOperator",
    "LevelPopulations",
    "ModelParams",
    "NumericalError",
    "Peak",
    "PeakReport",
    "QuantumState",
    "RamseySeries",
    "Schedule",
    "Spectrum",
    "SpectrumConfig",
    "StepPolicy",
    "SweepGrid",
    "apply",
    "build_driver",
    "build_problem",
    "cosine_fit",
    "dft",
    "diagonalize",
    "echo_mapping",
    "embed",
    "evolve_interval",
    "find_peaks",
    "from_mapping",
    "gaps",
    "hamiltonian_at",
    "initial_state",
    "inner",
    "instantaneous_populations",
    "interval_unitary",
    "load_config",
    "match_to_oracle",
    "pauli",
    "refine_peak",
    "refine_report",
    "run_once",
    "schedule_value",
    "segment_unitaries",
    "step",
    "sweep",
    "trajectory",
]
