"""The Ramsey-hold annealing protocol and the hold-duration sweep.

One run: prepare the equal superposition of the two lowest driver
eigenstates, ramp the control from driver to target over anneal_ns, hold at
the target Hamiltonian for hold_ns (relative phase accumulates at the level
gaps), ramp back, and project onto the initial state.  Sweeping the hold
duration turns the accumulated phase into an oscillating probability record.

The sweep exploits that the two ramp propagators do not depend on the hold
duration: they are built once per (params, anneal_ns, policy) and the hold
segment is applied spectrally, which is exact because the Hamiltonian is
constant there.  `run_once` keeps the literal three-segment path and the two
are cross-checked in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, NumericalError
from .evolution import StepPolicy, evolve_interval, interval_unitary
from .model import ModelParams, Schedule, build_driver, build_problem
from .operators import QuantumState, inner
from .oracle import diagonalize

DRIVER_DEGENERACY_TOL_GHZ = 1e-9


@dataclass(frozen=True)
class SweepGrid:
    """Uniform hold-duration grid: num_samples points on [t_min_ns, t_max_ns]."""

    t_min_ns: float
    t_max_ns: float
    num_samples: int

    def __post_init__(self):
        if self.num_samples < 2:
            raise ValueError("num_samples must be >= 2")
        if not 0 <= self.t_min_ns < self.t_max_ns:
            raise ValueError("need 0 <= t_min_ns < t_max_ns")

    def taus(self) -> np.ndarray:
        return np.linspace(self.t_min_ns, self.t_max_ns, self.num_samples)


@dataclass(frozen=True)
class RamseySeries:
    """Sweep record: projection probability per hold duration, with provenance."""

    taus: np.ndarray
    probabilities: np.ndarray
    params: ModelParams
    anneal_ns: float
    policy: StepPolicy

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "probabilities", probs)
        if taus.ndim != 1 or taus.shape != probs.shape:
            raise ValueError("taus and probabilities must be equal-length vectors")
        if taus.size >= 2 and not np.all(np.diff(taus) > 0):
            raise ValueError("taus must be strictly increasing")
        if np.any(probs < -1e-9) or np.any(probs > 1 + 1e-9):
            bad = int(np.argmax((probs < -1e-9) | (probs > 1 + 1e-9)))
            raise NumericalError(
                f"probability {probs[bad]} at tau={taus[bad]} ns escapes [0, 1]"
            )
        taus.setflags(write=False)
        probs.setflags(write=False)


@dataclass(frozen=True)
class CosineFit:
    """Least-squares fit offset + amplitude * cos(2*pi*frequency*tau + phase)."""

    offset: float
    amplitude: float
    phase: float
    frequency: float
    rms_residual: float


def initial_state(params: ModelParams) -> QuantumState:
    """Equal superposition of the two lowest driver eigenstates (phase-fixed)."""
    es = diagonalize(build_driver(params))
    if es.energies[1] - es.energies[0] <= DRIVER_DEGENERACY_TOL_GHZ:
        raise ConfigError(
            "driver ground state is degenerate: the protocol's initial "
            "superposition is ill-defined (distinct driver amplitudes required)"
        )
    if es.dim > 2 and es.energies[2] - es.energies[1] <= DRIVER_DEGENERACY_TOL_GHZ:
        raise ConfigError(
            "driver's first excited level is degenerate: the protocol's initial "
            "superposition is ill-defined (distinct driver amplitudes required)"
        )
    amps = (es.states[:, 0] + es.states[:, 1]) / np.sqrt(2)
    return QuantumState(amps, params.num_qubits)


def run_once(params: ModelParams, anneal_ns: float, hold_ns: float, policy: StepPolicy) -> float:
    """Single protocol run, literal three-segment propagation.

    Returns the projection probability |<psi0|psi_final>|^2.
    """
    sched = Schedule(anneal_ns, hold_ns)
    psi0 = initial_state(params)
    t_ramp_end = anneal_ns
    t_hold_end = anneal_ns + hold_ns
    psi = evolve_interval(psi0, 0.0, t_ramp_end, params, sched, policy)
    if t_hold_end > t_ramp_end:  # hold_ns below float resolution adds no segment
        psi = evolve_interval(psi, t_ramp_end, t_hold_end, params, sched, policy)
    psi = evolve_interval(psi, t_hold_end, sched.total_ns, params, sched, policy)
    return float(abs(inner(psi0, psi)) ** 2)


@lru_cache(maxsize=8)
def segment_unitaries(
    params: ModelParams, anneal_ns: float, policy: StepPolicy
) -> tuple[np.ndarray, np.ndarray]:
    """Forward and reverse ramp propagators (hold-duration independent)."""
    sched = Schedule(anneal_ns, 0.0)
    forward = interval_unitary(0.0, anneal_ns, params, sched, policy)
    reverse = interval_unitary(anneal_ns, 2 * anneal_ns, params, sched, policy)
    forward.setflags(write=False)
    reverse.setflags(write=False)
    return forward, reverse


def sweep(params: ModelParams, anneal_ns: float, grid: SweepGrid, policy: StepPolicy) -> RamseySeries:
    """Projection probability for every hold duration on the grid.

    Deterministic, and identical (to roundoff) to calling run_once per grid
    point; the ramp propagators are shared across the sweep.
    """
    psi0 = initial_state(params)
    forward, reverse = segment_unitaries(params, anneal_ns, policy)
    es = diagonalize(build_problem(params))
    into_target = es.states.conj().T @ (forward @ psi0.amplitudes)
    back_onto_psi0 = es.states.conj().T @ (reverse.conj().T @ psi0.amplitudes)
    coeff = np.conj(back_onto_psi0) * into_target
    taus = grid.taus()
    overlaps = np.exp(-1j * 2 * np.pi * np.outer(taus, es.energies)) @ coeff
    probs = np.abs(overlaps) ** 2
    return RamseySeries(taus, probs, params, anneal_ns, policy)


def cosine_fit(series: RamseySeries, frequency: float) -> CosineFit:
    """Fit offset + amplitude*cos(2*pi*frequency*tau + phase), frequency held fixed.

    Linear least squares in (offset, amplitude*cos(phase), amplitude*sin(phase));
    a rank-deficient design (frequency aliases the grid) raises NumericalError.
    """
    if frequency <= 0:
        raise ValueError("fit frequency must be > 0")
    if series.taus.size < 3:
        raise ValueError("need at least 3 records to fit")
    x = 2 * np.pi * frequency * series.taus
    design = np.column_stack([np.ones_like(x), np.cos(x), -np.sin(x)])
    solution, _, rank, _ = np.linalg.lstsq(design, series.probabilities, rcond=None)
    if rank < 3:
        raise NumericalError(
            f"cosine fit at {frequency} GHz is singular on this grid (rank {rank})"
        )
    offset, c, s = solution
    amplitude = float(np.hypot(c, s))
    phase = float(np.arctan2(s, c))
    residual = design @ solution - series.probabilities
    rms = float(np.sqrt(np.mean(residual**2)))
    return CosineFit(float(offset), amplitude, phase, float(frequency), rms)
