"""Physical parameters, annealing schedule and Hamiltonian construction.

Unit convention: every coefficient entering a Hamiltonian is a linear
frequency in GHz and times are in ns.  Propagation multiplies by 2*pi
(see evolution.step), so a gap of x GHz beats with period 1/x ns and all
reported spectra stay in GHz.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import HermitianOperator, embed, pauli


@dataclass(frozen=True)
class ModelParams:
    """Open-chain spin model: transverse driver plus Zeeman/ZZ/flip-flop target.

    driver_amps[j] is the transverse-field amplitude of qubit j+1 (GHz),
    qubit_freqs[j] its Zeeman frequency (GHz); zz_coupling and
    flipflop_coupling act between nearest neighbours only.
    """

    num_qubits: int
    driver_amps: tuple[float, ...]
    qubit_freqs: tuple[float, ...]
    zz_coupling: float
    flipflop_coupling: float

    def __post_init__(self):
        object.__setattr__(self, "driver_amps", tuple(float(x) for x in self.driver_amps))
        object.__setattr__(self, "qubit_freqs", tuple(float(x) for x in self.qubit_freqs))
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if len(self.driver_amps) != self.num_qubits or len(self.qubit_freqs) != self.num_qubits:
            raise ValueError("driver_amps and qubit_freqs must have num_qubits entries")
        if any(a <= 0 for a in self.driver_amps):
            # a vanishing transverse field degenerates the driver ground space
            raise ValueError("all driver amplitudes must be > 0")

    @property
    def dim(self) -> int:
        return 2**self.num_qubits


@dataclass(frozen=True)
class Schedule:
    """Piecewise-linear control: ramp down over anneal_ns, hold for hold_ns,
    ramp back up over anneal_ns."""

    anneal_ns: float
    hold_ns: float = 0.0

    def __post_init__(self):
        if self.anneal_ns <= 0:
            raise ValueError("anneal_ns must be > 0")
        if self.hold_ns < 0:
            raise ValueError("hold_ns must be >= 0")

    @property
    def total_ns(self) -> float:
        return 2 * self.anneal_ns + self.hold_ns


def schedule_value(t: float, sched: Schedule) -> float:
    """Control parameter A(t): 1 -> 0 on the down-ramp, 0 on the hold,
    0 -> 1 on the up-ramp.  Continuous on [0, total_ns]."""
    T, tau = sched.anneal_ns, sched.hold_ns
    if not 0 <= t <= sched.total_ns:
        raise ValueError(f"t={t} outside schedule range [0, {sched.total_ns}]")
    if t <= T:
        return 1.0 - t / T
    if t <= T + tau:
        return 0.0
    return (t - (T + tau)) / T


def build_driver(params: ModelParams) -> HermitianOperator:
    """Transverse-field driver: sum_j (driver_amps[j]/2) X_j."""
    L = params.num_qubits
    mat = np.zeros((params.dim, params.dim), dtype=complex)
    x = pauli("x")
    for j in range(L):
        mat += (params.driver_amps[j] / 2) * embed(x, j + 1, L)
    return HermitianOperator(mat, L)


def build_problem(params: ModelParams) -> HermitianOperator:
    """Target Hamiltonian: sum_j (qubit_freqs[j]/2) Z_j
    + sum_j [ zz * Z_j Z_{j+1} + flipflop * (S+_j S-_{j+1} + S-_j S+_{j+1}) ]."""
    L = params.num_qubits
    mat = np.zeros((params.dim, params.dim), dtype=complex)
    z, sp, sm = pauli("z"), pauli("plus"), pauli("minus")
    for j in range(L):
        mat += (params.qubit_freqs[j] / 2) * embed(z, j + 1, L)
    for j in range(1, L):  # open chain: L-1 bonds, none for L=1
        mat += params.zz_coupling * (embed(z, j, L) @ embed(z, j + 1, L))
        hop = embed(sp, j, L) @ embed(sm, j + 1, L)
        mat += params.flipflop_coupling * (hop + hop.conj().T)
    return HermitianOperator(mat, L)


def hamiltonian_at(t: float, params: ModelParams, sched: Schedule) -> HermitianOperator:
    """H(t) = A(t) * driver + (1 - A(t)) * problem, coefficients in GHz."""
    a = schedule_value(t, sched)
    return a * build_driver(params) + (1.0 - a) * build_problem(params)
