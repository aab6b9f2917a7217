"""Exact-diagonalization ground truth: spectra, gap tables, populations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .model import ModelParams, Schedule, hamiltonian_at
from .operators import HermitianOperator, QuantumState

EIGEN_RESIDUAL_TOL = 1e-9
ORTHONORMALITY_TOL = 1e-10
DEGENERACY_TOL_GHZ = 1e-9


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues (GHz) and phase-fixed orthonormal eigenvectors.

    states[:, k] is the k-th eigenvector; its first largest-modulus component
    is real and positive, which pins the gauge across linear-algebra backends.
    """

    energies: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        self.energies.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class GapTable:
    """All pairwise level differences (i, j, E_j - E_i) for j > i, in GHz."""

    entries: tuple[tuple[int, int, float], ...]

    def gap(self, i: int, j: int) -> float:
        for a, b, value in self.entries:
            if (a, b) == (i, j):
                return value
        raise KeyError(f"no gap entry for level pair ({i}, {j})")


@dataclass(frozen=True)
class LevelPopulations:
    """Populations |<E_k(t)|psi>|^2 per instantaneous level.

    Levels closer than DEGENERACY_TOL_GHZ are grouped; each member of a group
    carries the gauge-invariant subspace population split evenly, and the
    grouping is reported in `groups`.
    """

    populations: np.ndarray
    groups: tuple[tuple[int, ...], ...]


def _fix_phases(states: np.ndarray) -> np.ndarray:
    fixed = states.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        moduli = np.abs(col)
        # first component within roundoff of the largest modulus: exact
        # argmax would tie-break on noise for vectors with equal entries
        idx = int(np.argmax(moduli >= moduli.max() * (1.0 - 1e-9)))
        pivot = col[idx]
        if pivot != 0:
            fixed[:, k] = col * (np.conj(pivot) / abs(pivot))
    return fixed


def diagonalize(h: HermitianOperator) -> EigenSystem:
    """Full spectral decomposition with validated residuals and gauge fixing."""
    try:
        energies, states = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigendecomposition did not converge") from exc
    states = _fix_phases(states)
    residual = np.max(np.abs(h.matrix @ states - states * energies))
    if residual > EIGEN_RESIDUAL_TOL:
        raise NumericalError(f"eigenpair residual {residual} exceeds {EIGEN_RESIDUAL_TOL}")
    gram = states.conj().T @ states
    if np.max(np.abs(gram - np.eye(energies.size))) > ORTHONORMALITY_TOL:
        raise NumericalError("eigenvectors lost orthonormality")
    return EigenSystem(np.real(energies), states)


def gaps(es: EigenSystem) -> GapTable:
    """Pairwise differences E_j - E_i for all j > i, lexicographic order."""
    energies = es.energies
    entries = tuple(
        (i, j, float(energies[j] - energies[i]))
        for i in range(energies.size)
        for j in range(i + 1, energies.size)
    )
    return GapTable(entries)


def degenerate_groups(energies: np.ndarray, tol: float = DEGENERACY_TOL_GHZ) -> tuple[tuple[int, ...], ...]:
    """Chain consecutive levels whose spacing is below `tol` into groups."""
    groups: list[tuple[int, ...]] = []
    start = 0
    for k in range(1, energies.size + 1):
        if k == energies.size or energies[k] - energies[k - 1] > tol:
            groups.append(tuple(range(start, k)))
            start = k
    return tuple(groups)


def instantaneous_populations(
    state: QuantumState,
    t: float,
    params: ModelParams,
    sched: Schedule,
) -> LevelPopulations:
    """Populations of `state` in the eigenbasis of H(t); sums to 1."""
    es = diagonalize(hamiltonian_at(t, params, sched))
    raw = np.abs(es.states.conj().T @ state.amplitudes) ** 2
    groups = degenerate_groups(es.energies)
    pops = raw.copy()
    for group in groups:
        if len(group) > 1:
            members = list(group)
            pops[members] = raw[members].sum() / len(members)
    return LevelPopulations(pops, tuple(g for g in groups if len(g) > 1))
