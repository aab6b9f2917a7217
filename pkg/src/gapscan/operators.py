"""Dense complex linear algebra for small qubit registers.

Basis convention, fixed once for the whole package: the computational basis
is indexed by the bits of the state index, qubit 1 being the most significant
bit.  The first basis vector of a single qubit is the sigma_z eigenvector
with eigenvalue +1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-9

_PAULI = {
    "identity": np.eye(2, dtype=complex),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
# sigma_pm = (sigma_x +- i sigma_y) / 2, so the raising matrix element is 1.
_PAULI["plus"] = (_PAULI["x"] + 1j * _PAULI["y"]) / 2
_PAULI["minus"] = (_PAULI["x"] - 1j * _PAULI["y"]) / 2


def pauli(axis: str) -> np.ndarray:
    """Return a 2x2 Pauli-family matrix: X, Y, Z, plus, minus or identity."""
    key = axis.lower()
    if key not in _PAULI:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected one of {sorted(_PAULI)}")
    return _PAULI[key].copy()


def embed(op: np.ndarray, site: int, num_qubits: int) -> np.ndarray:
    """Tensor-embed a single-qubit operator at `site` (1-based, leftmost = 1).

    Returns the 2^L x 2^L matrix I (x) ... (x) op (x) ... (x) I with `op` at
    tensor slot `site` and identities elsewhere.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"embed expects a 2x2 operator, got shape {op.shape}")
    if not 1 <= site <= num_qubits:
        raise ValueError(f"site {site} out of range 1..{num_qubits}")
    out = np.array([[1.0 + 0.0j]])
    for j in range(1, num_qubits + 1):
        out = np.kron(out, op if j == site else _PAULI["identity"])
    return out


@dataclass(frozen=True)
class QuantumState:
    """Complex amplitude vector over the 2^L computational basis.

    Construction validates the dimension and, unless `check_norm=False`
    (internal intermediates only), unit Euclidean norm within 1e-9.
    """

    amplitudes: np.ndarray
    num_qubits: int
    check_norm: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size != 2**self.num_qubits:
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match "
                f"2^{self.num_qubits} = {2**self.num_qubits}"
            )
        if self.check_norm and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()!r} deviates from 1 beyond {NORM_TOL}")
        amps.setflags(write=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QuantumState":
        return QuantumState(self.amplitudes / self.norm(), self.num_qubits)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix on 2^L dimensions (coefficients in GHz).

    Hermiticity is validated elementwise within 1e-12 at construction, so
    every real-weighted sum of these operators is re-checked for free.
    """

    matrix: np.ndarray
    num_qubits: int

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        dim = 2**self.num_qubits
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match 2^{self.num_qubits}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        mat.setflags(write=False)

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix, self.num_qubits)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix - other.matrix, self.num_qubits)

    def __mul__(self, scale: float) -> "HermitianOperator":
        return HermitianOperator(self.matrix * float(scale), self.num_qubits)

    __rmul__ = __mul__


def apply(op: np.ndarray | HermitianOperator, state: QuantumState) -> QuantumState:
    """Matrix-vector product; no implicit renormalization."""
    mat = op.matrix if isinstance(op, HermitianOperator) else np.asarray(op, dtype=complex)
    if mat.shape[1] != state.amplitudes.size:
        raise ValueError(f"operator dim {mat.shape} does not match state dim {state.amplitudes.size}")
    return QuantumState(mat @ state.amplitudes, state.num_qubits, check_norm=False)


def inner(a: QuantumState, b: QuantumState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.amplitudes.size != b.amplitudes.size:
        raise ValueError("states live in different dimensions")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
