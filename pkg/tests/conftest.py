import hypothesis
import numpy as np
import pytest

from gapscan import ModelParams, StepPolicy

hypothesis.settings.register_profile("ci", max_examples=25, deadline=None)
hypothesis.settings.load_profile("ci")

# Two-qubit benchmark parameter set used throughout the suite (GHz).
BENCH = dict(
    num_qubits=2,
    driver_amps=(1.0, 10.7),
    qubit_freqs=(0.2, 0.24),
    zz_coupling=0.5,
    flipflop_coupling=1.05,
)

# Frozen oracle fixture for the benchmark target Hamiltonian, derived from
# the hand-built 4x4 matrix: diagonal (0.72, -0.52, -0.48, 0.28) from the
# Zeeman + ZZ terms, off-diagonal 1.05 coupling the middle block, whose
# eigenvalues are -0.5 +- sqrt(0.02^2 + 1.05^2).
BENCH_ENERGIES = (-1.5501904589168576, 0.28, 0.5501904589168576, 0.72)
BENCH_GAPS = {
    (0, 1): 1.8301904589168576,
    (0, 2): 2.100380917833715,
    (0, 3): 2.270190458916858,
    (1, 2): 0.27019045891685756,
    (1, 3): 0.43999999999999995,
    (2, 3): 0.1698095410831424,
}


def bench_problem_matrix() -> np.ndarray:
    """Independent hand-built benchmark target matrix (not via the package)."""
    return np.array(
        [
            [0.72, 0.0, 0.0, 0.0],
            [0.0, -0.52, 1.05, 0.0],
            [0.0, 1.05, -0.48, 0.0],
            [0.0, 0.0, 0.0, 0.28],
        ],
        dtype=complex,
    )


@pytest.fixture
def bench_params() -> ModelParams:
    return ModelParams(**BENCH)


@pytest.fixture
def single_qubit_params() -> ModelParams:
    return ModelParams(1, (1.0,), (0.2,), 0.0, 0.0)


@pytest.fixture
def coarse_policy() -> StepPolicy:
    """Fast policy for unit tests that do not probe integrator accuracy."""
    return StepPolicy(dt_ns=0.01)
