"""Sequential (entanglement-free) perfect discrimination of unitary operations."""

from ._kernels import BACKEND
from .arc import Arc, HullCertificate, min_runs, minimal_covering_arc, theta, theta_tensor_power, zero_hull_weights
from .errors import *  # noqa: F401,F403
from .linalg import (
    SpectralDecomposition,
    UnitaryOperator,
    certify_unitary,
    fourier_state,
    haar_unitary,
    spectral_decompose,
)
from .schemes import PartitionPlan, ResourceReport, plan_mixed, resource_report, validate_plan
from .simulator import (
    ShotRecord,
    TournamentTranscript,
    eliminate_tournament,
    pauli_matrix,
    pauli_one_run_impossible,
    pauli_two_run_protocol,
    run_protocol,
)
from .synthesis import (
    ProjectiveMeasurement,
    SequentialProtocol,
    build_measurement,
    claim_synthesize,
    rotation_angle,
    split_state,
    synthesize_protocol,
)
from .verify import (
    OptimalityReport,
    SearchConfig,
    chain_theta,
    check_subadditivity,
    optimality_search,
    qubit_one_run_criterion,
)

__version__ = "0.1.0"
