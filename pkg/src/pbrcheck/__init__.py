"""Verification suite for entangled-basis readout of two-qubit preparations."""

from .qcore import ATOL, Basis, LinearMap2, StateVector, born_probabilities, expand, inner, reconstruct, tensor
from .pbr_states import (
    PREPARATIONS,
    PrepChoice,
    Preparation,
    forbidden_table,
    prepared_state,
    single_states,
    xi_basis,
)
from .detector_sim import (
    BranchOutcome,
    ContractVerdict,
    JointDetector,
    LocalProductDetector,
    Pointer,
    PointerReading,
    check_contract,
    closed_form_branch_amplitudes,
    couple_simple,
    joint_xi_detector,
    simple_detector,
    standard_joint_detector,
)
from .local_impossibility import (
    LocalDetectorParams,
    SearchReport,
    certify_identity,
    primed_expansion,
    residual,
    search_local,
)
from .ontic_model import (
    Constraint,
    EpistemicDistribution,
    FeasibilityVerdict,
    LambdaGrid,
    OnticModel,
    ResponseTable,
    ViolationEstimate,
    expected_violation,
    feasibility,
    forbidden_constraints,
    load_model,
    monte_carlo_violation,
    overlap_weight,
    parse_model,
)

__version__ = "0.1.0"
