"""Adaptive-depth fermionic classical shadows.

Estimate expectation values of even Majorana observables from randomized
measurements behind shallow brickwork matchgate circuits, with the circuit
depth chosen from the observable's interaction distance.
"""

from .majorana import (
    FermionObservable,
    MajoranaString,
    PauliString,
    interaction_distance,
    jordan_wigner,
    kitaev_chain,
    near_distance,
    observable_interaction_distance,
    vacuum_expectation,
)
from .matchgate import (
    BrickworkCircuit,
    GlobalOrthogonal,
    OrthogonalBlock,
    circuit_to_global_q,
    minor_det,
    sample_brickwork,
    sample_haar_o4,
    synthesize_unitary,
)
from .dense_sim import StateVector, apply_circuit, expectation, random_state, sample_outcome
from .gaussian_sim import (
    CovarianceMatrix,
    basis_covariance,
    evolve,
    gaussian_expectation,
    pfaffian,
    sample_outcome_gaussian,
)
from .twirl_tensor import LocalTwirlTensor, t_tensor
from .alpha_engines import (
    AlphaResult,
    alpha_exact_dp,
    alpha_fcs_limit,
    alpha_k_product,
    alpha_monte_carlo,
    alpha_pn_exact,
    alpha_slrw_poisson,
    alpha_slrw_sum,
    majorana_to_y,
    slrw_deviation,
    slrw_propagator,
)
from .shadow import (
    EstimateReport,
    ShadowSample,
    collect_samples,
    estimate_majorana,
    estimate_observable,
    single_shot_estimate,
)
from .depth_select import DepthRecommendation, recommend_depth_formula, recommend_depth_search

__version__ = "0.1.0"
