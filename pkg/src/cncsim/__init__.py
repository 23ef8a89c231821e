"""Qubit phase-space toolkit: cnc sets, quasiprobability expansions,
Pauli-measurement sampling, and LP robustness measures."""

__version__ = "0.1.0"

from .pauli import PauliLabel, beta, is_real, parse_pauli, symplectic
from .phasespace import (
    Catalog,
    CncSet,
    PhasePoint,
    ValueAssignment,
    assemble_phase_point,
    brute_force_cnc_check,
    cnc_to_stabilizer_mix,
    enumerate_catalog,
    gamma_eval,
    gamma_set,
    lift_to_maximal,
    make_cnc,
    stabilizer_point,
    tensor_points,
)
from .dynamics import (
    CliffordTableau,
    clifford_act,
    clifford_from_gates,
    gamma_times_s,
    measure_update,
    omega_times_a,
)
from .simulator import (
    MeasurementProgram,
    WRep,
    born_probability,
    exact_outcome_distribution,
    hvm_distribution,
    product_wrep,
    propagate_wrep,
    sample_trajectory,
)
from .decomposer import (
    ExpectationVector,
    LPResult,
    build_columns,
    dual_value,
    feasibility,
    robustness,
    robustness_of_magic,
    sandwich_gap,
    tensor_compose,
)

__all__ = [name for name in dir() if not name.startswith("_")]
