"""querylab: a desk-scale laboratory for the black-box quantum query model.

Exact state-vector simulation of query networks, acceptance-polynomial
extraction and symmetrization, linear-program error certificates, and
closed-form error-vs-queries lower bounds, plus a reporting CLI.
"""

from .simcore import (
    BitOracle,
    DimensionError,
    MeasurementOutcome,
    OracleGate,
    QueryNetwork,
    RegisterLayout,
    SimulationError,
    StateVector,
    acceptance_probability,
    apply_oracle,
    euclidean_distance,
    measure_output_bit,
    run_network,
)
from .algorithms import (
    ReductionConfig,
    clean_wrap,
    comparison_bit,
    grover_acceptance,
    grover_error,
    grover_network,
    grover_promise_error,
    majority_comparison_network,
    ordered_instance,
    ordered_oracle_gate,
    ordered_search_reduction,
    superposition_error_bound_check,
)
from .polymethod import (
    MultilinearPoly,
    UnivariatePoly,
    extract_multilinear,
    min_error_lp,
    parity_interpolation,
    symmetrize,
)
from .bounds import (
    CRConstants,
    chebyshev,
    chebyshev_extremal_check,
    chebyshev_growth_bound,
    coppersmith_rivlin_envelope,
    derivation_chain_check,
    error_floor_for_query_exponent,
    error_lower_bound,
    error_lower_bound_queries,
    queries_for_error,
    query_floor_for_target_error,
    reflect_and_rescale,
    rp_amplification_bound,
)

__version__ = "0.1.0"
