"""Centralized numeric tolerances.

Every module pulls its comparison thresholds from here so that the
state-level, scalar-level and polynomial-level tolerances stay consistent
across the simulator, the extraction pipeline and the bound checks.
"""

# State vectors: norms, residuals, unitarity of dense layers.
STATE_ATOL = 1e-9

# Scalar identities (probabilities, closed-form arithmetic).
SCALAR_ATOL = 1e-12

# Polynomial reconstruction: extracted/symmetrized values vs. simulation.
POLY_VALUE_ATOL = 1e-8

# Coefficient magnitude threshold used by effective-degree queries.
COEFF_TOL = 1e-7

# Linear-program certificates: feasibility residuals of witnesses.
LP_FEAS_ATOL = 1e-7

# Slack added to theorem-backed inequalities checked on floating point data.
SANDWICH_SLACK = 1e-7
RESIDUAL_SLACK = 1e-9
EXTREMAL_REL_SLACK = 1e-6

# Dense grid resolution for continuum maxima of rescaled polynomials.
CONTINUUM_GRID_POINTS = 10_000

# Largest register the dense simulator will allocate (2**14 amplitudes).
MAX_QUBITS = 14

# Largest variable count accepted by exact multilinear extraction.
MAX_EXTRACT_VARS = 14
