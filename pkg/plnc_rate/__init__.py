# Export the main operations, helper functions, and the public data types.
from .exceptions import ConsistencyError, NumericalError, ParameterDomainError, QuadratureError, RelayModelError
from .experiments import (
    find_crossover_density, find_crossover_radius, optimize_r0, sweep_density, sweep_reserved_radius,
    validate_radius_sweep,
)
from .interference import composite_inr_cr, composite_inr_plnc, inr_breakdown
from .montecarlo import compare_with_analytic, estimate_inr, estimate_rates
from .ratemodel import distance_from_snr_db, end_to_end_rate, end_to_end_rate_cr, end_to_end_rate_plnc, rate_gain
from .types import (
    CountModel, InrBreakdown, LinkSinrs, McConfig, McEstimate, NodeId, QuadratureSpec, RateMode, RateResult,
    Scheme, SlotRole, SweepGrid, SweepRecord, SystemParams,
)
from .version import __version__

__all__ = ["SystemParams", "Scheme", "SlotRole", "NodeId", "InrBreakdown", "LinkSinrs", "RateResult",
           "QuadratureSpec", "McConfig", "McEstimate", "CountModel", "RateMode", "SweepGrid", "SweepRecord",
           "inr_breakdown", "composite_inr_cr", "composite_inr_plnc",
           "distance_from_snr_db", "end_to_end_rate", "end_to_end_rate_cr", "end_to_end_rate_plnc", "rate_gain",
           "estimate_inr", "estimate_rates", "compare_with_analytic",
           "validate_radius_sweep", "sweep_reserved_radius", "optimize_r0", "sweep_density",
           "find_crossover_density", "find_crossover_radius",
           "RelayModelError", "ParameterDomainError", "NumericalError", "QuadratureError", "ConsistencyError",
           "__version__"]


# These global attributes are a part of the library's API and can be
# changed by library users. Functions read them when called, not when
# imported, so a reassignment takes effect on the next call.

# The interferers live within this radius of the relay. Ten is large
# enough that the relay's INR is within R0**2 / 100 of an infinite network.
NETWORK_RADIUS = 10.0

# Monte Carlo.
MC_TRIALS = 100000
MC_SEED = 42
THREADS = 1

# Adaptive quadrature tolerances and subdivision limit.
QUAD_EPSREL = 1e-9
QUAD_EPSABS = 1e-12
QUAD_LIMIT = 50

# Default sweep grids. The r0 grid starts just above the minimum reserved
# radius r_n, at R0_START_FACTOR * r_n.
R0_START_FACTOR = 1.02
R0_STOP = 1.0
R0_STEP = 0.005
LAMBDA_START = 0.1
LAMBDA_STOP = 10.0
LAMBDA_STEP = 0.1
