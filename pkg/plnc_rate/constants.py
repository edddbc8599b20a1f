# These constants are fixed by the channel and relaying model.

# Path-loss only propagation with exponent 4. A normalized distance of 1
# gives a link SNR of 0 dB, so the SNR (or INR) of a link of length d is
# d ** -PATH_LOSS_EXPONENT.
PATH_LOSS_EXPONENT = 4

# Slots needed to complete one bidirectional exchange A <-> C.
# CR: A->B, B->C, C->B, B->A. PLNC: A,C->B then B->A,C.
CR_SLOTS_PER_EXCHANGE = 4
PLNC_SLOTS_PER_EXCHANGE = 2

# The difference formulas for the end-node INR cancel two terms that each
# diverge as r0 approaches r_n from above, so reservations this close to
# the minimum radius are rejected.
MIN_RADIUS_GUARD = 1e-6

# arccos/arctan arguments are clamped into their legal domain when they
# miss it by at most this much.
CLAMP_TOLERANCE = 1e-12

# Composite INRs in [-NEGATIVE_INR_TOLERANCE, 0) are floating-point
# residue and become 0. Anything lower is a bug.
NEGATIVE_INR_TOLERANCE = 1e-9

# Optimizer refinement tolerance on r0 and crossover bisection tolerance on lambda.
R0_REFINE_XATOL = 1e-6
CROSSOVER_XTOL = 0.01

# A Monte Carlo estimate passes the comparison against its analytic value
# when |z| stays within this many standard errors.
Z_SCORE_LIMIT = 3.0

# Monte Carlo placements are generated in fixed-size chunks, one generator
# per chunk, so that every sum is independent of the thread count.
MC_CHUNK_SIZE = 200

# Output format.
SIGNIFICANT_DIGITS = 9
SCHEMA_VERSION = "plnc-rate/1"
