# Expected interference-to-noise ratios from interferers scattered with
# density lambda outside the reserved discs.
#
# Every interferer at distance r from a receiver contributes r ** -4 (the
# path-loss normalization puts 0 dB at distance 1). The toroidal region is
# the annulus r0 <= |p - B| <= big_r; the crescent region is the part of A's
# reserved disc outside B's disc. Scheme composites subtract the crescents
# that the scheme additionally reserves from the toroidal INR.
#
# All values are linear. Decibels appear only in presentation.

import functools
import logging
import math
from typing import Callable, Optional, Tuple

from scipy import integrate

from .constants import MIN_RADIUS_GUARD, NEGATIVE_INR_TOLERANCE
from .exceptions import ConsistencyError, ParameterDomainError, QuadratureError
from .geometry import crescent_half_angle, dist_far_end_from_crescent_point, dist_relay_from_crescent_point
from .types import InrBreakdown, QuadratureSpec, SystemParams

logger = logging.getLogger(__name__)


def require_min_radius(params: SystemParams) -> None:
    """Reject reservations at or too close to the minimum radius r_n, where
    the end-node difference formulas lose all precision."""
    if not params.r0 > params.r_n * (1 + MIN_RADIUS_GUARD):
        raise ParameterDomainError(
            f"r0 = {params.r0:.4f} must exceed the minimum reserved radius r_n = {params.r_n:.4f}.")


def require_network_covers_reservation(params: SystemParams) -> None:
    if params.big_r < params.r0 + params.r_n:
        raise ParameterDomainError(
            f"big_r must be at least r0 + r_n = {params.r0 + params.r_n:.4f} so that every "
            f"reserved disc lies inside the network, got {params.big_r:g}.")


def _integrate(name: str, func: Callable[[float], float], a: float, b: float, quad: QuadratureSpec) -> float:
    # full_output keeps scipy from turning non-convergence into a warning;
    # a fourth element in the result is its message.
    result = integrate.quad(func, a, b, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit, full_output=1)
    if len(result) > 3:
        raise QuadratureError(f"The {name} integral did not converge: {result[3]}")
    value, abserr = float(result[0]), float(result[1])
    logger.debug("%s over [%.6g, %.6g] = %.12g (abserr %.3g, %d evaluations)",
                 name, a, b, value, abserr, result[2]["neval"])
    return value


def _resolve(quad: Optional[QuadratureSpec]) -> QuadratureSpec:
    return quad if quad is not None else QuadratureSpec.default()


def inr_toroidal_at_relay(params: SystemParams) -> float:
    """Expected INR at B from the annulus between r0 and big_r around B."""
    if not params.r0 < params.big_r:
        raise ParameterDomainError(f"big_r must exceed r0 = {params.r0:.4g}.")
    return math.pi * params.density * (1 / params.r0 ** 2 - 1 / params.big_r ** 2)


def inr_toroidal_at_relay_unbounded(params: SystemParams) -> float:
    """The same INR as the network radius grows without bound."""
    return math.pi * params.density / params.r0 ** 2


def inr_toroidal_at_end(params: SystemParams) -> float:
    """Expected INR at A from the annulus around B."""
    r0, r_n, big_r = params.r0, params.r_n, params.big_r
    if not r0 > r_n:
        raise ParameterDomainError(
            f"r0 = {r0:.4f} must exceed the minimum reserved radius r_n = {r_n:.4f}.")
    if not r0 < big_r:
        raise ParameterDomainError(f"big_r must exceed r0 = {r0:.4g}.")
    return math.pi * params.density * (
        r0 ** 2 / (r0 ** 2 - r_n ** 2) ** 2
        - big_r ** 2 / (big_r ** 2 - r_n ** 2) ** 2)


# The crescent integrals do not depend on big_r and are linear in lambda,
# so they are computed once per geometry at unit density and scaled.

def _unit_params(r_n: float, r0: float) -> SystemParams:
    return SystemParams(r_n=r_n, r0=r0, big_r=r0 + 2 * r_n, density=1.0)


@functools.lru_cache(maxsize=4096)
def _unit_crescent_at_end_own(r_n: float, r0: float, quad: QuadratureSpec) -> float:
    params = _unit_params(r_n, r0)

    def integrand(r_a: float) -> float:
        return crescent_half_angle(r_a, params) / r_a ** 3

    return 2 * _integrate("crescent-at-A", integrand, r0 - r_n, r0, quad)


def _unit_crescent_at(
    name: str,
    distance: Callable[[float, float, SystemParams], float],
    r_n: float,
    r0: float,
    quad: QuadratureSpec,
) -> float:
    params = _unit_params(r_n, r0)
    # The inner integrand is even in theta_a, so integrate [0, phi] and double.
    inner_quad = QuadratureSpec(epsrel=quad.epsrel / 10, epsabs=quad.epsabs / 10, limit=quad.limit)

    def outer(r_a: float) -> float:
        phi = crescent_half_angle(r_a, params)
        if phi == 0:
            return 0.0

        def inner(theta_a: float) -> float:
            return 1 / distance(r_a, theta_a, params) ** 4

        return 2 * r_a * _integrate(name + " (inner)", inner, 0.0, phi, inner_quad)

    return _integrate(name, outer, r0 - r_n, r0, quad)


@functools.lru_cache(maxsize=4096)
def _unit_crescent_at_relay(r_n: float, r0: float, quad: QuadratureSpec) -> float:
    return _unit_crescent_at("crescent-at-B", dist_relay_from_crescent_point, r_n, r0, quad)


@functools.lru_cache(maxsize=4096)
def _unit_crescent_at_far_end(r_n: float, r0: float, quad: QuadratureSpec) -> float:
    return _unit_crescent_at("crescent-at-C", dist_far_end_from_crescent_point, r_n, r0, quad)


def inr_crescent_at_end_own(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> float:
    """Expected INR at A from interferers in the A-side crescent."""
    require_min_radius(params)
    if params.density == 0:
        return 0.0
    return params.density * _unit_crescent_at_end_own(params.r_n, params.r0, _resolve(quad))


def inr_crescent_at_relay(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> float:
    """Expected INR at B from interferers in the A-side crescent."""
    require_min_radius(params)
    if params.density == 0:
        return 0.0
    return params.density * _unit_crescent_at_relay(params.r_n, params.r0, _resolve(quad))


def inr_crescent_at_far_end(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> float:
    """Expected INR at C from interferers in the A-side crescent. By mirror
    symmetry this is also the INR at A from the C-side crescent."""
    require_min_radius(params)
    if params.density == 0:
        return 0.0
    return params.density * _unit_crescent_at_far_end(params.r_n, params.r0, _resolve(quad))


def _nonnegative(name: str, value: float) -> float:
    if math.isnan(value):
        raise ConsistencyError(f"The composite INR {name} is not a number.")
    if value < -NEGATIVE_INR_TOLERANCE:
        raise ConsistencyError(f"The composite INR {name} came out negative ({value:.6g}).")
    return max(value, 0.0)


def composite_inr_cr(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
    """(at_relay, at_end) for CR, where the transmitter and receiver of the
    active hop reserve. at_end holds for the receiving end node of either
    CR slot."""
    require_min_radius(params)
    require_network_covers_reservation(params)
    at_relay = inr_toroidal_at_relay(params) - inr_crescent_at_relay(params, quad)
    at_end = inr_toroidal_at_end(params) - inr_crescent_at_end_own(params, quad)
    return _nonnegative("cr_at_relay", at_relay), _nonnegative("cr_at_end", at_end)


def composite_inr_plnc(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
    """(at_relay, at_end) for PLNC, where all three nodes reserve in both
    slots. The INR at C equals the INR at A."""
    require_min_radius(params)
    require_network_covers_reservation(params)
    at_relay = inr_toroidal_at_relay(params) - 2 * inr_crescent_at_relay(params, quad)
    at_end = (inr_toroidal_at_end(params)
              - inr_crescent_at_end_own(params, quad)
              - inr_crescent_at_far_end(params, quad))
    return _nonnegative("plnc_at_relay", at_relay), _nonnegative("plnc_at_end", at_end)


def inr_breakdown(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> InrBreakdown:
    cr_at_relay, cr_at_end = composite_inr_cr(params, quad)
    plnc_at_relay, plnc_at_end = composite_inr_plnc(params, quad)
    return InrBreakdown(
        toro_at_relay=inr_toroidal_at_relay(params),
        toro_at_end=inr_toroidal_at_end(params),
        cre_at_end_own=inr_crescent_at_end_own(params, quad),
        cre_at_relay=inr_crescent_at_relay(params, quad),
        cre_at_far_end=inr_crescent_at_far_end(params, quad),
        cr_at_relay=cr_at_relay,
        cr_at_end=cr_at_end,
        plnc_at_relay=plnc_at_relay,
        plnc_at_end=plnc_at_end,
    )


def inr_db(inr: float) -> float:
    if inr == 0:
        return -math.inf
    return 10 * math.log10(inr)
