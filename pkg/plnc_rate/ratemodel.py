# From link SNR and composite INR to the end-to-end rate per unit area.
#
# CR needs four slots per bidirectional exchange and the relay decodes and
# re-sends, so each direction runs at the rate of its weaker hop. AF PLNC
# needs two slots; the relay amplifies what it heard (interference included)
# and each end node sees the combined SINR of both hops.

import math
from typing import Optional, Tuple

from .constants import CR_SLOTS_PER_EXCHANGE, PATH_LOSS_EXPONENT, PLNC_SLOTS_PER_EXCHANGE
from .exceptions import ParameterDomainError
from .geometry import reserved_area
from .interference import composite_inr_cr, composite_inr_plnc, require_min_radius
from .types import LinkSinrs, QuadratureSpec, RateResult, Scheme, SystemParams


def snr_linear_from_distance(d: float) -> float:
    if not d > 0:
        raise ParameterDomainError(f"Link distance must be positive, got {d:g}.")
    return float(d ** -PATH_LOSS_EXPONENT)


def distance_from_snr_db(snr_db: float) -> float:
    return float(10.0 ** (-snr_db / (10.0 * PATH_LOSS_EXPONENT)))


def sinr(snr: float, inr: float) -> float:
    return snr / (1 + inr)


def shannon_rate(sinr: float) -> float:
    """Maximum rate in bit/s/Hz."""
    return math.log2(1 + sinr)


def af_end_to_end_sinrs(links: LinkSinrs) -> Tuple[float, float]:
    """SINRs after amplify-and-forward combining at A and at C, in that order."""
    gamma_a = links.gamma_ba * links.gamma_cb / (1 + links.gamma_ba + links.gamma_ab + links.gamma_cb)
    gamma_c = links.gamma_ab * links.gamma_bc / (1 + links.gamma_ab + links.gamma_bc + links.gamma_cb)
    return gamma_a, gamma_c


def link_sinrs(params: SystemParams, at_relay: float, at_end: float) -> LinkSinrs:
    # Whatever the scheme, a link into B sees the relay-class INR and a link
    # into A or C sees the end-class INR.
    snr = params.link_snr
    return LinkSinrs(
        gamma_ab=sinr(snr, at_relay),
        gamma_ba=sinr(snr, at_end),
        gamma_bc=sinr(snr, at_end),
        gamma_cb=sinr(snr, at_relay),
    )


def per_direction_rates(scheme: Scheme, links: LinkSinrs) -> Tuple[float, float]:
    if scheme is Scheme.CR:
        return (
            min(shannon_rate(links.gamma_ab), shannon_rate(links.gamma_bc)),
            min(shannon_rate(links.gamma_cb), shannon_rate(links.gamma_ba)),
        )
    gamma_a, gamma_c = af_end_to_end_sinrs(links)
    # A->C is decoded at C, C->A at A.
    return shannon_rate(gamma_c), shannon_rate(gamma_a)


def slots_per_exchange(scheme: Scheme) -> int:
    return CR_SLOTS_PER_EXCHANGE if scheme is Scheme.CR else PLNC_SLOTS_PER_EXCHANGE


def rate_from_links(scheme: Scheme, params: SystemParams, links: LinkSinrs,
                    inr_used: Tuple[float, float]) -> RateResult:
    rates = per_direction_rates(scheme, links)
    area = reserved_area(scheme, params)
    return RateResult(
        scheme=scheme,
        per_direction_rates=rates,
        reserved_area=area,
        rate_per_area=sum(rates) / (slots_per_exchange(scheme) * area),
        inr_used=inr_used,
    )


def rate_from_inr(scheme: Scheme, params: SystemParams, at_relay: float, at_end: float) -> RateResult:
    """The rate algebra shared by the analytic and the Monte Carlo paths."""
    return rate_from_links(scheme, params, link_sinrs(params, at_relay, at_end), (at_relay, at_end))


def end_to_end_rate_cr(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> RateResult:
    require_min_radius(params)
    at_relay, at_end = composite_inr_cr(params, quad)
    return rate_from_inr(Scheme.CR, params, at_relay, at_end)


def end_to_end_rate_plnc(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> RateResult:
    require_min_radius(params)
    at_relay, at_end = composite_inr_plnc(params, quad)
    return rate_from_inr(Scheme.PLNC, params, at_relay, at_end)


def end_to_end_rate(scheme: Scheme, params: SystemParams, quad: Optional[QuadratureSpec] = None) -> RateResult:
    if scheme is Scheme.CR:
        return end_to_end_rate_cr(params, quad)
    return end_to_end_rate_plnc(params, quad)


def interference_free_rate(scheme: Scheme, params: SystemParams) -> RateResult:
    """The rate with no interferers at all, keeping the spatial cost."""
    require_min_radius(params)
    return rate_from_inr(scheme, params, 0.0, 0.0)


def rate_gain(params: SystemParams, quad: Optional[QuadratureSpec] = None) -> float:
    """R_PLNC / R_CR. Above 1 means PLNC delivers more per unit area."""
    cr = end_to_end_rate_cr(params, quad).rate_per_area
    plnc = end_to_end_rate_plnc(params, quad).rate_per_area
    if cr == 0:
        return math.inf if plnc > 0 else 1.0
    return plnc / cr
