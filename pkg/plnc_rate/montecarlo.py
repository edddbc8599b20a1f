# Seeded Monte Carlo oracle for the analytic interference and rate model.
#
# Each placement draws a Poisson number of interferers (mean lambda times
# the free area) and scatters them uniformly by rejection from a bounding
# disc. Placements are generated a chunk of MC_CHUNK_SIZE at a time, with
# one generator per chunk seeded from (seed, chunk index). The chunks are
# fixed by the trial count alone, so the estimates do not depend on how
# many threads run them.

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .constants import MC_CHUNK_SIZE, Z_SCORE_LIMIT
from .geometry import crescent_area, node_position, reserved_area, reserved_mask, reserving_nodes
from .interference import inr_breakdown, require_min_radius, require_network_covers_reservation
from .ratemodel import distance_from_snr_db, rate_from_inr, rate_from_links, sinr
from .types import (
    ComparisonRow, CountModel, InrBreakdown, InterferenceRegion, LinkSinrs, McConfig, McEstimate,
    McRateEstimate, NodeId, QuadratureSpec, RateMode, RateResult, Scheme, SlotRole, SystemParams,
)

logger = logging.getLogger(__name__)

Points = npt.NDArray[np.float64]
ChunkFunction = Callable[[np.random.Generator, int], npt.NDArray[np.float64]]


def region_for(scheme: Scheme, slot: SlotRole = SlotRole.RELAY_RECEIVES) -> InterferenceRegion:
    if scheme is Scheme.PLNC:
        return InterferenceRegion.PLNC
    if slot is SlotRole.RELAY_RECEIVES:
        return InterferenceRegion.CR_RELAY_RECEIVES
    return InterferenceRegion.CR_END_RECEIVES


def _region_shape(region: InterferenceRegion) -> Tuple[NodeId, Tuple[NodeId, ...]]:
    # (center of the bounding disc, nodes whose reserved discs are cut out)
    if region is InterferenceRegion.TOROIDAL:
        return NodeId.B, (NodeId.B,)
    if region is InterferenceRegion.CRESCENT:
        return NodeId.A, (NodeId.B,)
    if region is InterferenceRegion.CR_RELAY_RECEIVES:
        return NodeId.B, reserving_nodes(Scheme.CR, SlotRole.RELAY_RECEIVES)
    if region is InterferenceRegion.CR_END_RECEIVES:
        return NodeId.B, reserving_nodes(Scheme.CR, SlotRole.END_RECEIVES)
    return NodeId.B, reserving_nodes(Scheme.PLNC)


def region_area(region: InterferenceRegion, params: SystemParams) -> float:
    if region is InterferenceRegion.TOROIDAL:
        return math.pi * (params.big_r ** 2 - params.r0 ** 2)
    if region is InterferenceRegion.CRESCENT:
        return crescent_area(params)
    scheme = Scheme.PLNC if region is InterferenceRegion.PLNC else Scheme.CR
    return math.pi * params.big_r ** 2 - reserved_area(scheme, params)


def _bounding_radius(region: InterferenceRegion, params: SystemParams) -> float:
    return params.r0 if region is InterferenceRegion.CRESCENT else params.big_r


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """The generator for one chunk of placements. It depends on nothing but
    (seed, chunk_index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk_index,)))


class Placements(NamedTuple):
    """The interferers of several placements in one (n, 2) array. Point i
    belongs to placement owner[i]."""
    points: Points
    owner: npt.NDArray[np.intp]
    draws: int

    def placement(self, index: int) -> Points:
        return self.points[self.owner == index]


def _scatter(
    params: SystemParams,
    center: NodeId,
    radius: float,
    excluded: Sequence[NodeId],
    acceptance: float,
    count: int,
    rng: np.random.Generator,
) -> Points:
    cx, cy = node_position(center, params)
    accepted: List[Points] = []
    remaining = count
    while remaining > 0:
        batch = int(remaining / acceptance * 1.1) + 16 if excluded else remaining
        rho = radius * np.sqrt(rng.random(batch))
        angle = 2 * math.pi * rng.random(batch)
        candidates = np.column_stack((cx + rho * np.cos(angle), cy + rho * np.sin(angle)))
        kept = candidates[~reserved_mask(candidates, excluded, params)][:remaining]
        accepted.append(kept)
        remaining -= kept.shape[0]
    return np.concatenate(accepted) if accepted else np.empty((0, 2))


def _counts(mean_count: float, draws: int, rng: np.random.Generator,
            count_model: CountModel) -> npt.NDArray[np.intp]:
    if count_model is CountModel.POISSON:
        return rng.poisson(mean_count, size=draws)
    return np.full(draws, int(round(mean_count)))


def sample_placements(
    params: SystemParams,
    region: InterferenceRegion,
    rng: np.random.Generator,
    draws: int,
    count_model: CountModel = CountModel.POISSON,
) -> Placements:
    """Scatter the interferers of `draws` independent placements over a region."""
    area = region_area(region, params)
    counts = _counts(params.density * area, draws, rng, count_model)
    center, excluded = _region_shape(region)
    radius = _bounding_radius(region, params)
    points = _scatter(params, center, radius, excluded, area / (math.pi * radius ** 2), int(counts.sum()), rng)
    return Placements(points=points, owner=np.repeat(np.arange(draws), counts), draws=draws)


def sample_region(
    params: SystemParams,
    region: InterferenceRegion,
    rng: np.random.Generator,
    count_model: CountModel = CountModel.POISSON,
) -> Points:
    """Scatter the interferers of one placement over a region, as an (n, 2) array."""
    return sample_placements(params, region, rng, 1, count_model).points


def sample_interferers(
    params: SystemParams,
    scheme: Scheme,
    draw_index: int,
    seed: int,
    slot: SlotRole = SlotRole.RELAY_RECEIVES,
    count_model: CountModel = CountModel.POISSON,
) -> Points:
    """The interferers of placement `draw_index` outside a scheme's reserved
    area. `slot` selects the CR slot and is ignored for PLNC."""
    require_min_radius(params)
    require_network_covers_reservation(params)
    chunk_index, row = divmod(draw_index, MC_CHUNK_SIZE)
    placements = sample_placements(params, region_for(scheme, slot), chunk_rng(seed, chunk_index),
                                   MC_CHUNK_SIZE, count_model)
    return placements.placement(row)


def interference_at(points: Points, receivers: Sequence[NodeId], params: SystemParams) -> List[float]:
    """Total INR sum(r ** -4) at each receiver."""
    totals = []
    for node in receivers:
        x, y = node_position(node, params)
        d_sq = (points[:, 0] - x) ** 2 + (points[:, 1] - y) ** 2
        totals.append(float(np.sum(d_sq ** -2)))
    return totals


def interference_sums(placements: Placements, receivers: Sequence[NodeId],
                      params: SystemParams) -> npt.NDArray[np.float64]:
    """(draws, len(receivers)) array of the total INR of every placement at each receiver."""
    out = np.empty((placements.draws, len(receivers)))
    for column, node in enumerate(receivers):
        x, y = node_position(node, params)
        d_sq = (placements.points[:, 0] - x) ** 2 + (placements.points[:, 1] - y) ** 2
        out[:, column] = np.bincount(placements.owner, weights=d_sq ** -2, minlength=placements.draws)
    return out


def run_chunks(evaluate: ChunkFunction, mc: McConfig) -> npt.NDArray[np.float64]:
    """Call `evaluate(rng, draws)` for every chunk of placements and stack
    the (draws, width) results in chunk order."""
    def run_chunk(chunk_index: int) -> npt.NDArray[np.float64]:
        low = chunk_index * MC_CHUNK_SIZE
        draws = min(MC_CHUNK_SIZE, mc.trials - low)
        out = evaluate(chunk_rng(mc.seed, chunk_index), draws)
        logger.debug("Monte Carlo draws %d-%d done", low, low + draws - 1)
        return out

    chunks = range(math.ceil(mc.trials / MC_CHUNK_SIZE))
    if mc.threads == 1:
        results = [run_chunk(chunk_index) for chunk_index in chunks]
    else:
        with ThreadPoolExecutor(max_workers=mc.threads) as pool:
            results = list(pool.map(run_chunk, chunks))
    return np.concatenate(results)


def summarize(samples: npt.NDArray[np.float64], mc: McConfig) -> McEstimate:
    n = samples.shape[0]
    mean = float(np.mean(samples))
    std_error = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean=mean, std_error=std_error, trials=n, seed=mc.seed)


def _region_sums(params: SystemParams, region: InterferenceRegion, receivers: Sequence[NodeId],
                 mc: McConfig) -> npt.NDArray[np.float64]:
    def evaluate(rng: np.random.Generator, draws: int) -> npt.NDArray[np.float64]:
        return interference_sums(sample_placements(params, region, rng, draws, mc.count_model), receivers, params)

    return run_chunks(evaluate, mc)


def estimate_region_inr(
    params: SystemParams,
    region: InterferenceRegion,
    receivers: Sequence[NodeId],
    mc: McConfig,
) -> Dict[NodeId, McEstimate]:
    """Estimate the INR at several receivers from one set of placements."""
    require_min_radius(params)
    require_network_covers_reservation(params)
    samples = _region_sums(params, region, receivers, mc)
    logger.info("Estimated INR over %s region from %d placements", region.value, mc.trials)
    return {node: summarize(samples[:, i], mc) for i, node in enumerate(receivers)}


def estimate_inr(
    params: SystemParams,
    scheme: Scheme,
    receiver: NodeId,
    mc: McConfig,
    slot: SlotRole = SlotRole.RELAY_RECEIVES,
) -> McEstimate:
    return estimate_region_inr(params, region_for(scheme, slot), [receiver], mc)[receiver]


def _delta_method_error(
    rate: Callable[[float, float], float],
    samples: npt.NDArray[np.float64],
) -> float:
    # Standard error of rate(mean_relay, mean_end) by linearizing around the
    # sample means with central differences.
    n = samples.shape[0]
    if n < 2:
        return 0.0
    means = samples.mean(axis=0)
    gradient = np.empty(2)
    for i in range(2):
        h = 1e-6 * max(1.0, abs(float(means[i])))
        up, down = means.copy(), means.copy()
        up[i] += h
        down[i] = max(down[i] - h, 0.0)
        gradient[i] = (rate(*up) - rate(*down)) / (up[i] - down[i])
    covariance = np.cov(samples, rowvar=False) / n
    return float(math.sqrt(max(float(gradient @ covariance @ gradient), 0.0)))


def _realized_inrs(scheme: Scheme, params: SystemParams, rng: np.random.Generator, draws: int,
                   count_model: CountModel) -> npt.NDArray[np.float64]:
    # Columns: INR at B in the relay-receive slot, then at A and at C in the
    # slot(s) where they receive. Every slot gets its own placements.
    if scheme is Scheme.CR:
        first = sample_placements(params, InterferenceRegion.CR_RELAY_RECEIVES, rng, draws, count_model)
        second = sample_placements(params, InterferenceRegion.CR_END_RECEIVES, rng, draws, count_model)
        at_b1, at_a1 = interference_sums(first, [NodeId.B, NodeId.A], params).T
        at_b2, at_c2 = interference_sums(second, [NodeId.B, NodeId.C], params).T
        return np.column_stack((at_b1, at_a1, at_b2, at_c2))
    first = sample_placements(params, InterferenceRegion.PLNC, rng, draws, count_model)
    second = sample_placements(params, InterferenceRegion.PLNC, rng, draws, count_model)
    (at_b,) = interference_sums(first, [NodeId.B], params).T
    at_a, at_c = interference_sums(second, [NodeId.A, NodeId.C], params).T
    return np.column_stack((at_b, at_a, at_b, at_c))


def _links(snr: float, at_b1: float, at_a: float, at_b2: float, at_c: float) -> LinkSinrs:
    return LinkSinrs(gamma_ab=sinr(snr, at_b1), gamma_ba=sinr(snr, at_a),
                     gamma_bc=sinr(snr, at_c), gamma_cb=sinr(snr, at_b2))


def estimate_rates(
    params: SystemParams,
    scheme: Scheme,
    mc: McConfig,
    mode: RateMode = RateMode.MEAN_INR,
) -> McRateEstimate:
    """Monte Carlo counterpart of end_to_end_rate_cr / end_to_end_rate_plnc.

    MEAN_INR averages the composite INRs and feeds them through the analytic
    rate algebra. PER_REALIZATION computes a rate for every placement and
    averages the rates."""
    require_min_radius(params)
    require_network_covers_reservation(params)

    if mode is RateMode.MEAN_INR:
        samples = _region_sums(params, region_for(scheme), [NodeId.B, NodeId.A], mc)
        at_relay, at_end = summarize(samples[:, 0], mc), summarize(samples[:, 1], mc)
        rate = rate_from_inr(scheme, params, at_relay.mean, at_end.mean)

        def rate_per_area(relay: float, end: float) -> float:
            return rate_from_inr(scheme, params, relay, end).rate_per_area

        std_error = _delta_method_error(rate_per_area, samples)
        return McRateEstimate(
            rate=rate, mode=mode, inr_at_relay=at_relay, inr_at_end=at_end,
            rate_per_area=McEstimate(mean=rate.rate_per_area, std_error=std_error,
                                     trials=mc.trials, seed=mc.seed))

    snr = params.link_snr

    def evaluate(rng: np.random.Generator, draws: int) -> npt.NDArray[np.float64]:
        out = np.empty((draws, 5))
        for row, inrs in enumerate(_realized_inrs(scheme, params, rng, draws, mc.count_model)):
            at_b1, at_a, at_b2, at_c = (float(value) for value in inrs)
            result = rate_from_links(scheme, params, _links(snr, at_b1, at_a, at_b2, at_c), (at_b1, at_a))
            out[row] = (result.per_direction_rates[0], result.per_direction_rates[1],
                        result.rate_per_area, at_b1, at_a)
        return out

    samples = run_chunks(evaluate, mc)
    means = samples.mean(axis=0)
    rate = RateResult(
        scheme=scheme,
        per_direction_rates=(float(means[0]), float(means[1])),
        reserved_area=reserved_area(scheme, params),
        rate_per_area=float(means[2]),
        inr_used=(float(means[3]), float(means[4])),
    )
    return McRateEstimate(
        rate=rate, mode=mode,
        inr_at_relay=summarize(samples[:, 3], mc),
        inr_at_end=summarize(samples[:, 4], mc),
        rate_per_area=summarize(samples[:, 2], mc),
    )


def z_score(analytic: float, mc_mean: float, std_error: float) -> float:
    if std_error > 0:
        return (mc_mean - analytic) / std_error
    if math.isclose(mc_mean, analytic, rel_tol=1e-12, abs_tol=1e-300):
        return 0.0
    return math.copysign(math.inf, mc_mean - analytic)


# (region, receivers, analytic field for each receiver)
_COMPARISONS: Tuple[Tuple[InterferenceRegion, Tuple[NodeId, ...], Tuple[str, ...]], ...] = (
    (InterferenceRegion.TOROIDAL, (NodeId.B, NodeId.A), ("toro_at_relay", "toro_at_end")),
    (InterferenceRegion.CRESCENT, (NodeId.A, NodeId.B, NodeId.C),
     ("cre_at_end_own", "cre_at_relay", "cre_at_far_end")),
    (InterferenceRegion.CR_RELAY_RECEIVES, (NodeId.B, NodeId.A), ("cr_at_relay", "cr_at_end")),
    (InterferenceRegion.CR_END_RECEIVES, (NodeId.C,), ("cr_at_end",)),
    (InterferenceRegion.PLNC, (NodeId.B, NodeId.A, NodeId.C), ("plnc_at_relay", "plnc_at_end", "plnc_at_end")),
)


def _network_comparison_sums(params: SystemParams, rng: np.random.Generator,
                             draws: int) -> npt.NDArray[np.float64]:
    # One Poisson placement over the whole network disc per draw. Its
    # restriction to every region is again Poisson with the same density,
    # so all comparison columns come from the same points.
    counts = rng.poisson(params.density * math.pi * params.big_r ** 2, size=draws)
    points = _scatter(params, NodeId.B, params.big_r, (), 1.0, int(counts.sum()), rng)
    owner = np.repeat(np.arange(draws), counts)

    d_sq: Dict[NodeId, npt.NDArray[np.float64]] = {}
    for node in (NodeId.A, NodeId.B, NodeId.C):
        x, y = node_position(node, params)
        d_sq[node] = (points[:, 0] - x) ** 2 + (points[:, 1] - y) ** 2
    reserved = {node: d <= params.r0 ** 2 for node, d in d_sq.items()}
    with np.errstate(divide="ignore"):
        inr = {node: d ** -2 for node, d in d_sq.items()}

    columns = []
    for region, receivers, _ in _COMPARISONS:
        center, excluded = _region_shape(region)
        mask = d_sq[center] <= _bounding_radius(region, params) ** 2
        for node in excluded:
            mask &= ~reserved[node]
        for node in receivers:
            columns.append(np.bincount(owner[mask], weights=inr[node][mask], minlength=draws))
    return np.column_stack(columns)


def _comparison_sums(params: SystemParams, mc: McConfig) -> npt.NDArray[np.float64]:
    if mc.count_model is CountModel.POISSON:
        return run_chunks(lambda rng, draws: _network_comparison_sums(params, rng, draws), mc)
    # A fixed count over the network disc is not a fixed count over each
    # region, so every region gets its own placements.
    return np.column_stack([_region_sums(params, region, receivers, mc)
                            for region, receivers, _ in _COMPARISONS])


def default_validation_grid(big_r: Optional[float] = None) -> List[SystemParams]:
    """Link SNR in {20, 30} dB, lambda in {0.2, 7}, r0 in {1.2, 2} x r_n."""
    if big_r is None:
        from . import NETWORK_RADIUS
        big_r = NETWORK_RADIUS
    grid = []
    for snr_db in (20.0, 30.0):
        r_n = distance_from_snr_db(snr_db)
        for density in (0.2, 7.0):
            for factor in (1.2, 2.0):
                grid.append(SystemParams(r_n=r_n, r0=factor * r_n, big_r=big_r, density=density))
    return grid


def compare_with_analytic(
    grid: Sequence[SystemParams],
    mc: McConfig,
    quad: Optional[QuadratureSpec] = None,
    analytic: Callable[[SystemParams, Optional[QuadratureSpec]], InrBreakdown] = inr_breakdown,
) -> List[ComparisonRow]:
    """One row per grid point and analytic INR, in grid order. A row passes
    when the Monte Carlo mean lies within three standard errors."""
    rows = []
    for params in grid:
        require_min_radius(params)
        require_network_covers_reservation(params)
        breakdown = analytic(params, quad).as_dict()
        samples = _comparison_sums(params, mc)
        logger.info("Estimated %d INRs at %s from %d placements", samples.shape[1], params.as_dict(), mc.trials)
        column = 0
        for _, receivers, fields in _COMPARISONS:
            for node, name in zip(receivers, fields):
                estimate = summarize(samples[:, column], mc)
                column += 1
                z = z_score(breakdown[name], estimate.mean, estimate.std_error)
                quantity = f"{name}@{node.value}"
                rows.append(ComparisonRow(
                    params=params, quantity=quantity, analytic=breakdown[name],
                    mc_mean=estimate.mean, mc_std_error=estimate.std_error,
                    z=z, passed=abs(z) <= Z_SCORE_LIMIT))
                if abs(z) > Z_SCORE_LIMIT:
                    logger.warning("%s at %s is %.2f standard errors from the analytic value",
                                   quantity, params.as_dict(), z)
    return rows
