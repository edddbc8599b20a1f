# Parameter sweeps over the network radius, the reserved radius and the
# interferer density, the per-point optimization of the reserved radius,
# and location of the crossovers between PLNC and CR.

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

from scipy import optimize

from .constants import CROSSOVER_XTOL, MIN_RADIUS_GUARD, R0_REFINE_XATOL
from .exceptions import ParameterDomainError
from .interference import inr_toroidal_at_relay, inr_toroidal_at_relay_unbounded
from .ratemodel import distance_from_snr_db, end_to_end_rate
from .types import (
    CrossoverResult, QuadratureSpec, RadiusRecord, RateResult, Scheme, SweepGrid, SweepRecord, SystemParams,
)

logger = logging.getLogger(__name__)

SCHEMES = (Scheme.CR, Scheme.PLNC)

T = TypeVar("T")
U = TypeVar("U")


def _ordered_map(func: Callable[[T], U], items: Sequence[T], threads: int) -> List[U]:
    # Results come back in input order whatever order the workers finish in.
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def default_r0_grid(r_n: float) -> SweepGrid:
    from . import R0_START_FACTOR, R0_STOP, R0_STEP
    start = round(r_n * R0_START_FACTOR, 12)
    return SweepGrid(start=start, stop=max(R0_STOP, start), step=R0_STEP)


def default_density_grid() -> SweepGrid:
    from . import LAMBDA_START, LAMBDA_STOP, LAMBDA_STEP
    return SweepGrid(start=LAMBDA_START, stop=LAMBDA_STOP, step=LAMBDA_STEP)


def _check_r0_grid(grid: SweepGrid, r_n: float) -> None:
    if not grid.start > r_n * (1 + MIN_RADIUS_GUARD):
        raise ParameterDomainError(
            f"The r0 grid starts at {grid.start:.4f} but r0 must exceed the minimum "
            f"reserved radius r_n = {r_n:.4f}.")


def validate_radius_sweep(
    r0: float,
    density: float,
    grid: SweepGrid,
    r_n: Optional[float] = None,
) -> List[RadiusRecord]:
    """The relay's toroidal INR for each network radius in `grid`, next to
    its value for an unbounded network."""
    # The relay's INR does not involve r_n; any admissible value will do.
    if r_n is None:
        r_n = r0 / 2
    values = grid.values()
    if not values[0] > r0:
        raise ParameterDomainError(
            f"Every network radius must exceed r0 = {r0:.4g}; the grid starts at {values[0]:.4g}.")
    records = []
    for big_r in values:
        params = SystemParams(r_n=r_n, r0=r0, big_r=big_r, density=density)
        records.append(RadiusRecord(
            big_r=big_r,
            inr_finite=inr_toroidal_at_relay(params),
            inr_unbounded=inr_toroidal_at_relay_unbounded(params)))
    return records


def sweep_reserved_radius(
    snr_db: float,
    density: float,
    big_r: Optional[float] = None,
    grid: Optional[SweepGrid] = None,
    quad: Optional[QuadratureSpec] = None,
    threads: int = 1,
) -> List[SweepRecord]:
    """Both schemes' results at every r0 of the grid, ordered by r0 then scheme."""
    if big_r is None:
        from . import NETWORK_RADIUS
        big_r = NETWORK_RADIUS
    r_n = distance_from_snr_db(snr_db)
    if grid is None:
        grid = default_r0_grid(r_n)
    _check_r0_grid(grid, r_n)

    def evaluate(r0: float) -> List[SweepRecord]:
        params = SystemParams(r_n=r_n, r0=r0, big_r=big_r, density=density)
        return [SweepRecord.from_rate(r0, end_to_end_rate(scheme, params, quad)) for scheme in SCHEMES]

    logger.info("Sweeping r0 over %d points at %.4g dB, lambda = %.4g", grid.count, snr_db, density)
    return [record for records in _ordered_map(evaluate, grid.values(), threads) for record in records]


def optimize_r0(
    snr_db: float,
    density: float,
    big_r: Optional[float],
    scheme: Scheme,
    search: Optional[SweepGrid] = None,
    quad: Optional[QuadratureSpec] = None,
) -> Tuple[float, RateResult]:
    """The r0 maximizing a scheme's rate per unit area over the search range.

    A grid search picks the best sample, and a bounded golden-section/Brent
    search between its neighbours refines it. The refined point replaces the
    grid point only if it is strictly better, so ties go to the smaller r0."""
    if big_r is None:
        from . import NETWORK_RADIUS
        big_r = NETWORK_RADIUS
    r_n = distance_from_snr_db(snr_db)
    if search is None:
        search = default_r0_grid(r_n)
    _check_r0_grid(search, r_n)
    values = search.values()

    def rate_at(r0: float) -> RateResult:
        return end_to_end_rate(scheme, SystemParams(r_n=r_n, r0=r0, big_r=big_r, density=density), quad)

    samples = [rate_at(r0) for r0 in values]
    best = max(range(len(values)), key=lambda i: (samples[i].rate_per_area, -i))
    best_r0, best_rate = values[best], samples[best]

    if len(values) > 1:
        low = values[max(best - 1, 0)]
        high = values[min(best + 1, len(values) - 1)]
        refined = optimize.minimize_scalar(
            lambda r0: -rate_at(float(r0)).rate_per_area,
            bounds=(low, high), method="bounded", options={"xatol": R0_REFINE_XATOL})
        candidate = rate_at(float(refined.x))
        logger.debug("%s: grid best r0 = %.6g, refined in [%.6g, %.6g] to %.9g",
                     scheme.value, best_r0, low, high, float(refined.x))
        if candidate.rate_per_area > best_rate.rate_per_area:
            best_r0, best_rate = float(refined.x), candidate

    return best_r0, best_rate


def sweep_density(
    snr_db: float,
    big_r: Optional[float] = None,
    grid: Optional[SweepGrid] = None,
    search: Optional[SweepGrid] = None,
    quad: Optional[QuadratureSpec] = None,
    threads: int = 1,
) -> List[SweepRecord]:
    """For every lambda of the grid, each scheme's best rate and the r0 that achieves it."""
    if grid is None:
        grid = default_density_grid()

    def evaluate(density: float) -> List[SweepRecord]:
        records = []
        for scheme in SCHEMES:
            best_r0, rate = optimize_r0(snr_db, density, big_r, scheme, search, quad)
            records.append(SweepRecord.from_rate(density, rate, best_r0=best_r0))
        return records

    logger.info("Sweeping lambda over %d points at %.4g dB", grid.count, snr_db)
    return [record for records in _ordered_map(evaluate, grid.values(), threads) for record in records]


def _optimized_gap(snr_db: float, big_r: Optional[float], search: Optional[SweepGrid],
                   quad: Optional[QuadratureSpec]) -> Callable[[float], float]:
    def gap(density: float) -> float:
        _, plnc = optimize_r0(snr_db, density, big_r, Scheme.PLNC, search, quad)
        _, cr = optimize_r0(snr_db, density, big_r, Scheme.CR, search, quad)
        logger.debug("lambda = %.6g: optimized PLNC - CR = %.6g", density, plnc.rate_per_area - cr.rate_per_area)
        return plnc.rate_per_area - cr.rate_per_area
    return gap


def find_crossover_density(
    snr_db: float,
    lambda_range: Tuple[float, float],
    big_r: Optional[float] = None,
    search: Optional[SweepGrid] = None,
    quad: Optional[QuadratureSpec] = None,
) -> CrossoverResult:
    """The density at which the optimized PLNC and CR rates per area meet,
    found by bisection to within 0.01. With no sign change in the range the
    result names the scheme that dominates instead."""
    low, high = lambda_range
    if not 0 <= low <= high:
        raise ParameterDomainError(f"Invalid lambda range [{low:g}, {high:g}].")
    gap = _optimized_gap(snr_db, big_r, search, quad)

    gap_low = gap(low)
    if low == high:
        return CrossoverResult(None, Scheme.PLNC if gap_low > 0 else Scheme.CR, (low, high))
    if gap_low == 0:
        return CrossoverResult(low, None, (low, high))
    gap_high = gap(high)
    if gap_high == 0:
        return CrossoverResult(high, None, (low, high))
    if (gap_low > 0) == (gap_high > 0):
        return CrossoverResult(None, Scheme.PLNC if gap_low > 0 else Scheme.CR, (low, high))

    lambda_star = optimize.bisect(gap, low, high, xtol=CROSSOVER_XTOL)
    logger.info("Crossover at lambda = %.4g for %.4g dB", lambda_star, snr_db)
    return CrossoverResult(float(lambda_star), None, (low, high))


def find_crossover_radius(records: Sequence[SweepRecord]) -> List[float]:
    """The r0 values where PLNC and CR trade places along an r0 sweep, by
    linear interpolation between neighbouring grid points."""
    by_r0: Dict[float, Dict[Scheme, float]] = {}
    for record in records:
        by_r0.setdefault(record.x, {})[record.scheme] = record.rate_per_area
    points = [(r0, rates[Scheme.PLNC] - rates[Scheme.CR]) for r0, rates in sorted(by_r0.items())
              if Scheme.PLNC in rates and Scheme.CR in rates]
    crossings = []
    for (x0, d0), (x1, d1) in zip(points, points[1:]):
        if d0 == 0:
            crossings.append(x0)
        elif d0 * d1 < 0:
            crossings.append(x0 + (x1 - x0) * d0 / (d0 - d1))
    if points and points[-1][1] == 0:
        crossings.append(points[-1][0])
    return crossings
