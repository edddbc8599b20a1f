import pytest

from plnc_rate import (
    ParameterDomainError, Scheme, SweepGrid, SweepRecord, SystemParams, end_to_end_rate, find_crossover_density,
    find_crossover_radius, optimize_r0, sweep_density, sweep_reserved_radius, validate_radius_sweep,
)
from plnc_rate.experiments import default_density_grid, default_r0_grid
from plnc_rate.ratemodel import distance_from_snr_db

R_N_20 = distance_from_snr_db(20)
NEAR_MIN_20 = SweepGrid(start=0.33, stop=0.45, step=0.01)


def test_sweep_grid() -> None:
    assert SweepGrid(0.1, 10.0, 0.1).count == 100
    assert SweepGrid(0.1, 10.0, 0.1).values()[-1] == 10.0
    assert SweepGrid(1.0, 1.0, 0.5).values() == [1.0]
    with pytest.raises(ParameterDomainError):
        SweepGrid(1.0, 2.0, 0.0)
    with pytest.raises(ParameterDomainError):
        SweepGrid(2.0, 1.0, 0.1)


def test_default_grids() -> None:
    grid = default_r0_grid(R_N_20)
    assert grid.start == pytest.approx(1.02 * R_N_20)
    assert grid.stop == 1.0
    assert grid.step == 0.005
    assert default_density_grid() == SweepGrid(0.1, 10.0, 0.1)


def test_validate_radius_sweep() -> None:
    records = validate_radius_sweep(0.5, 0.2, SweepGrid(1.0, 10.0, 0.5))
    assert len(records) == 19
    assert records[-1].big_r == 10.0
    assert records[-1].relative_gap == pytest.approx(0.0025, rel=1e-9)
    for before, after in zip(records, records[1:]):
        assert before.inr_finite <= after.inr_finite
        assert after.inr_finite < after.inr_unbounded
        assert after.inr_unbounded == before.inr_unbounded


def test_validate_radius_sweep_needs_big_r_above_r0() -> None:
    with pytest.raises(ParameterDomainError, match="must exceed r0"):
        validate_radius_sweep(0.5, 0.2, SweepGrid(0.5, 2.0, 0.5))


def test_sweep_without_interference_decreases_in_r0() -> None:
    records = sweep_reserved_radius(20, 0.0, grid=NEAR_MIN_20)
    assert [r.scheme for r in records[:4]] == [Scheme.CR, Scheme.PLNC, Scheme.CR, Scheme.PLNC]
    for scheme in Scheme:
        rates = [r.rate_per_area for r in records if r.scheme is scheme]
        assert len(rates) == NEAR_MIN_20.count
        assert all(a > b for a, b in zip(rates, rates[1:]))
    assert all(r.inr_at_relay == 0.0 and r.inr_at_end == 0.0 for r in records)


@pytest.mark.parametrize('density', [0.0, 0.2])
def test_rate_fades_for_large_reservations(density: float) -> None:
    records = sweep_reserved_radius(20, density, 10.0, grid=SweepGrid(0.33, 3.0, 0.05))
    far = SystemParams(r_n=R_N_20, r0=10 * R_N_20, big_r=10.0, density=density)
    for scheme in Scheme:
        best = max(r.rate_per_area for r in records if r.scheme is scheme)
        assert end_to_end_rate(scheme, far).rate_per_area < 0.1 * best


def test_sweep_does_not_depend_on_threads() -> None:
    grid = SweepGrid(0.35, 0.5, 0.05)
    assert sweep_reserved_radius(20, 7.0, grid=grid, threads=1) == sweep_reserved_radius(20, 7.0, grid=grid, threads=3)


@pytest.mark.parametrize('start', [0.3, R_N_20])
def test_sweep_rejects_r0_at_or_below_r_n(start: float) -> None:
    with pytest.raises(ParameterDomainError, match="minimum reserved radius"):
        sweep_reserved_radius(20, 1.0, grid=SweepGrid(start, 1.0, 0.1))


@pytest.mark.parametrize('scheme', list(Scheme))
def test_optimize_without_interference_picks_smallest_r0(scheme: Scheme) -> None:
    best_r0, rate = optimize_r0(20, 0.0, None, scheme, NEAR_MIN_20)
    assert best_r0 == NEAR_MIN_20.start
    assert rate.scheme is scheme


@pytest.mark.parametrize('scheme', list(Scheme))
def test_optimum_beats_every_grid_point(scheme: Scheme) -> None:
    search = SweepGrid(0.35, 1.0, 0.05)
    best_r0, rate = optimize_r0(20, 3.0, 10.0, scheme, search)
    assert search.start <= best_r0 <= search.stop
    for record in sweep_reserved_radius(20, 3.0, 10.0, grid=search):
        if record.scheme is scheme:
            assert rate.rate_per_area >= record.rate_per_area


def test_sweep_density_records_best_r0() -> None:
    search = SweepGrid(0.33, 0.6, 0.03)
    records = sweep_density(20, grid=SweepGrid(0.0, 0.5, 0.5), search=search)
    assert [(r.x, r.scheme) for r in records] == [
        (0.0, Scheme.CR), (0.0, Scheme.PLNC), (0.5, Scheme.CR), (0.5, Scheme.PLNC)]
    assert records[0].best_r0 == 0.33
    assert all(r.best_r0 is not None and search.start <= r.best_r0 <= search.stop for r in records)


def test_crossover_on_a_single_point() -> None:
    # Without interference only the slot count and the AF combining loss
    # matter: PLNC wins at 20 dB, CR at 10 dB.
    r_n = distance_from_snr_db(10)
    near_min_10 = SweepGrid(round(1.02 * r_n, 6), round(1.02 * r_n, 6) + 0.1, 0.02)
    result = find_crossover_density(10, (0.0, 0.0), search=near_min_10)
    assert result.lambda_star is None
    assert result.dominant is Scheme.CR
    assert result.lambda_range == (0.0, 0.0)

    result = find_crossover_density(20, (0.0, 0.0), search=NEAR_MIN_20)
    assert result.lambda_star is None
    assert result.dominant is Scheme.PLNC


@pytest.mark.parametrize('lambda_range', [(2.0, 1.0), (-1.0, 1.0)])
def test_crossover_rejects_invalid_range(lambda_range: tuple) -> None:
    with pytest.raises(ParameterDomainError, match="Invalid lambda range"):
        find_crossover_density(20, lambda_range)


def _records(diffs: list) -> list:
    records = []
    for i, diff in enumerate(diffs):
        x = 0.1 * (i + 1)
        records.append(SweepRecord(x=x, scheme=Scheme.CR, rate_per_area=5.0,
                                   inr_at_relay=0.0, inr_at_end=0.0, reserved_area=1.0))
        records.append(SweepRecord(x=x, scheme=Scheme.PLNC, rate_per_area=5.0 + diff,
                                   inr_at_relay=0.0, inr_at_end=0.0, reserved_area=1.0))
    return records


def test_find_crossover_radius() -> None:
    assert find_crossover_radius(_records([-1.0, 1.0, 2.0])) == [pytest.approx(0.15)]
    assert find_crossover_radius(_records([1.0, 2.0, 3.0])) == []
    assert find_crossover_radius(_records([-3.0, 1.0, -1.0])) == [pytest.approx(0.175), pytest.approx(0.25)]
    assert find_crossover_radius([]) == []


def _pairs(records: list) -> list:
    return [(records[i], records[i + 1]) for i in range(0, len(records), 2)]


def _optimized(snr_db: float, density: float, scheme: Scheme) -> tuple:
    return optimize_r0(snr_db, density, None, scheme)


@pytest.mark.slow
def test_cr_wins_at_every_r0_for_20_db_and_high_density() -> None:
    records = sweep_reserved_radius(20, 7.0, 10.0, grid=SweepGrid(0.33, 1.0, 0.005), threads=4)
    for cr, plnc in _pairs(records):
        assert cr.rate_per_area >= plnc.rate_per_area, cr.x


@pytest.mark.slow
def test_single_r0_crossover_for_30_db() -> None:
    records = sweep_reserved_radius(30, 7.0, threads=4)
    pairs = _pairs(records)
    crossings = find_crossover_radius(records)
    assert len(crossings) == 1
    for cr, plnc in pairs:
        if cr.x < crossings[0]:
            assert cr.rate_per_area > plnc.rate_per_area
        else:
            assert plnc.rate_per_area > cr.rate_per_area


@pytest.mark.slow
def test_optimal_r0_ordering() -> None:
    cr_20, _ = _optimized(20, 7.0, Scheme.CR)
    plnc_20, _ = _optimized(20, 7.0, Scheme.PLNC)
    assert plnc_20 > cr_20
    assert _optimized(30, 7.0, Scheme.CR)[0] < cr_20
    assert _optimized(30, 7.0, Scheme.PLNC)[0] < plnc_20


@pytest.mark.slow
def test_cr_dominates_at_10_db() -> None:
    records = sweep_density(10, grid=SweepGrid(0.5, 10.0, 0.5), threads=4)
    for cr, plnc in _pairs(records):
        assert cr.rate_per_area >= plnc.rate_per_area, cr.x


@pytest.mark.slow
def test_density_crossover_for_20_db() -> None:
    assert _optimized(20, 0.1, Scheme.PLNC)[1].rate_per_area > _optimized(20, 0.1, Scheme.CR)[1].rate_per_area
    assert _optimized(20, 10.0, Scheme.CR)[1].rate_per_area > _optimized(20, 10.0, Scheme.PLNC)[1].rate_per_area
    result = find_crossover_density(20, (0.1, 10.0))
    assert result.lambda_star is not None
    assert 0.1 < result.lambda_star < 10.0


@pytest.mark.slow
def test_plnc_region_grows_with_snr() -> None:
    at_20 = find_crossover_density(20, (0.1, 10.0))
    at_30 = find_crossover_density(30, (0.1, 10.0))
    at_40 = find_crossover_density(40, (0.1, 10.0))
    assert at_20.lambda_star is not None
    assert at_30.lambda_star is not None
    assert at_30.lambda_star > at_20.lambda_star
    if at_40.lambda_star is None:
        assert at_40.dominant is Scheme.PLNC
    else:
        assert at_40.lambda_star > at_30.lambda_star
