import math

import pytest

from plnc_rate import (
    ConsistencyError, ParameterDomainError, QuadratureError, QuadratureSpec, Scheme, SystemParams,
    inr_breakdown,
)
from plnc_rate.interference import (
    _nonnegative, composite_inr_cr, composite_inr_plnc, inr_crescent_at_end_own, inr_crescent_at_far_end,
    inr_crescent_at_relay, inr_db, inr_toroidal_at_end, inr_toroidal_at_relay, inr_toroidal_at_relay_unbounded,
    require_min_radius,
)
from plnc_rate.ratemodel import distance_from_snr_db

REFERENCE = SystemParams(r_n=0.25, r0=0.5, big_r=10.0, density=0.2)


def test_toroidal_at_relay() -> None:
    assert inr_toroidal_at_relay(REFERENCE) == pytest.approx(2.506991, rel=1e-6)
    assert inr_toroidal_at_relay(REFERENCE.replace(density=0.0)) == 0.0
    assert inr_toroidal_at_relay(REFERENCE.replace(big_r=1e6)) == pytest.approx(
        inr_toroidal_at_relay_unbounded(REFERENCE), rel=1e-9)


def test_toroidal_at_relay_unbounded() -> None:
    assert inr_toroidal_at_relay_unbounded(REFERENCE) == pytest.approx(0.8 * math.pi)
    assert inr_toroidal_at_relay_unbounded(SystemParams(r_n=0.5, r0=1.0, big_r=10.0, density=1 / math.pi)) \
        == pytest.approx(1.0)
    assert inr_toroidal_at_relay_unbounded(REFERENCE.replace(density=0.0)) == 0.0


@pytest.mark.parametrize('r0', [0.3, 0.5, 1.0, 2.5])
def test_finite_network_gap(r0: float) -> None:
    p = SystemParams(r_n=0.2, r0=r0, big_r=10.0, density=0.7)
    unbounded = inr_toroidal_at_relay_unbounded(p)
    gap = (unbounded - inr_toroidal_at_relay(p)) / unbounded
    assert gap == pytest.approx(r0 ** 2 / 100, rel=1e-9)


def test_toroidal_at_end() -> None:
    assert inr_toroidal_at_end(REFERENCE) == pytest.approx(4.461749, rel=1e-5)
    assert inr_toroidal_at_end(REFERENCE.replace(density=0.0)) == 0.0
    # With A on top of B both receivers see the same annulus.
    p = REFERENCE.replace(r_n=1e-9)
    assert inr_toroidal_at_end(p) == pytest.approx(inr_toroidal_at_relay(p), rel=1e-9)


def test_toroidal_at_end_needs_r0_above_r_n() -> None:
    with pytest.raises(ParameterDomainError, match="minimum reserved radius"):
        inr_toroidal_at_end(REFERENCE.replace(r_n=0.5))


def test_crescent_ordering() -> None:
    own = inr_crescent_at_end_own(REFERENCE)
    relay = inr_crescent_at_relay(REFERENCE)
    far = inr_crescent_at_far_end(REFERENCE)
    assert 0 < far < relay < own


def test_crescent_zero_density() -> None:
    p = REFERENCE.replace(density=0.0)
    assert inr_crescent_at_end_own(p) == 0.0
    assert inr_crescent_at_relay(p) == 0.0
    assert inr_crescent_at_far_end(p) == 0.0
    assert composite_inr_cr(p) == (0.0, 0.0)
    assert composite_inr_plnc(p) == (0.0, 0.0)


def test_inr_is_linear_in_density() -> None:
    base = inr_breakdown(REFERENCE).as_dict()
    for factor in (0.5, 2.0):
        scaled = inr_breakdown(REFERENCE.replace(density=REFERENCE.density * factor)).as_dict()
        for name, value in base.items():
            assert scaled[name] == pytest.approx(factor * value, rel=1e-12), name


@pytest.mark.parametrize('snr_db,density,factor', [
    (20.0, 0.2, 1.2),
    (20.0, 7.0, 2.0),
    (30.0, 0.2, 2.0),
    (30.0, 7.0, 1.2),
    (10.0, 1.0, 1.5),
])
def test_breakdown_ordering_chain(snr_db: float, density: float, factor: float) -> None:
    r_n = distance_from_snr_db(snr_db)
    b = inr_breakdown(SystemParams(r_n=r_n, r0=factor * r_n, big_r=10.0, density=density))
    assert all(value >= 0 for value in b.as_dict().values())
    assert b.cre_at_far_end <= b.cre_at_relay <= b.cre_at_end_own
    assert b.plnc_at_relay <= b.cr_at_relay <= b.toro_at_relay
    assert b.plnc_at_end <= b.cr_at_end <= b.toro_at_end
    assert b.composite(Scheme.CR) == (b.cr_at_relay, b.cr_at_end)
    assert b.composite(Scheme.PLNC) == (b.plnc_at_relay, b.plnc_at_end)


def test_composites_nonincreasing_in_r0() -> None:
    r_n = distance_from_snr_db(20)
    previous = None
    for factor in (1.1, 1.3, 1.6, 2.0, 2.5, 3.0):
        p = SystemParams(r_n=r_n, r0=factor * r_n, big_r=10.0, density=1.0)
        current = composite_inr_cr(p) + composite_inr_plnc(p)
        if previous is not None:
            for before, after in zip(previous, current):
                assert after <= before * (1 + 1e-9)
        previous = current


def test_composites_at_reference_point() -> None:
    b = inr_breakdown(REFERENCE)
    assert composite_inr_cr(REFERENCE) == (b.cr_at_relay, b.cr_at_end)
    assert composite_inr_plnc(REFERENCE) == (b.plnc_at_relay, b.plnc_at_end)
    assert b.cr_at_relay == pytest.approx(b.toro_at_relay - b.cre_at_relay)
    assert b.cr_at_end == pytest.approx(b.toro_at_end - b.cre_at_end_own)
    assert b.plnc_at_relay == pytest.approx(b.toro_at_relay - 2 * b.cre_at_relay)
    assert b.plnc_at_end == pytest.approx(b.toro_at_end - b.cre_at_end_own - b.cre_at_far_end)


@pytest.mark.parametrize('r0', [0.25, 0.2, 0.25 * (1 + 1e-7)])
def test_minimum_radius_is_rejected(r0: float) -> None:
    p = SystemParams(r_n=0.25, r0=r0, big_r=10.0, density=1.0)
    with pytest.raises(ParameterDomainError, match="minimum reserved radius r_n = 0.2500"):
        require_min_radius(p)
    with pytest.raises(ParameterDomainError):
        composite_inr_cr(p)
    with pytest.raises(ParameterDomainError):
        inr_crescent_at_relay(p)


def test_network_must_cover_the_reservation() -> None:
    p = SystemParams(r_n=0.25, r0=0.5, big_r=0.6, density=1.0)
    with pytest.raises(ParameterDomainError, match="big_r must be at least"):
        composite_inr_plnc(p)


def test_quadrature_failure_is_reported() -> None:
    strict = QuadratureSpec(epsrel=1e-13, epsabs=1e-300, limit=1)
    with pytest.raises(QuadratureError, match="did not converge"):
        inr_crescent_at_end_own(REFERENCE, strict)


def test_negative_composites() -> None:
    assert _nonnegative("x", -1e-12) == 0.0
    assert _nonnegative("x", 3.0) == 3.0
    with pytest.raises(ConsistencyError, match="negative"):
        _nonnegative("x", -1e-6)
    with pytest.raises(ConsistencyError, match="not a number"):
        _nonnegative("x", math.nan)


@pytest.mark.parametrize('field', ["r_n", "r0", "big_r", "density"])
@pytest.mark.parametrize('value', [math.inf, math.nan])
def test_non_finite_parameters_are_rejected(field: str, value: float) -> None:
    with pytest.raises(ParameterDomainError, match="must be finite"):
        REFERENCE.replace(**{field: value})


def test_inr_db() -> None:
    assert inr_db(100.0) == pytest.approx(20.0)
    assert inr_db(1.0) == 0.0
    assert inr_db(0.0) == -math.inf
