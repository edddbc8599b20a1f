import math

import numpy as np
import pytest

from plnc_rate import ParameterDomainError, Scheme, SlotRole, SystemParams
from plnc_rate.geometry import (
    crescent_area, crescent_half_angle, dist_end_from_ring_point, dist_far_end_from_crescent_point,
    dist_relay_from_crescent_point, half_angle_psi, in_reserved_region, reserved_area_cr, reserved_area_plnc,
    reserved_mask, reserving_nodes,
)
from plnc_rate.types import NodeId


def params(r_n: float, r0: float) -> SystemParams:
    return SystemParams(r_n=r_n, r0=r0, big_r=10.0, density=0.0)


IDENTITY_GRID = [(r_n, r0) for r_n in (0.05, 0.1, 0.1778, 0.25, 0.3162, 0.4, 0.5, 0.5623, 0.75, 0.9)
                 for r0 in (0.5, 0.6, 0.75, 1.0, 2.0)]


def test_half_angle_psi() -> None:
    assert half_angle_psi(params(0.5, 0.5)) == pytest.approx(math.pi / 3)
    assert half_angle_psi(params(1e-9, 0.5)) == pytest.approx(math.pi / 2)
    assert half_angle_psi(params(0.999999, 0.5)) == pytest.approx(0.0, abs=2e-3)


def test_half_angle_psi_needs_overlapping_discs() -> None:
    with pytest.raises(ParameterDomainError, match="do not overlap"):
        half_angle_psi(params(1.0, 0.5))
    with pytest.raises(ParameterDomainError):
        crescent_area(params(1.5, 0.5))


def test_crescent_half_angle() -> None:
    p = params(0.5, 0.5)
    assert crescent_half_angle(0.5, p) == pytest.approx(2 * math.pi / 3)

    p = params(0.3, 0.5)
    assert crescent_half_angle(0.2, p) == pytest.approx(0.0, abs=1e-6)
    values = [crescent_half_angle(r_a, p) for r_a in np.linspace(0.2, 0.5, 61)]
    assert all(0.0 <= v <= math.pi for v in values)
    assert all(a <= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize('r_a', [0.1, 0.51, -0.2])
def test_crescent_half_angle_outside_crescent(r_a: float) -> None:
    with pytest.raises(ParameterDomainError, match="outside the crescent"):
        crescent_half_angle(r_a, params(0.3, 0.5))


def test_distance_transforms() -> None:
    p = params(0.5, 1.0)
    assert dist_end_from_ring_point(0.5, 0.0, p) == pytest.approx(0.0, abs=1e-12)
    assert dist_end_from_ring_point(1.0, math.pi / 2, p) == pytest.approx(math.sqrt(1.25))
    assert dist_end_from_ring_point(0.7, math.pi, p) == pytest.approx(1.2)

    assert dist_relay_from_crescent_point(0.0, 1.0, p) == pytest.approx(0.5)
    assert dist_relay_from_crescent_point(0.3, 0.0, p) == pytest.approx(0.8)
    assert dist_relay_from_crescent_point(0.5, math.pi, p) == pytest.approx(0.0, abs=1e-12)

    assert dist_far_end_from_crescent_point(0.0, 1.0, p) == pytest.approx(1.0)
    assert dist_far_end_from_crescent_point(1.0, math.pi, p) == pytest.approx(0.0, abs=1e-12)


def test_crescent_point_distances_are_ordered() -> None:
    # Every crescent point is within r0 of A, at least r0 from B, and farther from C than from B.
    p = params(0.3, 0.5)
    for r_a in np.linspace(0.21, 0.49, 15):
        phi = crescent_half_angle(float(r_a), p)
        for theta_a in np.linspace(-0.95 * phi, 0.95 * phi, 11):
            to_b = dist_relay_from_crescent_point(float(r_a), float(theta_a), p)
            to_c = dist_far_end_from_crescent_point(float(r_a), float(theta_a), p)
            assert r_a <= p.r0 <= to_b + 1e-12
            assert to_b <= to_c


def test_reserved_area_examples() -> None:
    p = params(0.5, 0.5)
    assert crescent_area(p) == pytest.approx(0.478306, abs=1e-6)
    assert reserved_area_cr(p) == pytest.approx(1.263704, abs=1e-5)
    assert reserved_area_plnc(p) == pytest.approx(1.742010, abs=1e-5)

    # Tangent discs: no overlap left.
    p = params(0.999999999, 0.5)
    assert reserved_area_cr(p) == pytest.approx(2 * math.pi * 0.25, rel=1e-4)
    assert reserved_area_plnc(p) == pytest.approx(3 * math.pi * 0.25, rel=1e-4)

    # Coincident discs.
    p = params(1e-12, 0.5)
    assert crescent_area(p) == pytest.approx(0.0, abs=1e-9)
    assert reserved_area_cr(p) == pytest.approx(math.pi * 0.25)


@pytest.mark.parametrize('r_n,r0', IDENTITY_GRID)
def test_reserved_area_identities(r_n: float, r0: float) -> None:
    p = params(r_n, r0)
    disc = math.pi * r0 ** 2
    assert reserved_area_cr(p) == pytest.approx(disc + crescent_area(p), rel=1e-12)
    assert reserved_area_plnc(p) == pytest.approx(disc + 2 * crescent_area(p), rel=1e-12)
    assert reserved_area_plnc(p) > reserved_area_cr(p)


def test_reserved_areas_match_sampled_union() -> None:
    p = params(0.5, 0.5)
    rng = np.random.default_rng(2024)
    n = 1_000_000
    x_low, x_high = -p.r0, 2 * p.r_n + p.r0
    box = (x_high - x_low) * 2 * p.r0
    points = np.column_stack((rng.uniform(x_low, x_high, n), rng.uniform(-p.r0, p.r0, n)))
    cr = reserved_mask(points, reserving_nodes(Scheme.CR), p).mean() * box
    plnc = reserved_mask(points, reserving_nodes(Scheme.PLNC), p).mean() * box
    assert cr == pytest.approx(reserved_area_cr(p), rel=5e-3)
    assert plnc == pytest.approx(reserved_area_plnc(p), rel=5e-3)


def test_in_reserved_region() -> None:
    p = params(0.3, 0.5)
    b = (0.3, 0.0)
    for scheme in Scheme:
        for slot in SlotRole:
            assert in_reserved_region(b, scheme, p, slot)

    far = (0.3, 0.5 + 1e-6 + 0.3)
    assert not in_reserved_region(far, Scheme.PLNC, p)

    # Inside C's disc only.
    only_c = (0.6 + 0.45, 0.0)
    assert not in_reserved_region(only_c, Scheme.CR, p, SlotRole.RELAY_RECEIVES)
    assert in_reserved_region(only_c, Scheme.CR, p, SlotRole.END_RECEIVES)
    assert in_reserved_region(only_c, Scheme.PLNC, p)


def test_plnc_region_is_union_of_cr_slots() -> None:
    p = params(0.3, 0.5)
    rng = np.random.default_rng(7)
    points = rng.uniform(-1.0, 1.6, size=(2000, 2))
    for x, y in points:
        point = (float(x), float(y))
        expected = (in_reserved_region(point, Scheme.CR, p, SlotRole.RELAY_RECEIVES)
                    or in_reserved_region(point, Scheme.CR, p, SlotRole.END_RECEIVES))
        assert in_reserved_region(point, Scheme.PLNC, p) == expected

    mask = reserved_mask(points, reserving_nodes(Scheme.PLNC), p)
    assert list(mask) == [in_reserved_region((float(x), float(y)), Scheme.PLNC, p) for x, y in points]


def test_reserving_nodes() -> None:
    assert reserving_nodes(Scheme.CR, SlotRole.RELAY_RECEIVES) == (NodeId.A, NodeId.B)
    assert reserving_nodes(Scheme.CR, SlotRole.END_RECEIVES) == (NodeId.B, NodeId.C)
    assert reserving_nodes(Scheme.PLNC, SlotRole.END_RECEIVES) == (NodeId.A, NodeId.B, NodeId.C)
