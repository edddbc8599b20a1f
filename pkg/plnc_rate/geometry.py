# Planar geometry of the three-node line topology and its reserved areas.
#
# Coordinates are fixed: A = (0, 0), B = (r_n, 0), C = (2 r_n, 0). Polar
# angles around B (theta) have theta = 0 pointing from B toward A. Polar
# angles around A (theta_a) have theta_a = 0 pointing from A away from B.

import math
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .constants import CLAMP_TOLERANCE
from .exceptions import ParameterDomainError
from .types import NodeId, Scheme, SlotRole, SystemParams

Point = Tuple[float, float]


def node_position(node: NodeId, params: SystemParams) -> Point:
    offsets = {NodeId.A: 0.0, NodeId.B: 1.0, NodeId.C: 2.0}
    return (offsets[node] * params.r_n, 0.0)


def reserving_nodes(scheme: Scheme, slot: SlotRole = SlotRole.RELAY_RECEIVES) -> Tuple[NodeId, ...]:
    """The nodes whose control frames reserve a disc of radius r0 in a slot.
    PLNC reserves around all three nodes in both of its slots."""
    if scheme is Scheme.PLNC:
        return (NodeId.A, NodeId.B, NodeId.C)
    if slot is SlotRole.RELAY_RECEIVES:
        return (NodeId.A, NodeId.B)
    return (NodeId.B, NodeId.C)


def _clamp(value: float, low: float, high: float) -> float:
    # Only absorb rounding; anything further out is a caller bug.
    if value < low - CLAMP_TOLERANCE or value > high + CLAMP_TOLERANCE:
        raise ParameterDomainError(f"Argument {value!r} is outside [{low:g}, {high:g}].")
    return min(max(value, low), high)


def _check_overlap(params: SystemParams) -> None:
    if not params.r_n < 2 * params.r0:
        raise ParameterDomainError(
            f"The reserved discs do not overlap: r_n = {params.r_n:.4g} must be below 2 * r0 = {2 * params.r0:.4g}.")


def half_angle_psi(params: SystemParams) -> float:
    """Half the angle subtended at a node's center by the chord shared with
    the neighbouring node's reserved disc."""
    _check_overlap(params)
    return math.atan(math.sqrt(4 * params.r0 ** 2 - params.r_n ** 2) / params.r_n)


def crescent_half_angle(r_a: float, params: SystemParams) -> float:
    """phi(r_a): half the angular width, seen from A, of the arc of radius r_a
    around A that lies in the A-side crescent (outside B's disc)."""
    r0, r_n = params.r0, params.r_n
    low = r0 - r_n
    slack = CLAMP_TOLERANCE * r0
    if low < 0:
        raise ParameterDomainError(f"r0 must be at least r_n = {r_n:.4g} for the crescent to be defined.")
    if not r_a > 0 or r_a < low - slack or r_a > r0 + slack:
        raise ParameterDomainError(f"r_a = {r_a:.6g} is outside the crescent range [{low:.6g}, {r0:.6g}].")
    arg = (r0 ** 2 - r_n ** 2 - r_a ** 2) / (2 * r_a * r_n)
    return math.acos(_clamp(arg, -1.0, 1.0))


def dist_end_from_ring_point(r_b: float, theta: float, params: SystemParams) -> float:
    """Distance from A to the point at polar coordinates (r_b, theta) around B."""
    r_n = params.r_n
    return math.sqrt(max(r_b ** 2 + r_n ** 2 - 2 * r_n * r_b * math.cos(theta), 0.0))


def dist_relay_from_crescent_point(r_a: float, theta_a: float, params: SystemParams) -> float:
    """Distance from B to the point at polar coordinates (r_a, theta_a) around A."""
    r_n = params.r_n
    return math.sqrt(max(r_a ** 2 + r_n ** 2 + 2 * r_n * r_a * math.cos(theta_a), 0.0))


def dist_far_end_from_crescent_point(r_a: float, theta_a: float, params: SystemParams) -> float:
    """Distance from C to the point at polar coordinates (r_a, theta_a) around A."""
    r_n = params.r_n
    return math.sqrt(max(r_a ** 2 + 4 * r_n ** 2 + 4 * r_n * r_a * math.cos(theta_a), 0.0))


def _chord_term(params: SystemParams) -> float:
    # Area of the rhombus spanned by two adjacent centers and the two
    # intersection points of their circles, halved.
    return params.r_n / 2 * math.sqrt(4 * params.r0 ** 2 - params.r_n ** 2)


def crescent_area(params: SystemParams) -> float:
    """Area of A's reserved disc that lies outside B's reserved disc."""
    psi = half_angle_psi(params)
    return params.r0 ** 2 * (math.pi - 2 * psi) + _chord_term(params)


def reserved_area_cr(params: SystemParams) -> float:
    """Area of the union of two reserved discs r_n apart."""
    psi = half_angle_psi(params)
    return 2 * params.r0 ** 2 * (math.pi - psi) + _chord_term(params)


def reserved_area_plnc(params: SystemParams) -> float:
    """Area of the union of all three reserved discs. The A-side and C-side
    crescents are disjoint since the A/C lens lies inside B's disc."""
    psi = half_angle_psi(params)
    return params.r0 ** 2 * (3 * math.pi - 4 * psi) + 2 * _chord_term(params)


def reserved_area(scheme: Scheme, params: SystemParams) -> float:
    if scheme is Scheme.CR:
        return reserved_area_cr(params)
    return reserved_area_plnc(params)


def reserved_mask(
    points: npt.NDArray[np.float64],
    nodes: Sequence[NodeId],
    params: SystemParams,
) -> npt.NDArray[np.bool_]:
    """Vectorized membership test: which rows of an (n, 2) array lie within
    r0 of at least one of `nodes`."""
    mask = np.zeros(points.shape[0], dtype=bool)
    r0_sq = params.r0 ** 2
    for node in nodes:
        cx, cy = node_position(node, params)
        mask |= (points[:, 0] - cx) ** 2 + (points[:, 1] - cy) ** 2 <= r0_sq
    return mask


def in_reserved_region(
    point: Point,
    scheme: Scheme,
    params: SystemParams,
    slot: SlotRole = SlotRole.RELAY_RECEIVES,
) -> bool:
    """True when the point lies within r0 of any node that reserves in the
    given scheme and slot. `slot` only matters for CR."""
    x, y = point
    for node in reserving_nodes(scheme, slot):
        cx, cy = node_position(node, params)
        if math.hypot(x - cx, y - cy) <= params.r0:
            return True
    return False
