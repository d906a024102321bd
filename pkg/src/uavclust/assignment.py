"""UAV-vehicle assignment: every vehicle joins the UAV with max A2G SNR."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from . import channel
from .model import UavId, UavNode, Vehicle, VehicleId


@dataclass(frozen=True)
class AssignmentMatrix:
    """Vehicle -> (UAV, SNR) partition plus per-UAV member counts."""

    by_vehicle: Dict[VehicleId, Tuple[UavId, float]]
    counts: Dict[UavId, int]

    def members_of(self, uav_id: UavId):
        return sorted(v for v, (u, _) in self.by_vehicle.items() if u == uav_id)


def assign(vehicles: Sequence[Vehicle], uavs: Sequence[UavNode],
           g0: float, noise: float) -> AssignmentMatrix:
    """Per-vehicle argmax of the A2G SNR over all UAVs.

    Ties break to the lowest UAV id so the result is independent of
    evaluation order.
    """
    if not uavs:
        raise ValueError("assign: need at least one UAV")
    if not vehicles:
        raise ValueError("assign: need at least one vehicle")
    by_vehicle: Dict[VehicleId, Tuple[UavId, float]] = {}
    counts: Dict[UavId, int] = {u.id: 0 for u in uavs}
    for v in vehicles:
        best_uav = None
        best_snr = -1.0
        for u in sorted(uavs, key=lambda n: n.id):
            d = channel.a2g_distance(u.pos.x, u.pos.y, u.pos.h, v.pos.x, v.pos.y)
            snr = channel.a2g_snr(True, u.tx_power, channel.a2g_gain(d, g0), noise)
            if snr > best_snr:
                best_uav, best_snr = u.id, snr
        by_vehicle[v.id] = (best_uav, best_snr)
        counts[best_uav] += 1
    return AssignmentMatrix(by_vehicle=by_vehicle, counts=counts)
