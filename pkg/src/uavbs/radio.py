"""60 GHz link budget: path loss, antenna pattern, interference, capacity, MCS and QoS.

All powers are dBm unless the name ends in ``_mw``; distances are meters and
angles are degrees.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

D_MIN_M = 1.0


class ServiceType(enum.IntEnum):
    VIDEO_STREAMING = 0
    ONLINE_GAMING = 1
    WEB_SURFING = 2
    VOIP = 3


@dataclass(frozen=True)
class LinkBudget:
    a_db: float = 32.5
    f_ghz: float = 60.0
    n_exp: float = 2.0
    bandwidth_hz: float = 2.16e9
    g_tx_dbi: float = 19.0
    p_tx_dbm: float = 24.0
    g_rx_dbi: float = 3.0
    eirp_cap_dbm: float = 43.0
    noise_density_dbm_hz: float = -174.0
    sys_loss_db: float = 15.0

    def __post_init__(self):
        if self.g_tx_dbi + self.p_tx_dbm > self.eirp_cap_dbm + 1e-12:
            raise ValueError(
                f"EIRP {self.g_tx_dbi + self.p_tx_dbm} dBm exceeds cap {self.eirp_cap_dbm} dBm"
            )
        if self.bandwidth_hz <= 0 or self.f_ghz <= 0 or self.n_exp <= 0:
            raise ValueError("bandwidth_hz, f_ghz and n_exp must be positive")

    @property
    def eirp_dbm(self) -> float:
        return self.g_tx_dbi + self.p_tx_dbm


@dataclass(frozen=True)
class AntennaPattern:
    g_max_dbi: float = 19.0
    phi3_deg: float = 10.0
    theta3_deg: float = 10.0

    def __post_init__(self):
        if self.phi3_deg <= 0 or self.theta3_deg <= 0:
            raise ValueError("3 dB beamwidths must be positive")


@dataclass(frozen=True)
class McsRow:
    sensitivity_dbm: float
    mcs_id: str
    rate_mbps: float


class McsTable:
    """Receive-sensitivity to data-rate lookup, rows ascending in sensitivity."""

    def __init__(self, rows: Sequence[McsRow]):
        rows = list(rows)
        if not rows:
            raise ValueError("MCS table must not be empty")
        for prev, cur in zip(rows, rows[1:]):
            if not (cur.sensitivity_dbm > prev.sensitivity_dbm and cur.rate_mbps > prev.rate_mbps):
                raise ValueError("MCS rows must be strictly increasing in sensitivity and rate")
        self.rows = tuple(rows)
        self._sens = np.array([r.sensitivity_dbm for r in rows])
        self._rates = np.array([r.rate_mbps for r in rows])

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, McsTable) and self.rows == other.rows

    @classmethod
    def from_file(cls, path) -> "McsTable":
        """Read ``sensitivity_dbm mcs_id rate_mbps`` rows; ``#`` starts a comment."""
        rows = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
            rows.append(McsRow(float(parts[0]), parts[1], float(parts[2])))
        return cls(rows)

    def to_file(self, path) -> None:
        lines = ["# sensitivity_dbm mcs_id rate_mbps"]
        lines += [f"{r.sensitivity_dbm:g} {r.mcs_id} {r.rate_mbps:g}" for r in self.rows]
        Path(path).write_text("\n".join(lines) + "\n")

    def rate_mbps(self, rx_dbm):
        """Rate of the highest row whose sensitivity is met; 0 below the first row."""
        idx = np.searchsorted(self._sens, rx_dbm, side="right") - 1
        rates = np.where(idx >= 0, self._rates[np.clip(idx, 0, None)], 0.0)
        return float(rates) if np.ndim(rates) == 0 else rates


# IEEE 802.11ad single-carrier/OFDM sensitivities used by the 60 GHz model
IEEE_80211AD_MCS = McsTable(
    [
        McsRow(-78.0, "MCS0", 27.5),
        McsRow(-68.0, "MCS1", 385.0),
        McsRow(-66.0, "MCS2", 770.0),
        McsRow(-65.0, "MCS3", 962.5),
        McsRow(-64.0, "MCS4", 1155.0),
        McsRow(-63.0, "MCS6", 1540.0),
        McsRow(-62.0, "MCS7", 1925.0),
        McsRow(-61.0, "MCS8", 2310.0),
        McsRow(-59.0, "MCS9", 2502.5),
        McsRow(-55.0, "MCS10", 3080.0),
        McsRow(-54.0, "MCS11", 3850.0),
        McsRow(-53.0, "MCS12", 4620.0),
    ]
)

# Reference Shannon estimates published next to the MCS rows, Gbps
IEEE_80211AD_SHANNON_GBPS = (1.43, 2.04, 2.40, 2.81, 3.25, 3.74, 4.25, 5.38, 7.90, 8.57, 9.23, 43.48)


def dbm_to_mw(x):
    return np.power(10.0, np.asarray(x, dtype=float) / 10.0) if np.ndim(x) else 10.0 ** (x / 10.0)


def mw_to_dbm(x):
    return 10.0 * np.log10(x) if np.ndim(x) else 10.0 * math.log10(x)


def path_loss_db(d_m, b: LinkBudget = LinkBudget()):
    """Log-distance path loss; separations below ``D_MIN_M`` are clamped."""
    d = np.asarray(d_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    d = np.maximum(d, D_MIN_M)
    loss = b.a_db + 20.0 * math.log10(b.f_ghz) + 10.0 * b.n_exp * np.log10(d)
    return float(loss) if loss.ndim == 0 else loss


def _gain_from_delta(delta, g_max):
    delta = np.asarray(delta, dtype=float)
    with np.errstate(divide="ignore"):
        far = g_max - 12.0 - 15.0 * np.log(np.maximum(delta, 1.0))
    gain = np.where(delta < 1.0, g_max - 12.0 * delta**2, far)
    return float(gain) if gain.ndim == 0 else gain


def pattern_delta(phi_deg, theta_deg, p: AntennaPattern = AntennaPattern()):
    """Normalized off-boresight distance used by the Gaussian reference pattern."""
    phi = np.radians(phi_deg)
    theta = np.radians(theta_deg)
    off_axis = np.degrees(np.arccos(np.clip(np.cos(phi) * np.cos(theta), -1.0, 1.0)))
    # atan(tan(theta)/sin(phi)) with the phi = 0 singularity resolved by atan2
    psi = np.arctan2(np.tan(theta), np.sin(phi))
    scale = np.sqrt((np.cos(psi) / p.phi3_deg) ** 2 + (np.sin(psi) / p.theta3_deg) ** 2)
    delta = np.abs(off_axis * scale)
    return float(delta) if np.ndim(delta) == 0 else delta


def antenna_gain_dbi(phi_deg, theta_deg, p: AntennaPattern = AntennaPattern()):
    return _gain_from_delta(pattern_delta(phi_deg, theta_deg, p), p.g_max_dbi)


def rx_power_dbm(d_m, b: LinkBudget = LinkBudget()):
    """Received power on an aligned link: EIRP - path loss + Rx gain."""
    return b.eirp_dbm - path_loss_db(d_m, b) + b.g_rx_dbi


def noise_dbm(b: LinkBudget = LinkBudget()) -> float:
    return b.noise_density_dbm_hz + 10.0 * math.log10(b.bandwidth_hz) + b.sys_loss_db


def noise_mw(b: LinkBudget = LinkBudget()) -> float:
    return dbm_to_mw(noise_dbm(b))


@dataclass(frozen=True)
class LinkGeometry:
    tx_pos: tuple
    rx_pos: tuple
    tx_boresight: tuple

    def __post_init__(self):
        if np.allclose(self.tx_pos, self.rx_pos):
            raise ValueError("transmitter and receiver are co-located")
        if not math.isclose(float(np.linalg.norm(self.tx_boresight)), 1.0, rel_tol=1e-9):
            raise ValueError("boresight must be a unit vector")


def boresight_angles(boresight, direction):
    """Azimuth/elevation (degrees) of ``direction`` in the frame whose forward axis is ``boresight``.

    Both inputs are (..., 3) arrays; ``boresight`` must be unit length and
    ``direction`` need not be normalized.  The frame's "right" axis is
    ``boresight x z`` (the x axis for a vertical boresight) and "up" completes it.
    """
    bx, by, bz = np.moveaxis(np.asarray(boresight, dtype=float), -1, 0)
    ux, uy, uz = np.moveaxis(np.asarray(direction, dtype=float), -1, 0)
    norm = np.sqrt(ux * ux + uy * uy + uz * uz)
    ux, uy, uz = ux / norm, uy / norm, uz / norm
    # right = boresight x (0, 0, 1) = (by, -bx, 0), normalized
    rn = np.hypot(bx, by)
    vertical = rn <= 1e-12
    safe = np.where(vertical, 1.0, rn)
    rx = np.where(vertical, 1.0, by / safe)
    ry = np.where(vertical, 0.0, -bx / safe)
    # up = right x boresight, with right_z = 0
    upx = ry * bz
    upy = -rx * bz
    upz = rx * by - ry * bx
    f = ux * bx + uy * by + uz * bz
    x = ux * rx + uy * ry
    y = np.clip(ux * upx + uy * upy + uz * upz, -1.0, 1.0)
    return np.degrees(np.arctan2(x, f)), np.degrees(np.arcsin(y))


def interference_mw(
    victim: LinkGeometry,
    interferers: Sequence[LinkGeometry],
    b: LinkBudget = LinkBudget(),
    p: AntennaPattern = AntennaPattern(),
) -> float:
    """Sum of interferer powers landing on the victim receiver, in mW."""
    total = 0.0
    rx = np.asarray(victim.rx_pos, dtype=float)
    for link in interferers:
        if link is victim:
            raise ValueError("victim link listed among its interferers")
        vec = rx - np.asarray(link.tx_pos, dtype=float)
        dist = float(np.linalg.norm(vec))
        if dist == 0.0:
            raise ValueError("interferer co-located with victim receiver")
        phi, theta = boresight_angles(link.tx_boresight, vec)
        gain = antenna_gain_dbi(float(phi), float(theta), p)
        total += dbm_to_mw(gain + b.p_tx_dbm - path_loss_db(dist, b))
    return total


def capacity_bps(rx_mw, interf_mw, noise_mw, bandwidth_hz):
    """Shannon capacity with interference treated as noise."""
    if np.any(np.asarray(noise_mw) <= 0):
        raise ValueError("noise power must be positive")
    sinr = np.asarray(rx_mw, dtype=float) / (np.asarray(noise_mw) + np.asarray(interf_mw))
    cap = bandwidth_hz * np.log2(1.0 + sinr)
    return float(cap) if cap.ndim == 0 else cap


def mcs_rate_mbps(rx_dbm, t: McsTable = IEEE_80211AD_MCS):
    return t.rate_mbps(rx_dbm)


# weights of the service quality function
VIDEO_SLOPE = 0.01
VIDEO_MIDPOINT_MBPS = 1024.0
OTHER_SCALE = 1.0
OTHER_OFFSET = 1.0


def quality(rate_mbps, service) -> float:
    """Sigmoid QoS for video streaming, logarithmic for the other services."""
    rate = np.asarray(rate_mbps, dtype=float)
    video = 1.0 / (1.0 + np.exp(-VIDEO_SLOPE * (rate - VIDEO_MIDPOINT_MBPS)))
    other = np.log(OTHER_SCALE * rate + OTHER_OFFSET)
    q = np.where(np.asarray(service) == ServiceType.VIDEO_STREAMING, video, other)
    return float(q) if q.ndim == 0 else q


def coverage_radius_m(uav_alt_m, ue_alt_m, beamwidth_deg=80.0, formula="cone"):
    """Ground radius of the beam footprint at the UE's altitude.

    ``formula="as-printed"`` keeps the altitude-normalized variant, which is
    dimensionless and only useful for comparison.
    """
    if not 0.0 < beamwidth_deg < 180.0:
        raise ValueError("beamwidth must lie in (0, 180) degrees")
    h_uav = np.asarray(uav_alt_m, dtype=float)
    height = np.maximum(h_uav - np.asarray(ue_alt_m, dtype=float), 0.0)
    half = math.tan(math.radians(beamwidth_deg) / 2.0)
    if formula == "cone":
        r = height * half
    elif formula == "as-printed":
        r = np.where(h_uav > 0, height / np.where(h_uav > 0, h_uav, 1.0), 0.0) * half
    else:
        raise ValueError(f"unknown coverage formula {formula!r}")
    return float(r) if np.ndim(r) == 0 else r
