"""Rotary-wing propulsion power and the battery energy queue."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

GRAVITY = 9.8
WH_TO_J = 3600.0
# 5,870 mAh at 15.2 V
BATTERY_WH = 89.224


@dataclass(frozen=True)
class UavPowerParams:
    delta: float = 0.012
    rho: float = 1.225
    s_solidity: float = 0.05
    a_disc: float = 0.503
    omega: float = 300.0
    r_rotor: float = 0.4
    k_induced: float = 0.1
    weight_n: float = 1.375 * GRAVITY
    u_tip: float = 120.0
    v0: float = 4.03
    d0: float = 0.6

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")


def blade_profile_power_w(p: UavPowerParams) -> float:
    return p.delta / 8.0 * p.rho * p.s_solidity * p.a_disc * p.omega**3 * p.r_rotor**3


def induced_power_w(p: UavPowerParams) -> float:
    return (1.0 + p.k_induced) * p.weight_n**1.5 / math.sqrt(2.0 * p.rho * p.a_disc)


def hover_power_w(p: UavPowerParams = UavPowerParams()) -> float:
    return blade_profile_power_w(p) + induced_power_w(p)


def cruise_power_w(v_mps: float, p: UavPowerParams = UavPowerParams(), formula: str = "standard") -> float:
    """Forward-flight power at speed ``v_mps``.

    ``formula="standard"`` divides the blade-profile speed term by the squared
    tip speed; ``"as-printed"`` divides by the tip speed itself.
    """
    if v_mps < 0:
        raise ValueError("speed must be non-negative")
    if formula == "standard":
        tip = p.u_tip**2
    elif formula == "as-printed":
        tip = p.u_tip
    else:
        raise ValueError(f"unknown cruise formula {formula!r}")
    v2 = v_mps * v_mps
    profile = blade_profile_power_w(p) * (1.0 + 3.0 * v2 / tip)
    induced = induced_power_w(p) * (math.sqrt(1.0 + v2 * v2 / (4.0 * p.v0**4)) - v2 / (2.0 * p.v0**2)) ** 0.5
    parasite = 0.5 * p.d0 * p.rho * p.s_solidity * p.a_disc * v_mps**3
    return profile + induced + parasite


@dataclass(frozen=True)
class EnergyQueue:
    q_joules: float
    q_init_joules: float = BATTERY_WH * WH_TO_J

    def __post_init__(self):
        if not 0.0 <= self.q_joules <= self.q_init_joules:
            raise ValueError("residual energy must lie in [0, capacity]")

    @classmethod
    def full(cls, capacity_j: float = BATTERY_WH * WH_TO_J) -> "EnergyQueue":
        return cls(capacity_j, capacity_j)

    @property
    def fraction(self) -> float:
        return self.q_joules / self.q_init_joules

    @property
    def empty(self) -> bool:
        return self.q_joules <= 0.0


def queue_step(q: EnergyQueue, power_w: float, dt_s: float) -> EnergyQueue:
    """Discharge by ``power_w * dt_s``, floored at zero."""
    if power_w < 0 or dt_s <= 0:
        raise ValueError("power must be >= 0 and dt > 0")
    return replace(q, q_joules=max(0.0, q.q_joules - power_w * dt_s))
