import math

import pytest

from uavbs.energy import (
    EnergyQueue,
    UavPowerParams,
    blade_profile_power_w,
    cruise_power_w,
    hover_power_w,
    induced_power_w,
    queue_step,
)

# Term-by-term recomputation with the default rotor parameters:
#   P0 = 0.012/8 * 1.225 * 0.05 * 0.503 * 300^3 * 0.4^3            = 79.856 W
#   Pi = 1.1 * 13.475^1.5 / sqrt(2 * 1.225 * 0.503)                = 49.013 W
BLADE_W = 0.012 / 8 * 1.225 * 0.05 * 0.503 * 300**3 * 0.4**3
INDUCED_W = 1.1 * 13.475**1.5 / math.sqrt(2 * 1.225 * 0.503)
CAPACITY_J = 89.224 * 3600


def test_power_terms():
    p = UavPowerParams()
    assert p.weight_n == pytest.approx(13.475)
    assert blade_profile_power_w(p) == pytest.approx(BLADE_W, rel=1e-12)
    assert induced_power_w(p) == pytest.approx(INDUCED_W, rel=1e-12)
    assert hover_power_w(p) == pytest.approx(128.87, abs=0.01)


def test_cruise_power():
    v = 20.0
    profile = BLADE_W * (1 + 3 * v**2 / 120.0**2)
    induced = INDUCED_W * math.sqrt(math.sqrt(1 + v**4 / (4 * 4.03**4)) - v**2 / (2 * 4.03**2))
    parasite = 0.5 * 0.6 * 1.225 * 0.05 * 0.503 * v**3
    assert cruise_power_w(v) == pytest.approx(profile + induced + parasite, rel=1e-12)
    assert cruise_power_w(v) == pytest.approx(170.3, abs=0.1)
    assert cruise_power_w(0.0) == pytest.approx(hover_power_w())
    assert cruise_power_w(v, formula="as-printed") > cruise_power_w(v)
    with pytest.raises(ValueError):
        cruise_power_w(-1.0)
    with pytest.raises(ValueError):
        cruise_power_w(1.0, formula="other")


def test_params_validated():
    with pytest.raises(ValueError):
        UavPowerParams(rho=0.0)


def test_queue_examples():
    q = EnergyQueue.full()
    assert q.q_joules == pytest.approx(CAPACITY_J)
    assert q.fraction == 1.0
    q = queue_step(q, 100.0, 45.0)
    assert q.q_joules == pytest.approx(CAPACITY_J - 4500.0)
    assert queue_step(EnergyQueue(10.0), 100.0, 45.0).q_joules == 0.0
    assert queue_step(EnergyQueue(10.0), 100.0, 45.0).empty
    with pytest.raises(ValueError):
        EnergyQueue(-1.0)
    with pytest.raises(ValueError):
        queue_step(q, -1.0, 45.0)


def test_hover_episode_energy():
    q = EnergyQueue.full()
    for _ in range(40):
        q = queue_step(q, hover_power_w(), 45.0)
    used = CAPACITY_J - q.q_joules
    assert used == pytest.approx(40 * 45 * 128.87, rel=1e-4)
    assert q.q_joules >= 321.2e3 - 232.5e3
