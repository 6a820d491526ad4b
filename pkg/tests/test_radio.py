import math

import numpy as np
import pytest

from uavbs import radio
from uavbs.radio import (
    IEEE_80211AD_MCS,
    AntennaPattern,
    LinkBudget,
    LinkGeometry,
    McsRow,
    McsTable,
    ServiceType,
)

# Hand computations from the stated constants:
#   32.5 + 20*log10(60) = 32.5 + 35.5630 = 68.0630 dB at 1 m, +20 dB per decade
#   noise = -174 + 10*log10(2.16e9) + 15 = -174 + 93.34454 + 15 = -65.65546 dBm
#   aligned rx at 1 m = 24 + 19 - 68.063 + 3 = -22.063 dBm
PL_1M, PL_10M, PL_100M = 68.063, 88.063, 108.063
NOISE_DBM = -65.65546


def test_path_loss_oracles():
    assert radio.path_loss_db(1.0) == pytest.approx(PL_1M, abs=0.01)
    assert radio.path_loss_db(10.0) == pytest.approx(PL_10M, abs=0.01)
    assert radio.path_loss_db(100.0) == pytest.approx(PL_100M, abs=0.01)


def test_path_loss_vectorized_and_clamped():
    d = np.array([0.5, 1.0, 1000.0])
    pl = radio.path_loss_db(d)
    assert pl.shape == (3,)
    assert pl[0] == pl[1]
    with pytest.raises(ValueError):
        radio.path_loss_db(0.0)
    with pytest.raises(ValueError):
        radio.path_loss_db(-3.0)


def test_noise_floor():
    assert radio.noise_dbm() == pytest.approx(NOISE_DBM, abs=0.001)
    assert radio.mw_to_dbm(radio.noise_mw()) == pytest.approx(radio.noise_dbm(), abs=1e-9)


def test_rx_power_aligned():
    assert radio.rx_power_dbm(1.0) == pytest.approx(-22.063, abs=0.01)
    assert radio.rx_power_dbm(100.0) == pytest.approx(-62.063, abs=0.01)


def test_eirp_cap_enforced():
    assert LinkBudget().eirp_dbm == 43.0
    with pytest.raises(ValueError):
        LinkBudget(p_tx_dbm=25.0)
    with pytest.raises(ValueError):
        LinkBudget(bandwidth_hz=0.0)


def test_dbm_mw_inverse():
    x = np.linspace(-120.0, 50.0, 1001)
    back = radio.mw_to_dbm(radio.dbm_to_mw(x))
    assert np.max(np.abs(back - x) / np.maximum(np.abs(x), 1.0)) < 1e-12
    assert radio.dbm_to_mw(0.0) == 1.0
    assert radio.dbm_to_mw(30.0) == pytest.approx(1000.0)


def test_antenna_pattern_values():
    p = AntennaPattern()
    assert radio.antenna_gain_dbi(0.0, 0.0, p) == pytest.approx(19.0)
    # delta = 1 at 10 degrees off-axis in azimuth: g_max - 12
    assert radio.pattern_delta(10.0, 0.0, p) == pytest.approx(1.0)
    assert radio.antenna_gain_dbi(10.0, 0.0, p) == pytest.approx(7.0)
    # delta = e: g_max - 12 - 15 ln e = g_max - 27
    assert radio.antenna_gain_dbi(10.0 * math.e, 0.0, p) == pytest.approx(19.0 - 27.0)
    # elevation only: same beamwidth, same delta
    assert radio.pattern_delta(0.0, 10.0, p) == pytest.approx(1.0)


def test_antenna_gain_symmetric_and_decreasing():
    phis = np.linspace(0.0, 60.0, 61)
    g = radio.antenna_gain_dbi(phis, np.zeros_like(phis))
    assert np.all(np.diff(g) <= 1e-12)
    assert np.allclose(radio.antenna_gain_dbi(-phis, 0.0 * phis), g)


def test_boresight_angles_frame():
    down = np.array([0.0, 0.0, -1.0])
    phi, theta = radio.boresight_angles(down, np.array([[1.0, 0.0, -1.0], [0.0, 1.0, -1.0], [0.0, 0.0, -5.0]]))
    assert np.allclose(np.abs(phi), [45.0, 0.0, 0.0])
    assert np.allclose(np.abs(theta), [0.0, 45.0, 0.0])


def test_capacity_oracle():
    # -62.063 dBm over -65.6555 dBm noise: SNR 3.5925 dB = 2.2866; W*log2(3.2866)
    rx = radio.dbm_to_mw(-62.063)
    cap = radio.capacity_bps(rx, 0.0, radio.noise_mw(), 2.16e9)
    snr = 10 ** ((-62.063 - NOISE_DBM) / 10)
    assert cap == pytest.approx(2.16e9 * math.log2(1 + snr), rel=1e-6)
    assert cap == pytest.approx(3.709e9, rel=2e-3)
    with pytest.raises(ValueError):
        radio.capacity_bps(rx, 0.0, 0.0, 2.16e9)


def test_capacity_decreases_with_interference():
    rx = radio.dbm_to_mw(-60.0)
    n = radio.noise_mw()
    caps = [radio.capacity_bps(rx, i, n, 2.16e9) for i in (0.0, n, 10 * n)]
    assert caps[0] > caps[1] > caps[2] > 0


def test_mcs_examples():
    assert radio.mcs_rate_mbps(-78.0) == 27.5
    assert radio.mcs_rate_mbps(-78.01) == 0.0
    assert radio.mcs_rate_mbps(-40.0) == 4620.0
    assert radio.mcs_rate_mbps(-63.5) == 1155.0
    r = radio.mcs_rate_mbps(np.array([-100.0, -66.0, -53.0]))
    assert list(r) == [0.0, 770.0, 4620.0]


def test_mcs_table_validation_and_roundtrip(tmp_path):
    with pytest.raises(ValueError):
        McsTable([])
    with pytest.raises(ValueError):
        McsTable([McsRow(-60.0, "a", 10.0), McsRow(-70.0, "b", 20.0)])
    path = tmp_path / "mcs.txt"
    IEEE_80211AD_MCS.to_file(path)
    assert McsTable.from_file(path) == IEEE_80211AD_MCS
    bad = tmp_path / "bad.txt"
    bad.write_text("# header\n-70 MCS1\n")
    with pytest.raises(ValueError, match="bad.txt:2"):
        McsTable.from_file(bad)


def test_mcs_rate_never_exceeds_shannon():
    n = radio.noise_mw()
    for row in IEEE_80211AD_MCS.rows:
        cap = radio.capacity_bps(radio.dbm_to_mw(row.sensitivity_dbm), 0.0, n, 2.16e9) / 1e6
        assert row.rate_mbps <= cap


def test_quality_examples():
    assert radio.quality(1024.0, ServiceType.VIDEO_STREAMING) == pytest.approx(0.5)
    assert radio.quality(0.0, ServiceType.WEB_SURFING) == 0.0
    assert radio.quality(99.0, ServiceType.VOIP) == pytest.approx(math.log(100.0))
    q = radio.quality(np.array([1024.0, 99.0]), np.array([0, 1]))
    assert np.allclose(q, [0.5, math.log(100.0)])


def test_coverage_radius():
    # 2000 m above ground, 40 degree half angle: 2000 * tan(40 deg) = 1678.2 m
    assert radio.coverage_radius_m(2000.0, 0.0) == pytest.approx(1678.2, abs=0.1)
    assert radio.coverage_radius_m(100.0, 200.0) == 0.0
    assert 0 < radio.coverage_radius_m(2000.0, 0.0, formula="as-printed") < 1
    with pytest.raises(ValueError):
        radio.coverage_radius_m(2000.0, 0.0, beamwidth_deg=180.0)


def test_interference_single_link():
    b = LinkBudget()
    victim = LinkGeometry((0.0, 0.0, 100.0), (0.0, 0.0, 0.0), (0.0, 0.0, -1.0))
    # interferer 100 m above the victim receiver, beam pointing straight at it
    hit = LinkGeometry((0.0, 0.0, 100.0), (0.0, 0.0, 0.0), (0.0, 0.0, -1.0))
    other = LinkGeometry((50.0, 0.0, 100.0), (50.0, 0.0, 0.0), (0.0, 0.0, -1.0))
    assert radio.interference_mw(victim, []) == 0.0
    got = radio.interference_mw(victim, [hit])
    assert radio.mw_to_dbm(got) == pytest.approx(19.0 + 24.0 - radio.path_loss_db(100.0, b))
    # off-boresight interferer is weaker
    assert radio.interference_mw(victim, [other]) < got
    with pytest.raises(ValueError):
        radio.interference_mw(victim, [victim])


def test_link_geometry_validation():
    with pytest.raises(ValueError):
        LinkGeometry((0, 0, 0), (0, 0, 0), (0, 0, -1))
    with pytest.raises(ValueError):
        LinkGeometry((0, 0, 10), (0, 0, 0), (0, 0, -2))
