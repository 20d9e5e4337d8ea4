import math
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thzlink import txchain
from thzlink.quantities import GHZ, K_B, DomainError
from thzlink.txchain import StageParams

CMOS = txchain.get_technology("cmos")
SIGE = txchain.get_technology("SiGe")

TABLE = {
    # (technology, stage): per band (nf_db, gain_db) for 30-100, 100-200, 200-500 GHz
    ("CMOS", "mixer_plus_if"): [(16.0, -2.0), (14.5, -5.0), (18.0, 3.0)],
    ("CMOS", "power_amplifier"): [(7.8, 15.4), (7.9, 22.5), (12.7, 28.0)],
    ("SiGe", "mixer_plus_if"): [(11.2, 15.0), (11.5, 18.0), (13.2, 20.6)],
    ("SiGe", "power_amplifier"): [(7.2, 17.0), (9.0, 20.0), (14.0, 23.0)],
}
ANCHORS_GHZ = (65.0, 150.0, 350.0)


def _friis_db(nf1, g1, nf2):
    f1, f2, g = 10 ** (nf1 / 10), 10 ** (nf2 / 10), 10 ** (g1 / 10)
    return 10 * math.log10(f1 + (f2 - 1) / g)


@pytest.mark.parametrize("key", list(TABLE))
def test_anchor_frequencies_reproduce_table(key):
    prof = txchain.get_technology(key[0])
    for f, (nf, g) in zip(ANCHORS_GHZ, TABLE[key]):
        got_nf, got_g = txchain.interpolate_stage(prof, key[1], f * GHZ)
        assert got_nf == pytest.approx(nf, abs=1e-12)
        assert got_g == pytest.approx(g, abs=1e-12)


def test_cmos_low_band_hand_friis():
    # 10^1.6 + (10^0.78 - 1) / 10^-0.2 = 47.776 -> 16.792 dB
    assert txchain.cascaded_tx_noise_figure(CMOS, 65 * GHZ) == pytest.approx(
        16.7921, abs=1e-4)
    assert txchain.cascaded_tx_noise_figure(CMOS, 65 * GHZ) == pytest.approx(
        _friis_db(16.0, -2.0, 7.8), abs=1e-12)


@pytest.mark.parametrize("prof", [CMOS, SIGE], ids=lambda p: p.name)
@pytest.mark.parametrize("f_ghz", [30.0, 47.0, 65.0, 99.0, 123.0, 250.0, 420.0, 500.0])
def test_vectorised_cascade_matches_stagewise_friis(prof, f_ghz):
    stages = txchain.stage_params(prof, f_ghz * GHZ)
    expected = 10 * math.log10(txchain.cascaded_noise_factor(stages))
    assert txchain.cascaded_tx_noise_figure(prof, f_ghz * GHZ) == pytest.approx(expected, rel=1e-13)


def test_interpolation_is_linear_between_anchors():
    nf_mid, g_mid = txchain.interpolate_stage(CMOS, "mixer_plus_if", 107.5 * GHZ)
    assert nf_mid == pytest.approx((16.0 + 14.5) / 2)
    assert g_mid == pytest.approx((-2.0 - 5.0) / 2)


def test_end_segments_extrapolate_linearly():
    nf30, _ = txchain.interpolate_stage(CMOS, "mixer_plus_if", 30 * GHZ)
    slope = (14.5 - 16.0) / (150.0 - 65.0)
    assert nf30 == pytest.approx(16.0 + slope * (30.0 - 65.0), abs=1e-12)


@pytest.mark.parametrize("prof,lo,hi", [(CMOS, 17.0, 20.8), (SIGE, 11.0, 14.5)],
                         ids=["cmos", "sige"])
def test_noise_figure_endpoints(prof, lo, hi):
    assert txchain.cascaded_tx_noise_figure(prof, 30 * GHZ) == pytest.approx(lo, abs=0.5)
    assert txchain.cascaded_tx_noise_figure(prof, 500 * GHZ) == pytest.approx(hi, abs=0.5)


def test_pinned_endpoints():
    assert txchain.cascaded_tx_noise_figure(CMOS, 30 * GHZ) == pytest.approx(17.1450003376, abs=1e-9)
    assert txchain.cascaded_tx_noise_figure(CMOS, 500 * GHZ) == pytest.approx(20.8178866621, abs=1e-9)
    assert txchain.cascaded_tx_noise_figure(SIGE, 30 * GHZ) == pytest.approx(11.124983727, abs=1e-9)
    assert txchain.cascaded_tx_noise_figure(SIGE, 500 * GHZ) == pytest.approx(14.525167295, abs=1e-9)


stage = st.builds(StageParams,
                  st.floats(1.0, 1e4),
                  st.floats(1e-3, 1e4))


@given(stage)
def test_single_stage_identity(s):
    assert txchain.cascaded_noise_factor([s]) == s.noise_factor


@given(st.lists(stage, min_size=1, max_size=5), stage)
def test_appending_a_stage_never_lowers_noise(stages, extra):
    base = txchain.cascaded_noise_factor(stages)
    assert txchain.cascaded_noise_factor(stages + [extra]) >= base * (1 - 1e-12)


@given(stage, stage, st.floats(1.01, 100.0))
def test_more_first_stage_gain_lowers_noise(s1, s2, k):
    louder = StageParams(s1.noise_factor, s1.gain * k)
    assert txchain.cascaded_noise_factor([louder, s2]) <= txchain.cascaded_noise_factor([s1, s2])


@given(stage, stage, st.floats(1.0, 10.0))
def test_noisier_stage_raises_cascade(s1, s2, k):
    worse = StageParams(s2.noise_factor * k, s2.gain)
    assert txchain.cascaded_noise_factor([s1, worse]) >= txchain.cascaded_noise_factor([s1, s2])


def test_cascade_needs_stages():
    with pytest.raises(DomainError):
        txchain.cascaded_noise_factor([])


def test_stage_params_validation():
    with pytest.raises(DomainError):
        StageParams(0.5, 1.0)
    with pytest.raises(DomainError):
        StageParams(2.0, 0.0)


def test_psat_models():
    assert txchain.tx_saturated_power_dbm(CMOS, 30 * GHZ) == pytest.approx(
        53.902 - 7.815 * math.log(30.0))
    assert txchain.tx_saturated_power_dbm(SIGE, 30 * GHZ) == pytest.approx(25.0, abs=1e-12)
    assert txchain.tx_saturated_power_dbm(SIGE, 300 * GHZ) == pytest.approx(6.0, abs=1e-12)
    f = np.linspace(30, 500, 20) * GHZ
    assert np.all(np.diff(txchain.tx_saturated_power_dbm(CMOS, f)) < 0)


def test_log_power_fit_passes_through_anchors():
    a, b = txchain.fit_log_power_model((10.0, 30.0), (100.0, 10.0))
    assert a - b * math.log(10.0) == pytest.approx(30.0)
    assert a - b * math.log(100.0) == pytest.approx(10.0)


def test_noise_models():
    f, t = 300 * GHZ, 290.0
    nf = txchain.cascaded_tx_noise_figure(CMOS, f)
    g = txchain.chain_gain(CMOS, f)
    eq2 = txchain.tx_noise_psd(CMOS, f, t, "paper_eq2")
    out = txchain.tx_noise_psd(CMOS, f, t, "output_referred")
    assert eq2 == pytest.approx(K_B * t * 10 ** (nf / 10), rel=1e-13)
    assert out / eq2 == pytest.approx(10 ** (g / 10), rel=1e-12)
    assert txchain.tx_noise_psd(CMOS, f, t) == out
    assert txchain.tx_noise_psd_from_nf(nf, t) == pytest.approx(eq2, rel=1e-13)
    with pytest.raises(DomainError):
        txchain.tx_noise_psd(CMOS, f, t, "input_referred")
    with pytest.raises(DomainError):
        txchain.tx_noise_psd(CMOS, f, 0.0)


def test_chain_gain_sums_stages():
    g_mix = txchain.interpolate_stage(SIGE, "mixer_plus_if", 150 * GHZ)[1]
    g_pa = txchain.interpolate_stage(SIGE, "power_amplifier", 150 * GHZ)[1]
    assert txchain.chain_gain(SIGE, 150 * GHZ) == pytest.approx(g_mix + g_pa)


@pytest.mark.parametrize("f", [29 * GHZ, 501 * GHZ])
def test_range_enforced(f):
    with pytest.raises(DomainError):
        txchain.cascaded_tx_noise_figure(CMOS, f)
    with pytest.raises(DomainError):
        txchain.tx_saturated_power_dbm(CMOS, f)


def test_extrapolation_on_request():
    nf = txchain.cascaded_tx_noise_figure(CMOS, 530 * GHZ, check_range=False)
    assert math.isfinite(nf)


def test_lookup():
    assert txchain.get_technology("CMOS") is CMOS
    with pytest.raises(DomainError):
        txchain.get_technology("GaN")


def _write_components(path, edit=None):
    src = resources.files("thzlink") / "data" / "components.csv"
    text = src.read_text(encoding="utf-8")
    if edit:
        text = edit(text)
    path.write_text(text, encoding="utf-8")
    return path


def test_custom_component_table(tmp_path):
    path = _write_components(
        tmp_path / "c.csv",
        lambda t: t.replace("CMOS,mixer_plus_if,30,100,16.0,", "CMOS,mixer_plus_if,30,100,10.0,"))
    prof = txchain.get_technology("cmos", path)
    assert txchain.interpolate_stage(prof, "mixer_plus_if", 65 * GHZ)[0] == pytest.approx(10.0)
    assert txchain.cascaded_tx_noise_figure(prof, 65 * GHZ) < txchain.cascaded_tx_noise_figure(
        CMOS, 65 * GHZ)


@pytest.mark.parametrize("edit", [
    lambda t: t.replace("provenance_note", "note"),
    lambda t: t.replace("7.8,15.4", "abc,15.4"),
    lambda t: t.replace("CMOS,mixer_plus_if,30,100,16.0", "CMOS,mixer_plus_if,30,100,0.0"),
    lambda t: t + "GaN,mixer_plus_if,30,100,5,5,x\n",
    lambda t: "\n".join(ln for ln in t.splitlines() if "SiGe,power_amplifier" not in ln) + "\n",
])
def test_bad_component_tables(tmp_path, edit):
    path = _write_components(tmp_path / "c.csv", edit)
    with pytest.raises(DomainError):
        txchain.load_components(path)
