import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thzlink import cli, report
from thzlink.report import ConfigError, ReportEnvelope

FAST_SHORT = ["--f-start", "100", "--f-stop", "300", "--f-step", "100",
              "--d-num", "3", "--points", "101"]


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- report ---------------------------------------------------------------------

@pytest.mark.parametrize("value,text", [
    (1.0, "1"), (0.1 + 0.2, "0.3"), (-0.0, "0"), (123456789.123456789, "123456789.123"),
    (1.380649e-23, "1.380649e-23"), (math.inf, "inf"), (-math.inf, "-inf"), (math.nan, "nan"),
    (True, "1"), (7, "7"),
])
def test_format_number(value, text):
    assert report.format_number(value) == text


def test_format_is_locale_free():
    assert "," not in report.format_number(1234567.5)


cell = st.one_of(
    st.floats(allow_nan=False, allow_infinity=False, width=64),
    st.integers(-10**6, 10**6),
    st.text(alphabet="abcdefghij_", min_size=1, max_size=8),
)


@given(st.lists(st.lists(cell, min_size=3, max_size=3), max_size=6))
def test_envelope_json_round_trip(rows):
    env = ReportEnvelope(config={"cond": "hot", "points": 1001}, tx_noise_model="output_referred",
                         payload={"t": report.make_table(["a_db", "b_m", "c"], rows)})
    assert ReportEnvelope.from_json(env.to_json()) == env


@given(st.lists(st.floats(-1e30, 1e30, allow_nan=False), min_size=1, max_size=5))
def test_csv_and_json_carry_same_numbers(values):
    env = ReportEnvelope(config={}, tx_noise_model="paper_eq2",
                         payload={"t": report.make_table(["x_db"], [[v] for v in values])})
    from_csv = report.read_csv_table(env.csv_text("t"))["rows"]
    from_json = json.loads(env.to_json())["payload"]["t"]["rows"]
    assert [float(r[0]) for r in from_csv] == [float(r[0]) for r in from_json]


def test_make_table_checks_width():
    with pytest.raises(ValueError):
        report.make_table(["a", "b"], [[1]])


def test_csv_header_echoes_provenance():
    env = ReportEnvelope(config={"cond": "hot"}, tx_noise_model="paper_eq2",
                         payload={"t": report.make_table(["x_db"], [[1.5]])})
    lines = env.csv_text("t").splitlines()
    assert lines[0].startswith("# tool: thzlink ")
    assert lines[2] == "# tx_noise_model: paper_eq2"
    assert json.loads(lines[3].removeprefix("# config: ")) == {"cond": "hot"}
    consts = json.loads(lines[4].removeprefix("# constants: "))
    assert consts["dominance_ratio_report_db"] == -5.9
    assert consts["dominance_ratio_db"] == pytest.approx(-5.8683, abs=1e-4)
    assert lines[5:] == ["x_db", "1.5"]


def test_parse_config_formats():
    kv = report.parse_config_text("# sweep\ncond = hot   # inline\n\npoints=101\n")
    assert kv == {"cond": "hot", "points": "101"}
    assert report.parse_config_text('{"cond": "hot", "points": 101}') == {"cond": "hot", "points": 101}


@pytest.mark.parametrize("text", [
    "cond = hot\ncond = moderate\n",
    "just a line\n",
    " = 3\n",
    '{"cond": ',
    '{"nested": {"a": 1}}',
])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        report.parse_config_text(text)


@pytest.mark.parametrize("key,value,kind,expected", [
    ("points", "101", int, 101), ("gain_dbi", "40", float, 40.0), ("cond", 3, str, "3"),
    ("points", 101.0, int, 101), ("x", None, float, None),
])
def test_coerce(key, value, kind, expected):
    assert report.coerce(key, value, kind) == expected


@pytest.mark.parametrize("value,kind", [("abc", float), ("1.5", int), (1.5, int), ("nan", float),
                                        (True, float)])
def test_coerce_rejects(value, kind):
    with pytest.raises(ConfigError):
        report.coerce("k", value, kind)


def test_csv_paths():
    from pathlib import Path
    assert report.csv_paths(Path("a/out.csv"), ["t"]) == {"t": Path("a/out.csv")}
    assert report.csv_paths(Path("a/out.csv"), ["t", "u"])["u"] == Path("a/out_u.csv")


# --- command line ------------------------------------------------------------------

def test_absorption_single_row(capsys):
    code, out, _ = run_cli(capsys, "absorption", "--f-start", "183.31", "--f-stop", "183.31",
                           "--format", "json")
    assert code == 0
    table = json.loads(out)["payload"]["absorption"]
    assert table["columns"] == list(cli.ABSORPTION_COLUMNS)
    assert len(table["rows"]) == 1
    row = dict(zip(table["columns"], table["rows"][0]))
    assert row["a_abs_1km_db"] > 100.0
    assert row["total_1km_db"] == pytest.approx(row["a_abs_1km_db"] + row["fspl_1km_db"], rel=1e-11)


def test_absorption_cold_dry_below_hot(capsys):
    peaks = {}
    for cond in ("hot", "cold_dry"):
        _, out, _ = run_cli(capsys, "absorption", "--cond", cond, "--f-start", "183.31",
                            "--f-stop", "183.31", "--format", "json")
        peaks[cond] = json.loads(out)["payload"]["absorption"]["rows"][0][1]
    assert peaks["cold_dry"] < peaks["hot"]


def test_absorption_rejects_bad_range(capsys):
    code, _, err = run_cli(capsys, "absorption", "--f-start", "0.1", "--f-stop", "10")
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("thzlink: error: DomainError:")


def test_txnf_endpoints(capsys, tmp_path):
    out = tmp_path / "nf.csv"
    assert cli.main(["txnf", "--f-step", "470", "--out", str(out)]) == 0
    table = report.read_csv_table(out.read_text())
    rows = {(r[0], r[1]): r for r in table["rows"]}
    assert rows[("CMOS", 30)][2] == pytest.approx(17.0, abs=0.5)
    assert rows[("CMOS", 500)][2] == pytest.approx(20.8, abs=0.5)
    assert rows[("SiGe", 30)][2] == pytest.approx(11.0, abs=0.5)
    assert rows[("SiGe", 500)][2] == pytest.approx(14.5, abs=0.5)
    code, _, _ = run_cli(capsys, "txnf", "--f-start", "20", "--f-stop", "40")
    assert code == 2


def test_txnf_single_technology_and_components(capsys, tmp_path):
    from importlib import resources
    src = (resources.files("thzlink") / "data" / "components.csv").read_text()
    custom = tmp_path / "components.csv"
    custom.write_text(src.replace("SiGe,mixer_plus_if,30,100,11.2", "SiGe,mixer_plus_if,30,100,5.0"))
    _, base, _ = run_cli(capsys, "txnf", "--tech", "sige", "--f-start", "65", "--f-stop", "65",
                         "--format", "json")
    _, edited, _ = run_cli(capsys, "txnf", "--tech", "sige", "--f-start", "65", "--f-stop", "65",
                           "--components", str(custom), "--format", "json")
    base_rows = json.loads(base)["payload"]["txnf"]["rows"]
    edited_rows = json.loads(edited)["payload"]["txnf"]["rows"]
    assert len(base_rows) == 1 and base_rows[0][0] == "SiGe"
    assert edited_rows[0][2] < base_rows[0][2]


def test_casestudy_short_files(tmp_path):
    out = tmp_path / "short.csv"
    assert cli.main(["casestudy", "--preset", "short", "--out", str(out), *FAST_SHORT]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["short_distance_300ghz.csv", "short_frequency_10mm.csv",
                     "short_frequency_1mm.csv", "short_table_v.csv"]
    dist = report.read_csv_table((tmp_path / "short_distance_300ghz.csv").read_text())
    assert dist["columns"][:4] == ["distance_m", "snr_thermal_only_db", "snr_baseline_db",
                                   "snr_baseline_plus_tx_db"]
    assert len(dist["rows"]) == 3


def test_casestudy_medium_and_long(capsys):
    for preset, table in (("medium", "frequency_100m"), ("long", "frequency_1000m")):
        code, out, _ = run_cli(capsys, "casestudy", "--preset", preset, "--f-start", "183",
                               "--f-stop", "183", "--points", "11", "--format", "json")
        assert code == 0
        assert list(json.loads(out)["payload"]) == [table]


def test_casestudy_requires_preset(capsys):
    code, _, err = run_cli(capsys, "casestudy")
    assert code == 2 and "preset" in err


def test_dominance_report(capsys):
    code, out, _ = run_cli(capsys, "dominance", "--f-start", "100", "--f-stop", "300",
                           "--f-step", "100", "--points", "11", "--format", "json")
    assert code == 0
    env = json.loads(out)
    assert env["constants"]["dominance_ratio_report_db"] == -5.9
    assert env["constants"]["dominance_ratio_db"] == pytest.approx(-5.8708, abs=0.003)
    tiers = env["payload"]["tiers"]
    assert [r[0] for r in tiers["rows"]] == [1, 3, 5]
    assert [r[3] for r in tiers["rows"]] == [-5.9, 0, 3.4]
    assert [r[4] for r in tiers["rows"]] == ["onset", "noise_doubled", "architectural"]
    dom = env["payload"]["dominance"]
    assert len(dom["rows"]) == 3
    for r in dom["rows"]:
        row = dict(zip(dom["columns"], r))
        assert row["tx_dominated"] == int(row["path_loss_db"] < row["threshold_path_loss_db"])


def test_dominance_grid(capsys):
    code, out, _ = run_cli(capsys, "dominance", "--axis1", "nf_db_override:10:20:3",
                           "--axis2", "frequency:100:300:2", "--format", "json")
    assert code == 0
    grid = json.loads(out)["payload"]["grid"]
    assert grid["columns"] == ["nf_db", "f_ghz", "degradation_db", "tier"]
    assert len(grid["rows"]) == 6


@pytest.mark.parametrize("axes", [
    ("nf_db_override:10:20:0", "total_pathloss_db_override:50:120:3"),
    ("nf_db_override:10:20", "total_pathloss_db_override:50:120:3"),
    ("wavelength:1:2:3", "distance:1:2:3"),
])
def test_dominance_grid_rejections(capsys, axes):
    code, _, err = run_cli(capsys, "dominance", "--axis1", axes[0], "--axis2", axes[1])
    assert code == 2 and err.count("\n") == 1


def test_sweep_distance(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--axis", "distance", "--d-start", "0.001",
                           "--d-stop", "0.1", "--d-num", "3", "--points", "11", "--format", "json")
    assert code == 0
    table = json.loads(out)["payload"]["sweep_distance"]
    assert [r[0] for r in table["rows"]] == [0.001, 0.01, 0.1]
    code, _, _ = run_cli(capsys, "sweep", "--axis", "time")
    assert code == 2


def test_sensitivity_tables(capsys):
    code, out, _ = run_cli(capsys, "sensitivity", "--f-start", "200", "--f-stop", "200",
                           "--points", "11", "--format", "json")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert set(payload) == {"hot", "moderate", "cold_dry"}


def test_config_file_layering(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("cond = moderate\nf_start_ghz = 100\nf_stop_ghz = 100\n")
    _, out, _ = run_cli(capsys, "absorption", "--config", str(cfg), "--cond", "cold_dry",
                        "--format", "json")
    config = json.loads(out)["config"]
    assert config["cond"] == "cold_dry"
    assert config["f_start_ghz"] == 100.0


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("cond = hot\nfrequncy_ghz = 100\n")
    code, _, err = run_cli(capsys, "absorption", "--config", str(cfg))
    assert code == 2
    assert err == "thzlink: error: ConfigError: unknown config key(s) for absorption: frequncy_ghz\n"


def test_bad_flag_is_single_line_error(capsys):
    code, _, err = run_cli(capsys, "absorption", "--frequency", "3")
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("thzlink: error: ConfigError:")


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run_cli(capsys, "txnf", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2 and "not writable" in err


def test_conditions_file(tmp_path, capsys):
    cond = tmp_path / "desert.cond"
    cond.write_text("temperature_k = 318\npressure_pa = 100000\nwater_vapor_density_g_m3 = 2\n")
    code, out, _ = run_cli(capsys, "absorption", "--cond", str(cond), "--f-start", "183.31",
                           "--f-stop", "183.31", "--format", "json")
    assert code == 0
    bad = tmp_path / "bad.cond"
    bad.write_text("temperature_k = 318\n")
    code, _, err = run_cli(capsys, "absorption", "--cond", str(bad))
    assert code == 2 and "missing" in err
    code, _, _ = run_cli(capsys, "absorption", "--cond", "tropical")
    assert code == 2


def test_tx_power_flag(capsys):
    def snr(*extra):
        _, out, _ = run_cli(capsys, "sweep", "--freq", "300", "--axis", "distance",
                            "--d-start", "1", "--d-stop", "1", "--d-num", "1", "--points", "11",
                            "--format", "json", *extra)
        return json.loads(out)["payload"]["sweep_distance"]["rows"][0][2]

    assert snr("--tx-power", "10") == pytest.approx(snr() + 10.0, abs=1e-9)
    assert snr("--tx-power", "psat") > snr()
    code, _, _ = run_cli(capsys, "sweep", "--tx-power", "loud")
    assert code == 2


def test_echoed_config_reproduces_rows(tmp_path):
    first = tmp_path / "a.json"
    assert cli.main(["casestudy", "--preset", "medium", "--f-start", "150", "--f-stop", "190",
                     "--f-step", "20", "--points", "51", "--format", "json",
                     "--out", str(first)]) == 0
    env = json.loads(first.read_text())
    cfg = tmp_path / "echo.json"
    echoed = {k: v for k, v in env["config"].items() if k != "command"}
    cfg.write_text(json.dumps(echoed))
    second = tmp_path / "b.json"
    assert cli.main(["casestudy", "--config", str(cfg), "--format", "json",
                     "--out", str(second)]) == 0
    assert second.read_bytes() == first.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thzlink", "txnf", "--f-start", "30",
                           "--f-stop", "30"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "CMOS,30,17.1450003376" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "thzlink", "nosuch"], capture_output=True,
                          text=True)
    assert proc.returncode == 2
    assert proc.stderr.count("\n") == 1
