"""``thzlink`` command line: absorption, txnf, casestudy, sensitivity, dominance, sweep.

Settings are resolved in three layers: command defaults, then ``--config``
(flat ``key = value`` text or a flat JSON object), then explicit flags.
Unknown config keys are rejected. The resolved settings (minus output
location and worker count) are echoed into every output file, so feeding an
echoed config back through ``--config`` reproduces the same rows.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__, atmosphere, casestudies, channel, linkbudget, noise, txchain
from .quantities import GHZ, DomainError
from .report import (
    ConfigError,
    ReportEnvelope,
    coerce,
    load_config,
    make_table,
    parse_config_text,
    write_envelope,
)

# key -> (type, flag, help)
KEYS = {
    "cond": (str, "--cond", "hot, moderate, cold_dry or a conditions file"),
    "tech": (str, "--tech", "cmos or sige"),
    "tx_noise_model": (str, "--tx-noise-model", "paper_eq2 or output_referred"),
    "components": (str, "--components", "component table CSV"),
    "points": (int, "--points", "integration points per band (odd)"),
    "workers": (int, "--workers", "threads for sweep rows"),
    "format": (str, "--format", "csv or json"),
    "out": (str, "--out", "output path (stdout if omitted)"),
    "f_start_ghz": (float, "--f-start", "first frequency, GHz"),
    "f_stop_ghz": (float, "--f-stop", "last frequency, GHz"),
    "f_step_ghz": (float, "--f-step", "frequency step, GHz"),
    "d_start_m": (float, "--d-start", "first distance, m"),
    "d_stop_m": (float, "--d-stop", "last distance, m"),
    "d_num": (int, "--d-num", "number of log-spaced distances"),
    "preset": (str, "--preset", "short, medium or long"),
    "freq_ghz": (float, "--freq", "carrier frequency, GHz"),
    "distance_m": (float, "--distance", "link distance, m"),
    "gain_dbi": (float, "--gain", "antenna gain at each end, dBi"),
    "tx_power_dbm": (str, "--tx-power", "transmit power in dBm, or 'psat'"),
    "fractional_bandwidth": (float, "--fractional-bandwidth", "bandwidth / carrier"),
    "axis": (str, "--axis", "sweep axis: frequency or distance"),
    "axis1": (str, "--axis1", "grid axis kind:start:stop:steps"),
    "axis2": (str, "--axis2", "grid axis kind:start:stop:steps"),
}

COMMON = {
    "cond": "hot",
    "tech": "cmos",
    "tx_noise_model": txchain.DEFAULT_TX_NOISE_MODEL,
    "components": None,
    "points": 1001,
    "workers": 1,
    "format": "csv",
    "out": None,
}

_SCENARIO = {
    "distance_m": None,
    "gain_dbi": None,
    "tx_power_dbm": None,
    "fractional_bandwidth": 0.25,
}

COMMANDS = {
    "absorption": {"f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 0.1},
    "txnf": {"tech": "all", "f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 1.0},
    "casestudy": {
        "preset": None, "freq_ghz": 300.0,
        "f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 1.0,
        "d_start_m": 1e-3, "d_stop_m": 1.0, "d_num": 61, **_SCENARIO,
    },
    "sensitivity": {
        "preset": "long", "f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 1.0,
        **_SCENARIO,
    },
    "dominance": {
        "preset": "medium", "freq_ghz": 300.0,
        "f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 10.0,
        "axis1": None, "axis2": None, **_SCENARIO,
    },
    "sweep": {
        "preset": "short", "axis": "frequency", "freq_ghz": 300.0,
        "f_start_ghz": 30.0, "f_stop_ghz": 500.0, "f_step_ghz": 1.0,
        "d_start_m": 1e-3, "d_stop_m": 1.0, "d_num": 61, **_SCENARIO,
    },
}

# not echoed: they change where and how fast, never what
_EXECUTION_KEYS = ("out", "workers", "format")

COND_FILE_KEYS = {
    "temperature_k": float,
    "pressure_pa": float,
    "water_vapor_density_g_m3": float,
    "name": str,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thzlink", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"thzlink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, own in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value or JSON settings file")
        for key in {**COMMON, **own}:
            kind, flag, help_text = KEYS[key]
            if key == "format":
                p.add_argument(flag, dest=key, choices=("csv", "json"), help=help_text)
            else:
                p.add_argument(flag, dest=key, type=kind, default=None, help=help_text)
    return parser


def resolve_config(command: str, file_values: dict, flag_values: dict) -> dict:
    """Merge defaults, config-file values and flags; reject unknown keys."""
    defaults = {**COMMON, **COMMANDS[command]}
    unknown = sorted(set(file_values) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
    cfg = dict(defaults)
    for source in (file_values, flag_values):
        for key, value in source.items():
            if key in defaults and value is not None:
                cfg[key] = coerce(key, value, KEYS[key][0])
    return cfg


def echo_config(command: str, cfg: dict) -> dict:
    out = {k: v for k, v in cfg.items() if k not in _EXECUTION_KEYS}
    out["command"] = command
    return out


def load_conditions(spec: str) -> atmosphere.AtmosphericConditions:
    if spec.lower() in atmosphere.PRESETS:
        return atmosphere.get_conditions(spec)
    if not os.path.isfile(spec):
        raise ConfigError(f"conditions {spec!r} is neither a preset nor a file")
    values = load_config(spec)
    unknown = sorted(set(values) - set(COND_FILE_KEYS))
    missing = sorted(set(COND_FILE_KEYS) - {"name"} - set(values))
    if unknown or missing:
        raise ConfigError(f"{spec}: unknown keys {unknown}, missing keys {missing}")
    v = {k: coerce(k, values[k], COND_FILE_KEYS[k]) for k in values}
    return atmosphere.AtmosphericConditions(
        v["temperature_k"], v["pressure_pa"], v["water_vapor_density_g_m3"],
        v.get("name", "custom"),
    )


def _tx_power(value):
    if value is None:
        return "preset"
    if value.strip().lower() == "psat":
        return None
    return coerce("tx_power_dbm", value, float)


def build_template(cfg: dict, preset: str) -> linkbudget.LinkScenario:
    """Scenario from a preset plus the resolved overrides."""
    overrides = {
        "conditions": load_conditions(cfg["cond"]),
        "technology": txchain.get_technology(cfg["tech"], cfg["components"]),
        "tx_noise_model": cfg["tx_noise_model"],
        "integration_points": cfg["points"],
        "fractional_bandwidth": cfg["fractional_bandwidth"],
    }
    if cfg.get("freq_ghz") is not None:
        overrides["carrier_hz"] = cfg["freq_ghz"] * GHZ
    if cfg["distance_m"] is not None:
        overrides["distance"] = cfg["distance_m"]
    if cfg["gain_dbi"] is not None:
        overrides["gain_dbi"] = cfg["gain_dbi"]
    power = _tx_power(cfg["tx_power_dbm"])
    if power != "preset":
        overrides["tx_power_dbm"] = power
    return linkbudget.preset_scenario(preset, **overrides)


def _frequencies(cfg):
    return casestudies.frequency_grid_hz(cfg["f_start_ghz"], cfg["f_stop_ghz"], cfg["f_step_ghz"])


def _distances(cfg):
    return casestudies.distance_grid_m(cfg["d_start_m"], cfg["d_stop_m"], cfg["d_num"])


def _sweep_table(result: linkbudget.SweepResult) -> dict:
    return make_table(result.columns, result.rows())


# --- commands --------------------------------------------------------------

ABSORPTION_COLUMNS = (
    "f_ghz", "gamma_db_per_km", "a_abs_100m_db", "a_abs_1km_db",
    "fspl_100m_db", "fspl_1km_db", "total_100m_db", "total_1km_db",
)


def cmd_absorption(cfg: dict) -> dict:
    cond = load_conditions(cfg["cond"])
    spec = atmosphere.absorption_spectrum(
        cfg["f_start_ghz"] * GHZ, cfg["f_stop_ghz"] * GHZ, cond, cfg["f_step_ghz"] * GHZ)
    f = spec.frequency_hz
    gamma = spec.gamma_db_per_km
    cols = [f / GHZ, gamma]
    a = {d: gamma * d / 1000.0 for d in (100.0, 1000.0)}
    fs = {d: np.atleast_1d(channel.fspl_db(d, f)) for d in (100.0, 1000.0)}
    cols += [a[100.0], a[1000.0], fs[100.0], fs[1000.0],
             fs[100.0] + a[100.0], fs[1000.0] + a[1000.0]]
    return {"absorption": make_table(ABSORPTION_COLUMNS, zip(*cols))}


def cmd_txnf(cfg: dict) -> dict:
    profiles = txchain.load_components(cfg["components"])
    if cfg["tech"].lower() != "all":
        profiles = {p.name: p for p in [txchain.get_technology(cfg["tech"], cfg["components"])]}
    f = _frequencies(cfg)
    rows = []
    for name, prof in profiles.items():
        nf = np.atleast_1d(txchain.cascaded_tx_noise_figure(prof, f))
        gain = np.atleast_1d(txchain.chain_gain(prof, f))
        psat = np.atleast_1d(txchain.tx_saturated_power_dbm(prof, f))
        rows += [(name, fi / GHZ, a, b, c) for fi, a, b, c in zip(f, nf, gain, psat)]
    return {"txnf": make_table(
        ("technology", "f_ghz", "f_tx_db", "chain_gain_db", "psat_dbm"), rows)}


TABLE_V_COLUMNS = ("distance_m", "f_ghz", "snr_baseline_db", "snr_baseline_plus_tx_db",
                   "degradation_db", "tier")


def cmd_casestudy(cfg: dict) -> dict:
    preset = cfg["preset"]
    if preset is None:
        raise ConfigError("casestudy needs --preset short|medium|long")
    if preset not in linkbudget.PRESET_DEFAULTS:
        raise ConfigError(f"unknown preset {preset!r}; expected short, medium or long")
    workers = cfg["workers"]
    if preset == "short":
        template = build_template({**cfg, "freq_ghz": None}, "short")
        study = casestudies.short_range_study(
            template, carrier_ghz=cfg["freq_ghz"], distances_m=_distances(cfg),
            frequencies_hz=_frequencies(cfg), workers=workers)
        tables = {name: _sweep_table(res) for name, res in study.items()}
        tables["table_v"] = make_table(TABLE_V_COLUMNS, casestudies.table_v(template))
        return tables
    template = build_template({**cfg, "freq_ghz": None}, preset)
    result = linkbudget.sweep_frequency(template, _frequencies(cfg), workers=workers)
    return {f"frequency_{template.distance:g}m": _sweep_table(result)}


def cmd_sensitivity(cfg: dict) -> dict:
    template = build_template({**cfg, "freq_ghz": None}, cfg["preset"])
    study = casestudies.sensitivity_study(
        template, _frequencies(cfg), workers=cfg["workers"])
    return {name: _sweep_table(res) for name, res in study.items()}


DOMINANCE_COLUMNS = (
    "f_ghz", "tx_noise_dbm_hz", "baseline_noise_dbm_hz", "g_tx_dbi", "g_rx_dbi",
    "path_loss_db", "threshold_path_loss_db", "margin_db", "degradation_carrier_db",
    "degradation_db", "tier", "tx_dominated",
)
TIER_COLUMNS = ("delta_snr_db", "noise_ratio", "threshold_db", "threshold_report_db", "tier")


def tier_ladder_rows() -> list:
    rows = []
    for d, shown in zip(noise.TIER_BOUNDARIES_DB, noise.TIER_THRESHOLDS_REPORT_DB):
        t = noise.classify_tier(d)
        rows.append((d, t.ratio, t.threshold_db, shown, t.label))
    return rows


def parse_axis(text: str) -> linkbudget.AxisSpec:
    """``kind:start:stop:steps``; frequencies are given in GHz."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(f"grid axis {text!r} must be kind:start:stop:steps")
    kind = parts[0]
    start, stop = (coerce("axis", p, float) for p in parts[1:3])
    steps = coerce("axis", parts[3], int)
    if kind == "frequency":
        start, stop = start * GHZ, stop * GHZ
    return linkbudget.AxisSpec(kind, start, stop, steps)


def cmd_dominance(cfg: dict) -> dict:
    tables = {"tiers": make_table(TIER_COLUMNS, tier_ladder_rows())}
    if (cfg["axis1"] is None) != (cfg["axis2"] is None):
        raise ConfigError("grid mode needs both axis1 and axis2")
    if cfg["axis1"] is not None:
        template = build_template(cfg, cfg["preset"])
        grid = linkbudget.parametric_grid(parse_axis(cfg["axis1"]), parse_axis(cfg["axis2"]),
                                          template)
        rows = grid.rows()
        if not rows:
            raise ConfigError("grid request produced no rows")
        tables["grid"] = make_table(list(rows[0]), rows)
        return tables
    template = build_template({**cfg, "freq_ghz": None}, cfg["preset"])
    result = linkbudget.sweep_frequency(template, _frequencies(cfg), workers=cfg["workers"])
    g = template.geometry
    rows = []
    for f, ev in zip(result.values, result.evaluations):
        rows.append((
            f / GHZ, ev.tx_noise_dbm_hz, ev.baseline_noise_dbm_hz, g.tx_antenna_gain,
            g.rx_antenna_gain, ev.path_loss_db, ev.threshold_path_loss_db, ev.margin_db,
            ev.degradation_carrier_db, ev.degradation_db, ev.tier, int(ev.tx_dominated),
        ))
    tables["dominance"] = make_table(DOMINANCE_COLUMNS, rows)
    return tables


def cmd_sweep(cfg: dict) -> dict:
    axis = cfg["axis"]
    if axis == "frequency":
        template = build_template({**cfg, "freq_ghz": None}, cfg["preset"])
        result = linkbudget.sweep_frequency(template, _frequencies(cfg), workers=cfg["workers"])
    elif axis == "distance":
        template = build_template(cfg, cfg["preset"])
        result = linkbudget.sweep_distance(template, _distances(cfg), workers=cfg["workers"])
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected frequency or distance")
    return {f"sweep_{axis}": _sweep_table(result)}


HANDLERS = {
    "absorption": cmd_absorption,
    "txnf": cmd_txnf,
    "casestudy": cmd_casestudy,
    "sensitivity": cmd_sensitivity,
    "dominance": cmd_dominance,
    "sweep": cmd_sweep,
}


def run(argv=None) -> list:
    """Parse ``argv``, execute, write output; returns written paths."""
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    file_values = {}
    if args.config:
        if not os.path.isfile(args.config):
            raise ConfigError(f"config file {args.config!r} not found")
        with open(args.config, encoding="utf-8") as fh:
            file_values = parse_config_text(fh.read(), args.config)
    cfg = resolve_config(args.command, file_values, flags)
    if cfg["tx_noise_model"] not in txchain.TX_NOISE_MODELS:
        raise ConfigError(f"unknown tx_noise_model {cfg['tx_noise_model']!r}")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    if cfg["out"] is not None:
        parent = os.path.dirname(os.path.abspath(cfg["out"]))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory {parent!r} is not writable")
    payload = HANDLERS[args.command](cfg)
    env = ReportEnvelope(
        config=echo_config(args.command, cfg),
        tx_noise_model=cfg["tx_noise_model"],
        payload=payload,
    )
    return write_envelope(env, cfg["out"], cfg["format"])


def main(argv=None) -> int:
    try:
        run(argv)
    except (ConfigError, DomainError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"thzlink: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
