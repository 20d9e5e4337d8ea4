"""Report envelopes, numeric formatting, CSV/JSON writers and config parsing."""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .noise import ONSET_RATIO_DB, ONSET_RATIO_DB_REPORT
from .quantities import C, K_B

SIG_DIGITS = 12


class ConfigError(ValueError):
    pass


def format_number(x) -> str:
    """Decimal text with 12 significant digits, locale independent."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return format(x, f".{SIG_DIGITS}g")


def normalize(value):
    """Round floats to the serialized precision so CSV and JSON agree."""
    if isinstance(value, (bool, int, str)) or value is None:
        return int(value) if isinstance(value, bool) else value
    x = float(value)
    if not math.isfinite(x):
        return x
    return float(format_number(x))


def constants_block() -> dict:
    return {
        "boltzmann_j_per_k": K_B,
        "speed_of_light_m_per_s": C,
        "dominance_ratio_db": ONSET_RATIO_DB,
        "dominance_ratio_report_db": ONSET_RATIO_DB_REPORT,
    }


def make_table(columns, rows) -> dict:
    """``rows`` may be dicts keyed by column or sequences in column order."""
    columns = list(columns)
    out = []
    for r in rows:
        vals = [r[c] for c in columns] if isinstance(r, dict) else list(r)
        if len(vals) != len(columns):
            raise ValueError("row length does not match columns")
        out.append([normalize(v) for v in vals])
    return {"columns": columns, "rows": out}


@dataclass
class ReportEnvelope:
    """One run's output: provenance metadata plus named result tables."""

    config: dict
    tx_noise_model: str
    payload: dict
    constants: dict = field(default_factory=constants_block)
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        data = json.loads(text)
        return cls(
            config=data["config"],
            tx_noise_model=data["tx_noise_model"],
            payload=data["payload"],
            constants=data["constants"],
            tool_version=data["tool_version"],
        )

    def csv_text(self, table: str) -> str:
        buf = io.StringIO()
        buf.write(f"# tool: thzlink {self.tool_version}\n")
        buf.write(f"# table: {table}\n")
        buf.write(f"# tx_noise_model: {self.tx_noise_model}\n")
        buf.write(f"# config: {json.dumps(self.config, sort_keys=True)}\n")
        buf.write(f"# constants: {json.dumps(self.constants, sort_keys=True)}\n")
        tab = self.payload[table]
        buf.write(",".join(tab["columns"]) + "\n")
        for row in tab["rows"]:
            buf.write(",".join(v if isinstance(v, str) else format_number(v) for v in row))
            buf.write("\n")
        return buf.getvalue()


def read_csv_table(text: str) -> dict:
    """Parse a table written by `ReportEnvelope.csv_text` (comments skipped)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    columns = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        vals = []
        for v in ln.split(","):
            try:
                vals.append(int(v) if v.lstrip("-").isdigit() else float(v))
            except ValueError:
                vals.append(v)
        rows.append(vals)
    return {"columns": columns, "rows": rows}


def csv_paths(out: Path, tables) -> dict:
    tables = list(tables)
    if len(tables) == 1:
        return {tables[0]: out}
    return {t: out.with_name(f"{out.stem}_{t}{out.suffix or '.csv'}") for t in tables}


def write_envelope(env: ReportEnvelope, out, fmt: str) -> list:
    """Write ``env`` as JSON (one file) or CSV (one file per table).

    Returns the written paths; ``out=None`` writes to stdout.
    """
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    if out is None:
        import sys
        if fmt == "json":
            sys.stdout.write(env.to_json())
        else:
            sys.stdout.write("\n".join(env.csv_text(t) for t in env.payload))
        return []
    out = Path(out)
    if fmt == "json":
        out.write_text(env.to_json(), encoding="utf-8", newline="\n")
        return [out]
    written = []
    for table, path in csv_paths(out, env.payload).items():
        path.write_text(env.csv_text(table), encoding="utf-8", newline="\n")
        written.append(path)
    return written


# --- configuration ---------------------------------------------------------

def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Flat ``key = value`` lines (``#`` comments) or a JSON object."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: {exc}") from None
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise ConfigError(f"{source}: JSON config must be a flat object")
        return data
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path) -> dict:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), str(path))


def coerce(key: str, value, kind):
    """Convert a config value to ``kind`` (float, int, str), strictly."""
    if value is None:
        return None
    try:
        if kind is float:
            if isinstance(value, bool):
                raise ValueError
            x = float(value)
            if not math.isfinite(x):
                raise ValueError
            return x
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot interpret {value!r} as {kind.__name__}") from None
