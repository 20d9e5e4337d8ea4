"""Gaseous absorption of air and the molecular noise it re-emits.

Specific attenuation follows the line-by-line method of ITU-R P.676 Annex 1:
a sum over 44 oxygen and 35 water-vapour resonances plus the dry-air
(Debye + pressure-induced nitrogen) continuum. Line coefficients are read
from the CSV tables shipped in ``thzlink/data``.
"""

from __future__ import annotations

import csv
import functools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .quantities import GHZ, K_B, DomainError

F_MIN_HZ = 1.0 * GHZ
F_MAX_HZ = 1000.0 * GHZ


@dataclass(frozen=True)
class AtmosphericConditions:
    """State of the air along a horizontal, homogeneous path.

    Parameters
    ----------
    temperature : float
        Air temperature, K.
    pressure : float
        Total barometric pressure, Pa.
    water_vapor_density : float
        Absolute humidity, g/m^3.
    name : str, optional
        Label carried into reports.
    """

    temperature: float
    pressure: float
    water_vapor_density: float
    name: str = "custom"

    def __post_init__(self):
        if not 150.0 <= self.temperature <= 400.0:
            raise DomainError(f"temperature {self.temperature} K outside [150, 400]")
        if not 1e3 <= self.pressure <= 2e5:
            raise DomainError(f"pressure {self.pressure} Pa outside [1e3, 2e5]")
        if not 0.0 <= self.water_vapor_density <= 100.0:
            raise DomainError(
                f"water vapour density {self.water_vapor_density} g/m^3 outside [0, 100]"
            )

    @property
    def water_vapor_pressure_hpa(self) -> float:
        # ideal-gas relation used throughout ITU-R P.676/P.453
        return self.water_vapor_density * self.temperature / 216.7

    @property
    def dry_pressure_hpa(self) -> float:
        return self.pressure / 100.0 - self.water_vapor_pressure_hpa


PRESETS = {
    "hot": AtmosphericConditions(308.15, 101190.0, 39.6, "hot"),
    "moderate": AtmosphericConditions(288.15, 101325.0, 12.8, "moderate"),
    "cold_dry": AtmosphericConditions(268.15, 102100.0, 3.4, "cold_dry"),
}


def get_conditions(name: str) -> AtmosphericConditions:
    """Look up an environmental preset by name (``hot``, ``moderate``, ``cold_dry``)."""
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise DomainError(
            f"unknown conditions preset {name!r}; expected one of {sorted(PRESETS)}"
        ) from None


@dataclass(frozen=True)
class LineTable:
    """Read-only spectroscopic line table.

    ``center_ghz`` holds the resonance frequencies and ``coeffs`` the six
    shape coefficients per line (a1..a6 for oxygen, b1..b6 for water vapour),
    shaped ``(6, n_lines)``.
    """

    species: str
    center_ghz: np.ndarray
    coeffs: np.ndarray

    def __len__(self):
        return self.center_ghz.size


def load_line_table(path, species: str) -> LineTable:
    """Parse a ``f0_ghz,c1,...,c6`` CSV file into a `LineTable`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 7 or header[0].strip() != "f0_ghz":
            raise DomainError(f"{path}: malformed line table header {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 7:
                raise DomainError(f"{path}:{lineno}: expected 7 fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DomainError(f"{path}: no spectroscopic lines")
    data = np.array(rows)
    if np.any(data[:, 0] <= 0):
        raise DomainError(f"{path}: line centre frequencies must be positive")
    center = data[:, 0].copy()
    coeffs = data[:, 1:].T.copy()
    center.flags.writeable = False
    coeffs.flags.writeable = False
    return LineTable(species, center, coeffs)


def _data_path(filename: str) -> Path:
    return Path(str(resources.files("thzlink") / "data" / filename))


@functools.lru_cache(maxsize=None)
def oxygen_lines() -> LineTable:
    return load_line_table(_data_path("oxygen_lines.csv"), "O2")


@functools.lru_cache(maxsize=None)
def water_lines() -> LineTable:
    return load_line_table(_data_path("water_lines.csv"), "H2O")


def _line_shape(f, f0, width, delta):
    # van Vleck-Weisskopf shape with oxygen line-mixing correction
    f = f[np.newaxis, :]
    f0 = f0[:, np.newaxis]
    width = width[:, np.newaxis]
    delta = delta[:, np.newaxis]
    minus = f0 - f
    plus = f0 + f
    return f / f0 * (
        (width - delta * minus) / (minus**2 + width**2)
        + (width - delta * plus) / (plus**2 + width**2)
    )


def _oxygen_term(f_ghz, p, e, theta, table):
    a1, a2, a3, a4, a5, a6 = table.coeffs
    strength = a1 * 1e-7 * p * theta**3 * np.exp(a2 * (1.0 - theta))
    width = a3 * 1e-4 * (p * theta ** (0.8 - a4) + 1.1 * e * theta)
    width = np.sqrt(width**2 + 2.25e-6)  # Zeeman splitting
    delta = (a5 + a6 * theta) * 1e-4 * (p + e) * theta**0.8
    lines = strength @ _line_shape(f_ghz, table.center_ghz, width, delta)

    d = 5.6e-4 * (p + e) * theta**0.8
    continuum = f_ghz * p * theta**2 * (
        6.14e-5 / (d * (1.0 + (f_ghz / d) ** 2))
        + 1.4e-12 * p * theta**1.5 / (1.0 + 1.9e-5 * f_ghz**1.5)
    )
    return 0.1820 * f_ghz * (lines + continuum)


def _water_term(f_ghz, p, e, theta, table):
    b1, b2, b3, b4, b5, b6 = table.coeffs
    f0 = table.center_ghz
    strength = b1 * 1e-1 * e * theta**3.5 * np.exp(b2 * (1.0 - theta))
    width = b3 * 1e-4 * (p * theta**b4 + b5 * e * theta**b6)
    width = 0.535 * width + np.sqrt(0.217 * width**2 + 2.1316e-12 * f0**2 / theta)
    shape = _line_shape(f_ghz, f0, width, np.zeros_like(f0))
    return 0.1820 * f_ghz * (strength @ shape)


def _check_frequency(f_hz):
    f = np.asarray(f_hz, dtype=float)
    if not np.all((f >= F_MIN_HZ) & (f <= F_MAX_HZ)):
        raise DomainError("frequency outside the absorption model range [1, 1000] GHz")
    return f


def _check_distance(d_m):
    d = np.asarray(d_m, dtype=float)
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise DomainError("distance must be finite and non-negative")
    return d


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def specific_attenuation_components(f_hz, cond: AtmosphericConditions):
    """Dry-air and water-vapour specific attenuation in dB/km.

    Returns
    -------
    (gamma_oxygen, gamma_water) : tuple
        Same shape as ``f_hz``.
    """
    f = _check_frequency(f_hz)
    f_ghz = f.ravel() / GHZ
    theta = 300.0 / cond.temperature
    e = cond.water_vapor_pressure_hpa
    p = cond.dry_pressure_hpa
    g_o = _oxygen_term(f_ghz, p, e, theta, oxygen_lines())
    g_w = _water_term(f_ghz, p, e, theta, water_lines())
    if f.ndim == 0:
        return float(g_o[0]), float(g_w[0])
    return g_o.reshape(f.shape), g_w.reshape(f.shape)


def specific_attenuation(f_hz, cond: AtmosphericConditions):
    """Specific attenuation of air, dB/km, at frequency ``f_hz`` (scalar or array)."""
    g_o, g_w = specific_attenuation_components(f_hz, cond)
    return _scalar_or_array(np.maximum(np.asarray(g_o) + np.asarray(g_w), 0.0))


def absorption_db(d_m, f_hz, cond: AtmosphericConditions):
    """Molecular absorption over ``d_m`` metres, dB (``gamma * d_km``)."""
    d = _check_distance(d_m)
    return _scalar_or_array(specific_attenuation(f_hz, cond) * d / 1000.0)


def transmittance(d_m, f_hz, cond: AtmosphericConditions):
    """Fraction of power surviving the path, ``10**(-gamma*d_km/10)``."""
    return _scalar_or_array(10.0 ** (-np.asarray(absorption_db(d_m, f_hz, cond)) / 10.0))


def emissivity(d_m, f_hz, cond: AtmosphericConditions):
    """Channel emissivity ``1 - transmittance``."""
    return _scalar_or_array(1.0 - np.asarray(transmittance(d_m, f_hz, cond)))


def molecular_noise_temperature(d_m, f_hz, cond: AtmosphericConditions):
    """Equivalent noise temperature of the absorbing air, K.

    The physical temperature of the medium (``cond.temperature``) is used
    as the emitting-layer temperature.
    """
    return _scalar_or_array(cond.temperature * np.asarray(emissivity(d_m, f_hz, cond)))


def atmospheric_noise_psd(d_m, f_hz, cond: AtmosphericConditions):
    """Molecular noise PSD at the receiver, W/Hz."""
    return _scalar_or_array(K_B * np.asarray(molecular_noise_temperature(d_m, f_hz, cond)))


@dataclass(frozen=True)
class AbsorptionSpectrum:
    frequency_hz: np.ndarray
    gamma_db_per_km: np.ndarray
    conditions: AtmosphericConditions


def absorption_spectrum(
    f_start_hz: float,
    f_stop_hz: float,
    cond: AtmosphericConditions,
    step_hz: float = 0.1 * GHZ,
) -> AbsorptionSpectrum:
    """Tabulate specific attenuation on a regular grid (inclusive of both ends)."""
    if step_hz <= 0:
        raise DomainError("step must be positive")
    if f_stop_hz < f_start_hz:
        raise DomainError("f_stop must not be below f_start")
    n = int(round((f_stop_hz - f_start_hz) / step_hz)) + 1
    f = f_start_hz + step_hz * np.arange(n)
    f = f[f <= f_stop_hz * (1 + 1e-12)]
    return AbsorptionSpectrum(f, np.atleast_1d(specific_attenuation(f, cond)), cond)
