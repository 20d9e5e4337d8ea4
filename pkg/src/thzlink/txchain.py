"""Transmitter chain: component tables, Friis cascade, TX noise and P_sat.

The chain is an upconversion mixer (with its embedded IF/BB load) followed by
a power amplifier. Per-band component figures are anchored at the arithmetic
band centres and interpolated linearly (in dB, linear frequency axis), with
the outer segments extrapolated to the 30 GHz and 500 GHz range ends.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .quantities import GHZ, K_B, DomainError, from_db

F_MIN_HZ = 30.0 * GHZ
F_MAX_HZ = 500.0 * GHZ

STAGE_ORDER = ("mixer_plus_if", "power_amplifier")
TX_NOISE_MODELS = ("paper_eq2", "output_referred")
DEFAULT_TX_NOISE_MODEL = "output_referred"


@dataclass(frozen=True)
class ComponentBandSpec:
    """Noise figure and gain of one stage over contiguous frequency bands."""

    kind: str
    band_edges_ghz: tuple  # ((lo, hi), ...)
    noise_figure_db: tuple
    gain_db: tuple
    provenance: tuple = ()

    def __post_init__(self):
        if self.kind not in STAGE_ORDER:
            raise DomainError(f"unknown stage kind {self.kind!r}")
        n = len(self.band_edges_ghz)
        if n < 2 or len(self.noise_figure_db) != n or len(self.gain_db) != n:
            raise DomainError(f"{self.kind}: need matching per-band NF and gain values")
        if any(nf <= 0 for nf in self.noise_figure_db):
            raise DomainError(f"{self.kind}: noise figure must be positive in every band")
        edges = self.band_edges_ghz
        for (lo, hi), (lo2, _) in zip(edges, edges[1:]):
            if not lo < hi or hi != lo2:
                raise DomainError(f"{self.kind}: bands must be contiguous and increasing")
        if edges[0][0] > 30.0 or edges[-1][1] < 500.0:
            raise DomainError(f"{self.kind}: bands must cover 30-500 GHz")

    @property
    def anchors_ghz(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.band_edges_ghz])


@dataclass(frozen=True)
class StageParams:
    """Linear noise factor and gain of one chain stage."""

    noise_factor: float
    gain: float

    def __post_init__(self):
        if not self.noise_factor >= 1.0:
            raise DomainError(f"noise factor must be >= 1, got {self.noise_factor}")
        if not self.gain > 0.0:
            raise DomainError(f"gain must be positive, got {self.gain}")

    @classmethod
    def from_db(cls, nf_db, gain_db):
        return cls(from_db(nf_db), from_db(gain_db))


@dataclass(frozen=True)
class TechnologyProfile:
    """One semiconductor technology: ordered stages plus its P_sat trend line.

    ``psat_intercept_dbm - psat_slope_db * ln(f_GHz)`` gives the saturated
    output power in dBm.
    """

    name: str
    stages: tuple
    psat_intercept_dbm: float
    psat_slope_db: float

    def __post_init__(self):
        if tuple(s.kind for s in self.stages) != STAGE_ORDER:
            raise DomainError(f"{self.name}: stages must be ordered {STAGE_ORDER}")

    def stage(self, kind: str) -> ComponentBandSpec:
        for s in self.stages:
            if s.kind == kind:
                return s
        raise DomainError(f"unknown stage kind {kind!r}")


def fit_log_power_model(anchor_lo, anchor_hi):
    """Fit ``P = a - b*ln(f_GHz)`` through two ``(f_GHz, P_dBm)`` points."""
    (f1, p1), (f2, p2) = anchor_lo, anchor_hi
    slope = (p1 - p2) / (math.log(f2) - math.log(f1))
    return p1 + slope * math.log(f1), slope


# CMOS trend line printed with the PA survey fit; SiGe coefficients are
# regenerated from its two quoted operating points (30 GHz, 25 dBm) and
# (300 GHz, 6 dBm).
PSAT_MODELS = {
    "CMOS": (53.902, 7.815),
    "SiGe": fit_log_power_model((30.0, 25.0), (300.0, 6.0)),
}


def load_components(path=None) -> dict:
    """Read a component table into ``{technology_name: TechnologyProfile}``.

    Parameters
    ----------
    path : str or Path, optional
        CSV with columns ``technology,stage,band_low_ghz,band_high_ghz,
        nf_db,gain_db,provenance_note``. Defaults to the bundled table.
    """
    if path is None:
        path = Path(str(resources.files("thzlink") / "data" / "components.csv"))
    expected = [
        "technology", "stage", "band_low_ghz", "band_high_ghz",
        "nf_db", "gain_db", "provenance_note",
    ]
    rows: dict = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != expected:
            raise DomainError(f"{path}: header must be {','.join(expected)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                key = (row["technology"].strip(), row["stage"].strip())
                band = (float(row["band_low_ghz"]), float(row["band_high_ghz"]))
                rows.setdefault(key, []).append(
                    (band, float(row["nf_db"]), float(row["gain_db"]),
                     row["provenance_note"] or "")
                )
            except (TypeError, ValueError) as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None

    profiles = {}
    for tech in dict.fromkeys(t for t, _ in rows):
        stages = []
        for kind in STAGE_ORDER:
            entries = sorted(rows.get((tech, kind), []))
            if not entries:
                raise DomainError(f"{path}: {tech} has no {kind} rows")
            stages.append(ComponentBandSpec(
                kind,
                tuple(e[0] for e in entries),
                tuple(e[1] for e in entries),
                tuple(e[2] for e in entries),
                tuple(e[3] for e in entries),
            ))
        if tech not in PSAT_MODELS:
            raise DomainError(f"{path}: no saturated-power model for technology {tech!r}")
        intercept, slope = PSAT_MODELS[tech]
        profiles[tech] = TechnologyProfile(tech, tuple(stages), intercept, slope)
    return profiles


@functools.lru_cache(maxsize=None)
def _default_profiles():
    return load_components()


def get_technology(name: str, components=None) -> TechnologyProfile:
    """Profile by case-insensitive name (``cmos`` / ``sige``)."""
    profiles = _default_profiles() if components is None else load_components(components)
    for key, prof in profiles.items():
        if key.lower() == name.lower():
            return prof
    raise DomainError(f"unknown technology {name!r}; available: {sorted(profiles)}")


def _check_range(f, check_range):
    f = np.asarray(f, dtype=float)
    if check_range and not np.all((f >= F_MIN_HZ * (1 - 1e-12)) & (f <= F_MAX_HZ * (1 + 1e-12))):
        raise DomainError("frequency outside the TX component range [30, 500] GHz")
    return f


def _piecewise_linear(x, xp, yp):
    # linear interpolation with linear extrapolation of the end segments
    idx = np.clip(np.searchsorted(xp, x) - 1, 0, len(xp) - 2)
    x0, x1 = xp[idx], xp[idx + 1]
    y0, y1 = yp[idx], yp[idx + 1]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def interpolate_stage(profile: TechnologyProfile, kind: str, f_hz, *, check_range=True):
    """Noise figure and gain of one stage at ``f_hz``, both in dB.

    ``check_range=False`` permits linear extrapolation past 30/500 GHz;
    the band integrator uses it when an integration band straddles a range end.
    """
    f = _check_range(f_hz, check_range)
    spec = profile.stage(kind)
    xp = spec.anchors_ghz
    f_ghz = f / GHZ
    nf = _piecewise_linear(f_ghz, xp, np.asarray(spec.noise_figure_db))
    gain = _piecewise_linear(f_ghz, xp, np.asarray(spec.gain_db))
    return _out(nf), _out(gain)


def cascaded_noise_factor(stages) -> float:
    """Friis cascade of an ordered sequence of `StageParams`."""
    stages = list(stages)
    if not stages:
        raise DomainError("cascade needs at least one stage")
    total = stages[0].noise_factor
    gain = stages[0].gain
    for st in stages[1:]:
        total += (st.noise_factor - 1.0) / gain
        gain *= st.gain
    return total


def _cascade_arrays(profile, f, check_range):
    # vectorised Friis over frequency: returns (F_linear, G_linear)
    f_tot = None
    g_tot = None
    for kind in STAGE_ORDER:
        nf_db, g_db = interpolate_stage(profile, kind, f, check_range=check_range)
        nf, g = 10.0 ** (np.asarray(nf_db) / 10.0), 10.0 ** (np.asarray(g_db) / 10.0)
        if f_tot is None:
            f_tot, g_tot = nf, g
        else:
            f_tot = f_tot + (nf - 1.0) / g_tot
            g_tot = g_tot * g
    return f_tot, g_tot


def cascaded_tx_noise_figure(profile: TechnologyProfile, f_hz, *, check_range=True):
    """Cascaded TX noise figure, dB."""
    f = _check_range(f_hz, check_range)
    factor, _ = _cascade_arrays(profile, f, check_range)
    return _out(10.0 * np.log10(factor))


def chain_gain(profile: TechnologyProfile, f_hz, *, check_range=True):
    """Sum of interpolated stage gains, dB."""
    f = _check_range(f_hz, check_range)
    total = 0.0
    for kind in STAGE_ORDER:
        total = total + np.asarray(interpolate_stage(profile, kind, f, check_range=check_range)[1])
    return _out(total)


def tx_noise_psd(profile: TechnologyProfile, f_hz, t_env: float,
                 model: str = DEFAULT_TX_NOISE_MODEL, *, check_range=True):
    """TX output noise PSD in W/Hz.

    ``paper_eq2`` gives ``k * T_env * F_TX``. ``output_referred`` multiplies
    by the linear chain gain, i.e. the input-referred cascade noise as it
    appears at the PA output.
    """
    if model not in TX_NOISE_MODELS:
        raise DomainError(f"unknown TX noise model {model!r}; expected one of {TX_NOISE_MODELS}")
    if not t_env > 0:
        raise DomainError("T_env must be positive")
    f = _check_range(f_hz, check_range)
    factor, gain = _cascade_arrays(profile, f, check_range)
    psd = K_B * t_env * factor
    if model == "output_referred":
        psd = psd * gain
    return _out(psd)


def tx_noise_psd_from_nf(nf_db, t_env: float):
    """``k * T_env * F`` for an explicit noise figure (no chain gain)."""
    return _out(K_B * t_env * 10.0 ** (np.asarray(nf_db, dtype=float) / 10.0))


def tx_saturated_power_dbm(profile: TechnologyProfile, f_hz):
    """Saturated output power trend line, dBm (natural-log frequency axis)."""
    f = _check_range(f_hz, True)
    return _out(profile.psat_intercept_dbm - profile.psat_slope_db * np.log(f / GHZ))


def stage_params(profile: TechnologyProfile, f_hz) -> list:
    """`StageParams` for every stage at a single frequency."""
    out = []
    for kind in STAGE_ORDER:
        nf, g = interpolate_stage(profile, kind, f_hz)
        out.append(StageParams.from_db(nf, g))
    return out


__all__ = [
    "ComponentBandSpec", "StageParams", "TechnologyProfile", "PSAT_MODELS",
    "TX_NOISE_MODELS", "DEFAULT_TX_NOISE_MODEL", "load_components",
    "get_technology", "interpolate_stage", "cascaded_noise_factor",
    "cascaded_tx_noise_figure", "chain_gain", "tx_noise_psd",
    "tx_noise_psd_from_nf", "tx_saturated_power_dbm", "stage_params",
    "fit_log_power_model",
]
