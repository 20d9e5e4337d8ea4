"""Ready-made short/medium/long-range studies and the environmental comparison."""

from __future__ import annotations

import numpy as np

from . import atmosphere, linkbudget
from .quantities import GHZ, DomainError

TABLE_V_FREQUENCIES_GHZ = (60.0, 140.0, 250.0, 300.0)
TABLE_V_DISTANCES_M = (1e-3, 1e-2, 1e-1, 1.0)


def frequency_grid_hz(start_ghz=30.0, stop_ghz=500.0, step_ghz=1.0) -> np.ndarray:
    """Inclusive regular grid in Hz."""
    if step_ghz <= 0:
        raise DomainError("frequency step must be positive")
    if stop_ghz < start_ghz:
        raise DomainError("frequency range is reversed")
    n = int(round((stop_ghz - start_ghz) / step_ghz)) + 1
    f = start_ghz + step_ghz * np.arange(n)
    return f[f <= stop_ghz + 1e-9] * GHZ


def distance_grid_m(start_m=1e-3, stop_m=1.0, num=61) -> np.ndarray:
    """Log-spaced distances, inclusive of both ends."""
    if num < 1 or start_m <= 0 or stop_m < start_m:
        raise DomainError("invalid distance range")
    return np.logspace(np.log10(start_m), np.log10(stop_m), int(num))


def table_v(template: linkbudget.LinkScenario | None = None,
            frequencies_ghz=TABLE_V_FREQUENCIES_GHZ,
            distances_m=TABLE_V_DISTANCES_M) -> list:
    """Short-range degradation grid, one dict per (distance, frequency) cell."""
    template = template or linkbudget.preset_scenario("short")
    rows = []
    for d in distances_m:
        for f in frequencies_ghz:
            ev = linkbudget.evaluate(template.replace(distance=d, carrier_hz=f * GHZ))
            rows.append({
                "distance_m": d,
                "f_ghz": f,
                "snr_baseline_db": ev.snr_db["baseline"],
                "snr_baseline_plus_tx_db": ev.snr_db["baseline_plus_tx"],
                "degradation_db": ev.degradation_db,
                "tier": ev.tier,
            })
    return rows


def short_range_study(template=None, *, carrier_ghz=300.0, distances_m=None,
                      frequencies_hz=None, workers=1) -> dict:
    """Distance sweep at one carrier plus frequency sweeps at 1 mm and 1 cm."""
    template = template or linkbudget.preset_scenario("short")
    distances_m = distance_grid_m() if distances_m is None else distances_m
    frequencies_hz = frequency_grid_hz() if frequencies_hz is None else frequencies_hz
    at_carrier = template.replace(carrier_hz=carrier_ghz * GHZ)
    return {
        f"distance_{carrier_ghz:g}ghz": linkbudget.sweep_distance(at_carrier, distances_m,
                                                                 workers=workers),
        "frequency_1mm": linkbudget.sweep_frequency(template.replace(distance=1e-3),
                                                    frequencies_hz, workers=workers),
        "frequency_10mm": linkbudget.sweep_frequency(template.replace(distance=1e-2),
                                                     frequencies_hz, workers=workers),
    }


def frequency_study(preset: str, frequencies_hz=None, workers=1, **overrides):
    """Frequency sweep of the ``medium`` or ``long`` preset."""
    template = linkbudget.preset_scenario(preset, **overrides)
    frequencies_hz = frequency_grid_hz() if frequencies_hz is None else frequencies_hz
    return linkbudget.sweep_frequency(template, frequencies_hz, workers=workers)


def sensitivity_study(template: linkbudget.LinkScenario | None = None,
                      frequencies_hz=None, conditions=None, workers=1) -> dict:
    """Same link swept over frequency under each environmental preset."""
    template = template or linkbudget.preset_scenario("long")
    frequencies_hz = frequency_grid_hz() if frequencies_hz is None else frequencies_hz
    conditions = conditions or list(atmosphere.PRESETS)
    return {
        name: linkbudget.sweep_frequency(
            template.replace(conditions=atmosphere.get_conditions(name)),
            frequencies_hz, workers=workers)
        for name in conditions
    }
