"""Propagation loss: free-space spreading plus molecular absorption."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import atmosphere
from .quantities import C, DomainError

# aperture used only for the far-field courtesy diagnostic
REFERENCE_APERTURE_M = 0.1


@dataclass(frozen=True)
class LinkGeometry:
    """Distance and antenna gains of a point-to-point link."""

    distance: float
    tx_antenna_gain: float = 0.0
    rx_antenna_gain: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.distance) and self.distance > 0):
            raise DomainError(f"distance must be positive, got {self.distance}")
        for g in (self.tx_antenna_gain, self.rx_antenna_gain):
            if not -10.0 <= g <= 80.0:
                raise DomainError(f"antenna gain {g} dBi outside [-10, 80]")


def fspl_db(d_m, f_hz):
    """Free-space path loss ``20*log10(4*pi*d*f/c)`` in dB.

    Negative values (``4*pi*d*f/c < 1``) are returned as-is; the far-field
    formula is applied at every distance.
    """
    d = np.asarray(d_m, dtype=float)
    f = np.asarray(f_hz, dtype=float)
    if np.any(d <= 0) or np.any(f <= 0):
        raise DomainError("fspl requires positive distance and frequency")
    out = 20.0 * np.log10(4.0 * np.pi * d * f / C)
    return float(out) if out.ndim == 0 else out


def absorption_loss_db(d_m, f_hz, cond):
    """Molecular absorption loss ``10*log10(1/tau)``, computed as ``gamma * d_km``."""
    return atmosphere.absorption_db(d_m, f_hz, cond)


def total_path_loss_db(d_m, f_hz, cond):
    """FSPL plus absorption loss, dB."""
    out = np.asarray(fspl_db(d_m, f_hz)) + np.asarray(absorption_loss_db(d_m, f_hz, cond))
    return float(out) if out.ndim == 0 else out


def is_near_field(d_m: float, f_hz: float, aperture_m: float = REFERENCE_APERTURE_M) -> bool:
    """True when ``d`` is inside the Fraunhofer distance ``2*D^2*f/c``.

    Diagnostic only; losses are never altered.
    """
    return bool(d_m < 2.0 * aperture_m**2 * f_hz / C)
