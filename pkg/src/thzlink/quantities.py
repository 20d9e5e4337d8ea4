"""Unit conversions and physical constants.

Everything inside the package works in linear SI units (W, W/Hz, Hz, m, K).
Decibel quantities only appear at API and serialization boundaries.
"""

from __future__ import annotations

import numpy as np

#: Boltzmann constant, J/K (exact, SI 2019)
K_B = 1.380649e-23
#: Speed of light in vacuum, m/s (exact)
C = 2.99792458e8

GHZ = 1e9


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a model."""


def to_db(x):
    """Convert a positive linear ratio to dB.

    Accepts scalars or arrays. Non-positive values raise `DomainError`
    instead of producing ``-inf``/``nan``.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0):
        raise DomainError(f"to_db requires positive input, got {x!r}")
    out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def from_db(x):
    """Convert dB to a linear ratio, ``10**(x/10)``."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"from_db requires finite input, got {x!r}")
    out = 10.0 ** (arr / 10.0)
    return float(out) if out.ndim == 0 else out


def dbm_to_watts(x):
    """Power in dBm to W."""
    return 1e-3 * from_db(x)


def watts_to_dbm(p):
    """Power in W to dBm."""
    return to_db(np.asarray(p, dtype=float) * 1e3)
