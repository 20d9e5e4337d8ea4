"""Three-source noise floor at the receiver and the TX-noise dominance algebra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import atmosphere
from .quantities import K_B, DomainError

#: Ratio N_TXtoRX / N_baseline in dB at which degradation reaches 1 dB.
ONSET_RATIO_DB = 10.0 * math.log10(10.0**0.1 - 1.0)  # -5.8708...
#: The same boundary as printed in reports.
ONSET_RATIO_DB_REPORT = -5.9

TIER_LABELS = (
    "negligible",
    "onset",
    "margin_reduction",
    "noise_doubled",
    "severe",
    "architectural",
)
TIER_BOUNDARIES_DB = (1.0, 3.0, 5.0)
#: Noise-ratio thresholds of those boundaries as printed in reports.
TIER_THRESHOLDS_REPORT_DB = (ONSET_RATIO_DB_REPORT, 0.0, 3.4)
# degradations this close to 1 dB / 3 dB land on the point tiers
_POINT_TIER_ATOL_DB = 1e-9


@dataclass(frozen=True)
class NoiseBreakdown:
    """Noise PSDs at the receiver input, W/Hz."""

    frequency: float
    distance: float
    thermal_psd: float
    atmospheric_psd: float
    tx_at_rx_psd: float

    @property
    def baseline_psd(self) -> float:
        return self.thermal_psd + self.atmospheric_psd

    @property
    def total_psd(self) -> float:
        return self.baseline_psd + self.tx_at_rx_psd

    @property
    def degradation_db(self) -> float:
        return snr_degradation_db(self.tx_at_rx_psd, self.baseline_psd)


@dataclass(frozen=True)
class DominanceTier:
    label: str
    delta_snr_db: float
    ratio: float
    threshold_db: float


def thermal_noise_psd(t_env):
    """``k * T_env``, W/Hz."""
    t = np.asarray(t_env, dtype=float)
    if np.any(t <= 0):
        raise DomainError("temperature must be positive")
    out = K_B * t
    return float(out) if out.ndim == 0 else out


def baseline_noise_psd(d_m, f_hz, cond):
    """Thermal plus atmospheric molecular noise PSD, W/Hz."""
    out = thermal_noise_psd(cond.temperature) + np.asarray(
        atmosphere.atmospheric_noise_psd(d_m, f_hz, cond)
    )
    return float(out) if out.ndim == 0 else out


def tx_noise_at_rx_psd(n_tx, g_tx_dbi, g_rx_dbi, a_pl_db):
    """TX noise PSD after both antennas and the path loss, W/Hz."""
    n_tx = np.asarray(n_tx, dtype=float)
    if np.any(n_tx < 0):
        raise DomainError("TX noise PSD must be non-negative")
    out = n_tx * 10.0 ** ((g_tx_dbi + g_rx_dbi - np.asarray(a_pl_db, dtype=float)) / 10.0)
    return float(out) if out.ndim == 0 else out


def snr_degradation_db(n_tx_rx, n_baseline):
    """SNR loss from adding TX noise, ``10*log10(1 + N_TXtoRX/N_baseline)``."""
    n_tx_rx = np.asarray(n_tx_rx, dtype=float)
    n_baseline = np.asarray(n_baseline, dtype=float)
    if np.any(n_baseline <= 0):
        raise DomainError("baseline noise PSD must be positive")
    if np.any(n_tx_rx < 0):
        raise DomainError("TX noise PSD must be non-negative")
    out = 10.0 * np.log10(1.0 + n_tx_rx / n_baseline)
    return float(out) if out.ndim == 0 else out


def degradation_to_threshold_db(delta_snr_db: float) -> float:
    """Noise ratio (dB) that produces a given SNR degradation."""
    if not delta_snr_db > 0:
        raise DomainError("degradation must be positive")
    return 10.0 * math.log10(10.0 ** (delta_snr_db / 10.0) - 1.0)


def dominance_threshold_pathloss_db(n_tx_db, g_tx_dbi, g_rx_dbi, n_baseline_db,
                                    onset_ratio_db=ONSET_RATIO_DB):
    """Path loss below which TX noise costs more than 1 dB of SNR.

    ``n_tx_db`` and ``n_baseline_db`` must share a dB reference (e.g. dBm/Hz).
    """
    return n_tx_db + g_tx_dbi + g_rx_dbi - n_baseline_db - onset_ratio_db


def link_budget_margin_db(n_tx_db, g_tx_dbi, g_rx_dbi, a_pl_db, n_baseline_db):
    """TX noise at the RX relative to the baseline floor, dB.

    TX noise dominates when this reaches `ONSET_RATIO_DB`.
    """
    return n_tx_db + g_tx_dbi + g_rx_dbi - a_pl_db - n_baseline_db


def is_tx_dominated(a_pl_db, threshold_db) -> bool:
    return bool(a_pl_db < threshold_db)


def classify_tier(delta_snr_db: float) -> DominanceTier:
    """Severity tier of a TX-noise SNR degradation.

    Exactly 1 dB and 3 dB map to the ``onset`` and ``noise_doubled`` rows;
    5 dB and above is ``architectural``.
    """
    d = float(delta_snr_db)
    if not d >= 0 or math.isnan(d):
        raise DomainError("degradation must be non-negative")
    if abs(d - 1.0) <= _POINT_TIER_ATOL_DB:
        label = "onset"
    elif abs(d - 3.0) <= _POINT_TIER_ATOL_DB:
        label = "noise_doubled"
    elif d < 1.0:
        label = "negligible"
    elif d < 3.0:
        label = "margin_reduction"
    elif d < 5.0:
        label = "severe"
    else:
        label = "architectural"
    ratio = 10.0 ** (d / 10.0) - 1.0
    threshold = 10.0 * math.log10(ratio) if ratio > 0 else -math.inf
    return DominanceTier(label, d, ratio, threshold)


def guidance_level(delta_snr_db: float) -> str:
    """Coarse design-guidance label: low / moderate / significant / critical."""
    d = float(delta_snr_db)
    if d < 1.0:
        return "low"
    if d < 3.0:
        return "moderate"
    if d <= 5.0:
        return "significant"
    return "critical"
