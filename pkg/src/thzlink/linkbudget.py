"""End-to-end link evaluation: received power, band-integrated noise, SNR,
Shannon capacity, and the sweep engines built on them.

Three noise scenarios are evaluated side by side:

``thermal_only``
    Free-space link without any atmosphere: FSPL only on the signal, ``k*T``
    as the noise floor.
``baseline``
    Signal additionally absorbed by the air; noise is thermal plus
    atmospheric molecular emission.
``baseline_plus_tx``
    ``baseline`` plus the TX noise that reaches the receiver.

Signal power is evaluated at the carrier; noise is integrated over the band
``f_c * (1 +/- fractional_bandwidth/2)`` with the trapezoid rule, re-evaluating
every frequency-dependent term per integration point.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import atmosphere, channel, noise, txchain
from .atmosphere import AtmosphericConditions
from .channel import LinkGeometry
from .quantities import GHZ, K_B, DomainError, dbm_to_watts
from .txchain import TechnologyProfile

NOISE_SCENARIOS = ("thermal_only", "baseline", "baseline_plus_tx")


def _default_conditions():
    return atmosphere.PRESETS["hot"]


def _default_technology():
    return txchain.get_technology("CMOS")


@dataclass(frozen=True)
class LinkScenario:
    """Everything needed to evaluate one link at one carrier.

    ``tx_power_dbm=None`` selects the technology's saturated-power model;
    a number fixes the transmit power. ``nf_db_override`` replaces the
    cascaded TX noise figure and drops the chain gain (literal ``k*T*F``).
    """

    geometry: LinkGeometry
    carrier_hz: float
    conditions: AtmosphericConditions = field(default_factory=_default_conditions)
    technology: TechnologyProfile = field(default_factory=_default_technology)
    tx_power_dbm: float | None = None
    tx_noise_model: str = txchain.DEFAULT_TX_NOISE_MODEL
    fractional_bandwidth: float = 0.25
    integration_points: int = 1001
    nf_db_override: float | None = None

    def __post_init__(self):
        if not 0.0 < self.fractional_bandwidth <= 0.5:
            raise DomainError("fractional bandwidth must lie in (0, 0.5]")
        if self.integration_points < 3 or self.integration_points % 2 == 0:
            raise DomainError("integration_points must be odd and >= 3")
        if self.tx_noise_model not in txchain.TX_NOISE_MODELS:
            raise DomainError(f"unknown TX noise model {self.tx_noise_model!r}")
        if not txchain.F_MIN_HZ * (1 - 1e-12) <= self.carrier_hz <= txchain.F_MAX_HZ * (1 + 1e-12):
            raise DomainError(
                f"carrier {self.carrier_hz / GHZ:g} GHz outside [30, 500] GHz"
            )
        lo, hi = self.band_edges_hz
        if lo < atmosphere.F_MIN_HZ or hi > atmosphere.F_MAX_HZ:
            raise DomainError("integration band leaves the absorption model range")

    @property
    def distance(self) -> float:
        return self.geometry.distance

    @property
    def bandwidth_hz(self) -> float:
        return self.fractional_bandwidth * self.carrier_hz

    @property
    def band_edges_hz(self):
        half = 0.5 * self.bandwidth_hz
        return self.carrier_hz - half, self.carrier_hz + half

    def band_hz(self) -> np.ndarray:
        lo, hi = self.band_edges_hz
        return np.linspace(lo, hi, self.integration_points)

    def replace(self, **changes) -> "LinkScenario":
        """Copy with fields replaced; ``distance`` is routed into the geometry."""
        if "distance" in changes:
            d = changes.pop("distance")
            changes["geometry"] = dataclasses.replace(self.geometry, distance=d)
        return dataclasses.replace(self, **changes)


# --- presets ---------------------------------------------------------------

PRESET_DEFAULTS = {
    "short": dict(distance=1e-3, gain_dbi=0.0, tx_power_dbm=0.0, carrier_hz=300 * GHZ),
    "medium": dict(distance=100.0, gain_dbi=40.0, tx_power_dbm=None, carrier_hz=300 * GHZ),
    "long": dict(distance=1000.0, gain_dbi=56.0, tx_power_dbm=None, carrier_hz=300 * GHZ),
}


def preset_scenario(name: str, **overrides) -> LinkScenario:
    """Build one of the ``short`` / ``medium`` / ``long`` case-study links.

    Keyword overrides may name any `LinkScenario` field, plus ``distance``
    and ``gain_dbi`` (applied to both antennas).
    """
    try:
        base = dict(PRESET_DEFAULTS[name])
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; expected short, medium or long") from None
    base.update({k: v for k, v in overrides.items() if k in ("distance", "gain_dbi")})
    geometry = LinkGeometry(base["distance"], base["gain_dbi"], base["gain_dbi"])
    kwargs = dict(geometry=geometry, carrier_hz=base["carrier_hz"],
                  tx_power_dbm=base["tx_power_dbm"])
    kwargs.update({k: v for k, v in overrides.items() if k not in ("distance", "gain_dbi")})
    return LinkScenario(**kwargs)


# --- scalar pipeline ------------------------------------------------------

def tx_power_dbm(scenario: LinkScenario) -> float:
    if scenario.tx_power_dbm is not None:
        return float(scenario.tx_power_dbm)
    return txchain.tx_saturated_power_dbm(scenario.technology, scenario.carrier_hz)


def received_power_dbm(scenario: LinkScenario, *, include_absorption: bool = True) -> float:
    """``P_TX - A_PL + G_TX + G_RX`` at the carrier, dBm."""
    g = scenario.geometry
    if include_absorption:
        loss = channel.total_path_loss_db(g.distance, scenario.carrier_hz, scenario.conditions)
    else:
        loss = channel.fspl_db(g.distance, scenario.carrier_hz)
    return tx_power_dbm(scenario) - loss + g.tx_antenna_gain + g.rx_antenna_gain


def tx_noise_psd(scenario: LinkScenario, f_hz, *, check_range=False):
    """TX output noise PSD for this scenario's chain, W/Hz."""
    t = scenario.conditions.temperature
    if scenario.nf_db_override is not None:
        return txchain.tx_noise_psd_from_nf(np.full(np.shape(f_hz), scenario.nf_db_override), t)
    return txchain.tx_noise_psd(scenario.technology, f_hz, t, scenario.tx_noise_model,
                                check_range=check_range)


def noise_psd_profile(scenario: LinkScenario, f_hz=None) -> dict:
    """Per-frequency noise PSDs (W/Hz) over the band, keyed by source."""
    f = scenario.band_hz() if f_hz is None else np.asarray(f_hz, dtype=float)
    g = scenario.geometry
    cond = scenario.conditions
    thermal = np.full(f.shape, noise.thermal_noise_psd(cond.temperature))
    # one absorption evaluation feeds both the emission and the path loss;
    # the arithmetic mirrors atmospheric_noise_psd and total_path_loss_db
    a_abs = np.asarray(atmosphere.absorption_db(g.distance, f, cond))
    tau = 10.0 ** (-a_abs / 10.0)
    atm = K_B * (cond.temperature * (1.0 - tau))
    a_pl = np.asarray(channel.fspl_db(g.distance, f)) + a_abs
    tx_rx = noise.tx_noise_at_rx_psd(
        tx_noise_psd(scenario, f), g.tx_antenna_gain, g.rx_antenna_gain, a_pl
    )
    return {"frequency": f, "thermal": thermal, "atmospheric": atm,
            "tx_at_rx": np.asarray(tx_rx)}


def noise_breakdown(scenario: LinkScenario, f_hz: float | None = None) -> noise.NoiseBreakdown:
    """PSD-level noise breakdown at a single frequency (default: carrier)."""
    f = scenario.carrier_hz if f_hz is None else float(f_hz)
    prof = noise_psd_profile(scenario, np.array([f]))
    return noise.NoiseBreakdown(
        frequency=f,
        distance=scenario.distance,
        thermal_psd=float(prof["thermal"][0]),
        atmospheric_psd=float(prof["atmospheric"][0]),
        tx_at_rx_psd=float(prof["tx_at_rx"][0]),
    )


def _trapezoid(y, x):
    return float(np.trapezoid(y, x))


def integrated_noise_power_w(scenario: LinkScenario) -> dict:
    """Band-integrated noise power per noise scenario, W."""
    prof = noise_psd_profile(scenario)
    f = prof["frequency"]
    baseline = prof["thermal"] + prof["atmospheric"]
    return {
        "thermal_only": _trapezoid(prof["thermal"], f),
        "baseline": _trapezoid(baseline, f),
        "baseline_plus_tx": _trapezoid(baseline + prof["tx_at_rx"], f),
    }


def signal_power_w(scenario: LinkScenario) -> dict:
    with_abs = dbm_to_watts(received_power_dbm(scenario))
    return {
        "thermal_only": dbm_to_watts(received_power_dbm(scenario, include_absorption=False)),
        "baseline": with_abs,
        "baseline_plus_tx": with_abs,
    }


def _snr_db(signal: dict, noise_w: dict) -> dict:
    return {k: 10.0 * math.log10(signal[k] / noise_w[k]) for k in NOISE_SCENARIOS}


def _capacity(bandwidth_hz: float, signal: dict, noise_w: dict) -> dict:
    return {k: bandwidth_hz * math.log2(1.0 + signal[k] / noise_w[k]) for k in NOISE_SCENARIOS}


def snr_db(scenario: LinkScenario) -> dict:
    """SNR per noise scenario, dB."""
    return _snr_db(signal_power_w(scenario), integrated_noise_power_w(scenario))


def capacity_bps(scenario: LinkScenario) -> dict:
    """Shannon capacity ``B * log2(1 + SNR)`` per noise scenario, bit/s."""
    return _capacity(scenario.bandwidth_hz, signal_power_w(scenario),
                     integrated_noise_power_w(scenario))


def shannon_capacity_bps(bandwidth_hz, snr_db_value):
    return bandwidth_hz * np.log2(1.0 + 10.0 ** (np.asarray(snr_db_value) / 10.0))


@dataclass(frozen=True)
class LinkEvaluation:
    """All per-link outputs for one scenario.

    ``degradation_db`` compares band-integrated ``baseline`` and
    ``baseline_plus_tx`` noise. The dominance fields are PSD-level at the
    carrier: path loss, the path-loss threshold, the link-budget margin and
    the matching carrier degradation.
    """

    scenario: LinkScenario
    p_rx_dbm: float
    signal_w: dict
    noise_w: dict
    snr_db: dict
    capacity_bps: dict
    degradation_db: float
    tier: str
    path_loss_db: float
    threshold_path_loss_db: float
    margin_db: float
    degradation_carrier_db: float
    tx_dominated: bool
    near_field: bool
    tx_noise_dbm_hz: float
    baseline_noise_dbm_hz: float


def evaluate(scenario: LinkScenario) -> LinkEvaluation:
    """Run the full pipeline for one scenario."""
    signal = signal_power_w(scenario)
    noise_w = integrated_noise_power_w(scenario)
    snr = _snr_db(signal, noise_w)
    cap = _capacity(scenario.bandwidth_hz, signal, noise_w)
    degradation = 10.0 * math.log10(noise_w["baseline_plus_tx"] / noise_w["baseline"])
    degradation = max(degradation, 0.0)

    g = scenario.geometry
    fc = scenario.carrier_hz
    nb = noise_breakdown(scenario)
    a_pl = channel.total_path_loss_db(g.distance, fc, scenario.conditions)
    n_tx = float(tx_noise_psd(scenario, np.array([fc]))[0])
    n_tx_db = 10.0 * math.log10(n_tx * 1e3)  # dBm/Hz
    nb_db = 10.0 * math.log10(nb.baseline_psd * 1e3)
    threshold = noise.dominance_threshold_pathloss_db(
        n_tx_db, g.tx_antenna_gain, g.rx_antenna_gain, nb_db)
    margin = noise.link_budget_margin_db(
        n_tx_db, g.tx_antenna_gain, g.rx_antenna_gain, a_pl, nb_db)
    return LinkEvaluation(
        scenario=scenario,
        p_rx_dbm=received_power_dbm(scenario),
        signal_w=signal,
        noise_w=noise_w,
        snr_db=snr,
        capacity_bps=cap,
        degradation_db=degradation,
        tier=noise.classify_tier(degradation).label,
        path_loss_db=a_pl,
        threshold_path_loss_db=threshold,
        margin_db=margin,
        degradation_carrier_db=nb.degradation_db,
        tx_dominated=noise.is_tx_dominated(a_pl, threshold),
        near_field=channel.is_near_field(g.distance, fc),
        tx_noise_dbm_hz=n_tx_db,
        baseline_noise_dbm_hz=nb_db,
    )


# --- sweeps ----------------------------------------------------------------

AXIS_COLUMNS = {"frequency": "f_ghz", "distance": "distance_m"}

ROW_COLUMNS = (
    "snr_thermal_only_db", "snr_baseline_db", "snr_baseline_plus_tx_db",
    "capacity_thermal_only_bps", "capacity_baseline_bps", "capacity_baseline_plus_tx_bps",
    "degradation_db", "tier", "p_rx_dbm", "path_loss_db", "threshold_path_loss_db",
    "margin_db", "degradation_carrier_db", "tx_dominated", "near_field",
)


def evaluation_row(ev: LinkEvaluation) -> dict:
    row = {}
    for k in NOISE_SCENARIOS:
        row[f"snr_{k}_db"] = ev.snr_db[k]
    for k in NOISE_SCENARIOS:
        row[f"capacity_{k}_bps"] = ev.capacity_bps[k]
    row.update(
        degradation_db=ev.degradation_db,
        tier=ev.tier,
        p_rx_dbm=ev.p_rx_dbm,
        path_loss_db=ev.path_loss_db,
        threshold_path_loss_db=ev.threshold_path_loss_db,
        margin_db=ev.margin_db,
        degradation_carrier_db=ev.degradation_carrier_db,
        tx_dominated=int(ev.tx_dominated),
        near_field=int(ev.near_field),
    )
    return row


@dataclass(frozen=True)
class SweepResult:
    """Tabulated evaluations along one axis, in input order."""

    axis: str
    values: tuple
    evaluations: tuple
    template: LinkScenario

    @property
    def axis_column(self) -> str:
        return AXIS_COLUMNS[self.axis]

    @property
    def columns(self) -> tuple:
        return (self.axis_column,) + ROW_COLUMNS

    def rows(self) -> list:
        out = []
        scale = GHZ if self.axis == "frequency" else 1.0
        for v, ev in zip(self.values, self.evaluations):
            row = {self.axis_column: v / scale}
            row.update(evaluation_row(ev))
            out.append(row)
        return out

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows()])


def _run_rows(axis, template, values, make, workers):
    def one(item):
        i, v = item
        try:
            return evaluate(make(v))
        except DomainError as exc:
            raise DomainError(f"sweep row {i} ({axis}={v:g}): {exc}") from exc

    items = list(enumerate(values))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evals = list(pool.map(one, items))
    else:
        evals = [one(it) for it in items]
    return SweepResult(axis, tuple(float(v) for v in values), tuple(evals), template)


def sweep_distance(template: LinkScenario, distances, *, workers: int = 1) -> SweepResult:
    """Evaluate ``template`` at each distance (m)."""
    distances = [float(d) for d in distances]
    if not distances:
        raise DomainError("distance sweep needs at least one value")
    return _run_rows("distance", template, distances,
                     lambda d: template.replace(distance=d), workers)


def sweep_frequency(template: LinkScenario, frequencies_hz, *, workers: int = 1) -> SweepResult:
    """Evaluate ``template`` at each carrier frequency (Hz)."""
    freqs = [float(f) for f in frequencies_hz]
    if not freqs:
        raise DomainError("frequency sweep needs at least one value")
    return _run_rows("frequency", template, freqs,
                     lambda f: template.replace(carrier_hz=f), workers)


# --- parametric grid -------------------------------------------------------

GRID_AXIS_KINDS = ("nf_db_override", "frequency", "total_pathloss_db_override", "distance")


@dataclass(frozen=True)
class AxisSpec:
    """Regularly spaced grid axis. Frequencies in Hz, distances in m, losses in dB."""

    kind: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.kind not in GRID_AXIS_KINDS:
            raise DomainError(f"unknown grid axis {self.kind!r}; expected one of {GRID_AXIS_KINDS}")
        if self.steps < 1:
            raise DomainError("grid axis needs at least one step")
        if self.steps > 1 and self.start == self.stop:
            raise DomainError("degenerate grid axis: start equals stop")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise DomainError("grid axis bounds must be finite")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ParametricGrid:
    axis1: AxisSpec
    axis2: AxisSpec
    degradation_db: np.ndarray  # shape (axis1.steps, axis2.steps)

    def rows(self) -> list:
        v1, v2 = self.axis1.values(), self.axis2.values()
        n1, n2 = _grid_column(self.axis1.kind), _grid_column(self.axis2.kind)
        s1, s2 = _grid_scale(self.axis1.kind), _grid_scale(self.axis2.kind)
        out = []
        for i, a in enumerate(v1):
            for j, b in enumerate(v2):
                d = float(self.degradation_db[i, j])
                out.append({n1: a / s1, n2: b / s2, "degradation_db": d,
                            "tier": noise.classify_tier(d).label})
        return out


def _grid_column(kind):
    return {"nf_db_override": "nf_db", "frequency": "f_ghz",
            "total_pathloss_db_override": "path_loss_db", "distance": "distance_m"}[kind]


def _grid_scale(kind):
    return GHZ if kind == "frequency" else 1.0


def grid_cell_degradation_db(scenario: LinkScenario, *, nf_db=None, pathloss_db=None) -> float:
    """PSD-level degradation at the scenario carrier with optional overrides."""
    g = scenario.geometry
    f = scenario.carrier_hz
    cond = scenario.conditions
    t = cond.temperature
    if nf_db is not None:
        n_tx = K_B * t * 10.0 ** (nf_db / 10.0)
    else:
        n_tx = float(tx_noise_psd(scenario, np.array([f]), check_range=True)[0])
    a_pl = channel.total_path_loss_db(g.distance, f, cond) if pathloss_db is None else pathloss_db
    n_rx = noise.tx_noise_at_rx_psd(n_tx, g.tx_antenna_gain, g.rx_antenna_gain, a_pl)
    return noise.snr_degradation_db(n_rx, noise.baseline_noise_psd(g.distance, f, cond))


def parametric_grid(axis1: AxisSpec, axis2: AxisSpec, scenario: LinkScenario) -> ParametricGrid:
    """SNR degradation over a 2-D design grid.

    Axis kinds: ``nf_db_override`` (literal ``k*T*F`` TX noise, no chain
    gain), ``frequency``, ``total_pathloss_db_override`` and ``distance``.
    """
    if axis1.kind == axis2.kind:
        raise DomainError("grid axes must differ")
    v1, v2 = axis1.values(), axis2.values()
    out = np.empty((v1.size, v2.size))
    for i, a in enumerate(v1):
        for j, b in enumerate(v2):
            sc = scenario
            kw = {}
            for kind, val in ((axis1.kind, a), (axis2.kind, b)):
                if kind == "frequency":
                    sc = sc.replace(carrier_hz=float(val))
                elif kind == "distance":
                    sc = sc.replace(distance=float(val))
                elif kind == "nf_db_override":
                    kw["nf_db"] = float(val)
                else:
                    kw["pathloss_db"] = float(val)
            out[i, j] = grid_cell_degradation_db(sc, **kw)
    return ParametricGrid(axis1, axis2, out)
