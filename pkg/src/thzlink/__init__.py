"""Sub-THz / THz point-to-point link budgets with transmitter noise.

Modules
-------
quantities
    Physical constants, dB conversions and domain errors.
atmosphere
    Line-by-line oxygen and water-vapour absorption, transmittance and
    atmospheric noise.
txchain
    Two-stage transmitter chains, Friis cascade and saturated power.
channel
    Free-space and absorption path loss.
noise
    Receiver noise sources and the TX-noise dominance algebra.
linkbudget
    Scenario evaluation, sweeps and parametric grids.
casestudies
    Ready-made short/medium/long and environmental studies.
report, cli
    File formats and the ``thzlink`` command line.
"""

__version__ = "0.1.0"

from .atmosphere import AtmosphericConditions, PRESETS, get_conditions  # noqa: E402
from .channel import LinkGeometry  # noqa: E402
from .linkbudget import LinkScenario, evaluate, preset_scenario  # noqa: E402
from .quantities import DomainError  # noqa: E402
from .txchain import get_technology  # noqa: E402

__all__ = [
    "__version__",
    "AtmosphericConditions",
    "PRESETS",
    "get_conditions",
    "LinkGeometry",
    "LinkScenario",
    "evaluate",
    "preset_scenario",
    "DomainError",
    "get_technology",
]
