"""Figure rendering for rydsim CSV output.

Three panel types are supported, matching the CSV schemas emitted by the
rydsim command line tool:

- ``pulses``      from ``rydsim synth``    (t_us, omega_rad_per_us, ...)
- ``tau_scan``    from ``rydsim tau-scan`` (scheme, V_rad_per_us, ...)
- ``robustness``  from ``rydsim sweep``    (scheme, axis, deviation, fidelity)

Frequencies are displayed in units of 2*pi MHz (rad/us divided by 2*pi).
"""

from figplots.panels import (
    PANEL_SCHEMAS,
    PlotSpec,
    SchemaError,
    load_table,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "PANEL_SCHEMAS",
    "PlotSpec",
    "SchemaError",
    "load_table",
    "render",
    "__version__",
]
