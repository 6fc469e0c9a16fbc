"""Magnon-photon-phonon steady states, spectra and dynamics."""

from ._core import (
    Params,
    critical_points,
    eta_sq_window,
    find_exceptional_points,
    integrate,
    param_keys,
    potential,
    run_cli,
    spectrum,
    steady_states,
    sweep,
)

__all__ = [
    "Params",
    "critical_points",
    "eta_sq_window",
    "find_exceptional_points",
    "integrate",
    "param_keys",
    "potential",
    "run_cli",
    "spectrum",
    "steady_states",
    "sweep",
]
