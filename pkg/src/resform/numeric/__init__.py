"""Floating-point checks: points on X, shell masses, periods."""

from .periods import agm_elliptic_oracle, period_integral, real_period
from .points import PointOnX, find_point_on_X, isolatedness_probe
from .shells import ProbeResult, l2_probe, sample_shell, shell_mass, shell_mass_curve

__all__ = [
    "PointOnX",
    "ProbeResult",
    "agm_elliptic_oracle",
    "find_point_on_X",
    "isolatedness_probe",
    "l2_probe",
    "period_integral",
    "real_period",
    "sample_shell",
    "shell_mass",
    "shell_mass_curve",
]
