"""Exact-diagonalization engine for spin-j quantum batteries."""
__version__ = "0.1.0"

from .dynamics import (PowerResult, WorkCurve, ergotropy, evolve, maximize_power, power_curve,
                       work, work_spectrum)
from .hamiltonians import (BBHParams, ChargerHamiltonian, NormalizedHamiltonian, XYParams,
                           build_bbh_charger, build_bbh_hamiltonian, build_xy_charger,
                           build_xy_hamiltonian, normalize_spectrum)
from .model import BatteryModel
from .spin import build_spin_operators, embed_at_site, spin_operators, two_site_term
from .states import DensityOperator, ground_state, thermal_state

__all__ = [
    "BBHParams", "BatteryModel", "ChargerHamiltonian", "DensityOperator", "NormalizedHamiltonian",
    "PowerResult", "WorkCurve", "XYParams", "build_bbh_charger", "build_bbh_hamiltonian",
    "build_spin_operators", "build_xy_charger", "build_xy_hamiltonian", "embed_at_site", "ergotropy",
    "evolve", "ground_state", "maximize_power", "normalize_spectrum", "power_curve", "spin_operators",
    "thermal_state", "two_site_term", "work", "work_spectrum",
]
