"""One battery configuration end to end: Hamiltonian, initial state, charger, P_max."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import PowerResult, maximize_power
from .errors import ConfigError
from .hamiltonians import (PAULI_SCALE, BBHParams, XYParams, build_bbh_charger, build_bbh_hamiltonian,
                           build_xy_charger, build_xy_hamiltonian, check_dimension, normalize_spectrum)
from .states import ground_state, thermal_state

MODELS = ("xy", "bbh")


@dataclass(frozen=True)
class BatteryModel:
    """Model parameters shared by every coupling realization.

    ``beta=None`` prepares the ground state, otherwise the Gibbs state at
    dimensionless inverse temperature ``beta``.
    """
    model: str = "xy"
    n_sites: int = 4
    two_j: int = 1
    gamma: float = 0.0
    phi: float = 0.0
    h: float = 1.0
    omega: float = 1.0
    beta: Optional[float] = None
    spin_scale: float = PAULI_SCALE
    thermal_on_raw: bool = False
    bbh_charger_omega_scope: str = "full"
    t_max: Optional[float] = None
    coarse_step: float = 0.01
    refine_tol: float = 1e-5
    max_dim: Optional[int] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}", field="model")
        if self.n_sites < 2:
            raise ConfigError("chain needs at least two sites", field="n")
        if int(self.two_j) != self.two_j or self.two_j < 1:
            raise ConfigError(f"two_j must be a positive integer, got {self.two_j!r}", field="two_j")
        if self.omega == 0:
            raise ConfigError("charging strength omega must be non-zero", field="omega")
        if self.beta is not None and not self.beta >= 0:
            raise ConfigError(f"beta must be >= 0, got {self.beta}", field="beta")

    def replace(self, **changes) -> "BatteryModel":
        return dataclasses.replace(self, **changes)

    @property
    def n_bonds(self) -> int:
        return self.n_sites - 1

    def check_dimension(self) -> int:
        return check_dimension(self.two_j, self.n_sites, self.max_dim)

    def tag(self) -> dict:
        return {"model": self.model, "n": self.n_sites, "two_j": self.two_j, "gamma": self.gamma,
                "phi": self.phi, "h": self.h, "beta": self.beta}

    def hamiltonian(self, couplings: Sequence[float]) -> np.ndarray:
        if self.model == "xy":
            p = XYParams(self.n_sites, self.two_j, couplings, self.gamma, self.h, self.spin_scale)
            return build_xy_hamiltonian(p, self.max_dim)
        p = BBHParams(self.n_sites, self.two_j, couplings, self.phi, self.h, self.spin_scale)
        return build_bbh_hamiltonian(p, self.max_dim)

    def battery(self, couplings: Sequence[float]):
        tag = dict(self.tag(), couplings=[float(c) for c in np.atleast_1d(couplings)])
        return normalize_spectrum(self.hamiltonian(couplings), tag)

    def charger(self):
        if self.model == "xy":
            return build_xy_charger(self.omega, self.n_sites, self.two_j, self.spin_scale, self.max_dim)
        return build_bbh_charger(self.omega, self.n_sites, self.two_j, self.spin_scale,
                                 self.bbh_charger_omega_scope, self.max_dim)

    def initial_state(self, H):
        if self.beta is None:
            return ground_state(H)
        return thermal_state(H, self.beta, raw=self.thermal_on_raw)

    def max_power(self, couplings: Sequence[float]) -> PowerResult:
        H = self.battery(couplings)
        return maximize_power(H, self.initial_state(H), self.charger(), t_max=self.t_max,
                              coarse_step=self.coarse_step, refine_tol=self.refine_tol)

    def uniform(self, lam: float) -> list:
        return [float(lam)] * self.n_bonds
