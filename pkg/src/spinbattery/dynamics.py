"""Charging dynamics: unitary evolution, stored work, maximum average power, ergotropy.

The charger is a sum of identical single-site terms, so its eigenbasis is a
product basis and its eigenvalues are sums of local eigenvalues.  Stored work
is therefore a finite trigonometric sum

    W(t) = Re sum_nu A_nu (exp(-i nu t) - 1)

over the differences ``nu`` of charger eigenvalues; :class:`WorkSpectrum`
holds ``(nu, A_nu)`` and evaluates W on arbitrary time grids.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import SearchWindowWarning
from .hamiltonians import ChargerHamiltonian, NormalizedHamiltonian
from .states import DensityOperator, as_matrix

FREQ_DECIMALS = 9


def conjugate_sites(mat: np.ndarray, u: np.ndarray, n_sites: int) -> np.ndarray:
    """Return ``U mat U^dagger`` with ``U = u (x) u (x) ... (x) u`` (``n_sites`` factors)."""
    d = u.shape[0]
    D = d ** n_sites
    x = np.asarray(mat).reshape((d,) * (2 * n_sites))
    uc = u.conj()
    for k in range(n_sites):
        x = np.moveaxis(np.tensordot(u, x, axes=([1], [k])), 0, k)
        x = np.moveaxis(np.tensordot(x, uc, axes=([n_sites + k], [1])), -1, n_sites + k)
    return x.reshape(D, D)


def local_propagator(charger: ChargerHamiltonian, t: float) -> np.ndarray:
    mu, v = charger.local_eigh
    return (v * np.exp(-1j * mu * t)) @ v.conj().T


def evolve(rho0, charger: ChargerHamiltonian, t: float) -> DensityOperator:
    """``rho(t) = U rho(0) U^dagger`` with ``U = exp(-i H_c t)``."""
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    rho = as_matrix(rho0)
    if rho.shape[0] != charger.dim:
        raise ValueError(f"state dimension {rho.shape[0]} does not match charger {charger.dim}")
    out = conjugate_sites(rho, local_propagator(charger, t), charger.n_sites)
    purity = rho0.purity if isinstance(rho0, DensityOperator) else None
    return DensityOperator(out, purity) if purity is not None else DensityOperator.from_matrix(out)


def work(H: NormalizedHamiltonian, rho_t, rho_0) -> float:
    """``Tr(H rho_t) - Tr(H rho_0)``."""
    a, b = as_matrix(rho_t), as_matrix(rho_0)
    if a.shape != b.shape or a.shape[0] != H.dim:
        raise ValueError("dimension mismatch between Hamiltonian and states")
    w = np.einsum("ij,ji->", H.matrix, a) - np.einsum("ij,ji->", H.matrix, b)
    if abs(np.imag(w)) > 1e-10:
        raise ValueError(f"work has a non-negligible imaginary part {np.imag(w):.3e}")
    return float(np.real(w))


def ergotropy(H: NormalizedHamiltonian, rho) -> float:
    """Energy above the passive state with the same spectrum as ``rho``."""
    rho = as_matrix(rho)
    r = np.linalg.eigvalsh(rho)[::-1]
    return H.expectation(rho) - float(np.dot(r, H.energies))


@dataclass(frozen=True)
class WorkSpectrum:
    frequencies: np.ndarray
    amplitudes: np.ndarray
    initial_energy: float

    def work(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        phase = np.exp(-1j * np.multiply.outer(t, self.frequencies)) - 1.0
        return np.real(phase @ self.amplitudes)

    def power(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        w = self.work(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = np.where(t > 0, w / np.where(t > 0, t, 1.0), 0.0)
        return p


def _unique_levels(values):
    keys = np.round(values, FREQ_DECIMALS)
    levels, inverse = np.unique(keys, return_inverse=True)
    return levels, inverse.ravel()


def work_spectrum(H: NormalizedHamiltonian, rho0, charger: ChargerHamiltonian) -> WorkSpectrum:
    rho = as_matrix(rho0)
    if rho.shape[0] != H.dim or charger.dim != H.dim:
        raise ValueError("dimension mismatch between Hamiltonian, state and charger")
    mu, v = charger.local_eigh
    n = charger.n_sites
    energies = np.zeros(1)
    for _ in range(n):
        energies = np.add.outer(energies, mu).ravel()
    levels, idx = _unique_levels(energies)
    vd = v.conj().T
    h_rot = conjugate_sites(H.matrix, vd, n)
    r_rot = conjugate_sites(rho, vd, n)
    weights = r_rot * h_rot.T
    onehot = np.zeros((H.dim, levels.size))
    onehot[np.arange(H.dim), idx] = 1.0
    pair = onehot.T @ weights @ onehot
    nus = np.subtract.outer(levels, levels).ravel()
    freqs, fidx = _unique_levels(nus)
    amps = np.bincount(fidx, weights=pair.real.ravel(), minlength=freqs.size) \
        + 1j * np.bincount(fidx, weights=pair.imag.ravel(), minlength=freqs.size)
    keep = freqs != 0.0
    e0 = float(np.real(weights.sum()))
    return WorkSpectrum(freqs[keep], amps[keep], e0)


@dataclass(frozen=True)
class WorkCurve:
    times: np.ndarray
    work: np.ndarray
    power: np.ndarray
    model_tag: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PowerResult:
    p_max: float
    t_star: float
    w_at_tstar: float
    curve: WorkCurve


def power_curve(H, rho0, charger, t_max: float, n_grid: int, spectrum: WorkSpectrum | None = None) -> WorkCurve:
    """Work and average power on ``n_grid`` uniform points of ``[0, t_max]``.

    Power at ``t = 0`` is set to its limit value 0.
    """
    if t_max <= 0 or n_grid < 2:
        raise ValueError("need t_max > 0 and n_grid >= 2")
    spec = spectrum or work_spectrum(H, rho0, charger)
    t = np.linspace(0.0, t_max, n_grid)
    return WorkCurve(t, spec.work(t), spec.power(t), dict(H.model_tag))


def default_window(omega: float) -> float:
    return 4 * math.pi / abs(omega)


def maximize_power(H, rho0, charger, t_max: float | None = None, coarse_step: float = 0.01,
                   refine_tol: float = 1e-5, spectrum: WorkSpectrum | None = None,
                   n_candidates: int = 3) -> PowerResult:
    """``max_t W(t)/t`` by a coarse scan over ``(0, t_max]`` plus bounded Brent refinement.

    The best ``n_candidates`` interior local maxima of the scan are each refined
    and the global best is returned.
    """
    if t_max is None:
        t_max = default_window(charger.omega)
    if t_max <= 0 or coarse_step <= 0:
        raise ValueError("need t_max > 0 and coarse_step > 0")
    spec = spectrum or work_spectrum(H, rho0, charger)
    n = max(2, int(math.floor(t_max / coarse_step + 1e-9)))
    t = coarse_step * np.arange(1, n + 1)
    p = spec.power(t)
    curve = WorkCurve(np.concatenate(([0.0], t)), np.concatenate(([0.0], spec.work(t))),
                      np.concatenate(([0.0], p)), dict(H.model_tag))

    is_peak = np.r_[p[0] >= p[1], (p[1:-1] >= p[:-2]) & (p[1:-1] >= p[2:]), p[-1] >= p[-2]]
    peaks = np.flatnonzero(is_peak)
    peaks = peaks[np.argsort(-p[peaks], kind="stable")][:n_candidates]

    best_t, best_p = float(t[peaks[0]]), float(p[peaks[0]])
    for i in peaks:
        lo = max(t[i] - coarse_step, 0.5 * coarse_step)
        hi = min(t[i] + coarse_step, t_max)
        res = minimize_scalar(lambda s: -float(spec.power(s)), bounds=(lo, hi),
                              method="bounded", options={"xatol": refine_tol})
        if -res.fun > best_p:
            best_t, best_p = float(res.x), float(-res.fun)
    if best_t >= t_max - coarse_step:
        warnings.warn(f"maximum power found at the window edge t={best_t:.4g}; widen t_max",
                      SearchWindowWarning, stacklevel=2)
    w_star = float(spec.work(best_t))
    return PowerResult(w_star / best_t, best_t, w_star, curve)
