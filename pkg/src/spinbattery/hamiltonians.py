"""Battery and charger Hamiltonians for the spin-j XY and bilinear-biquadratic chains.

Site operators entering the model Hamiltonians are ``S = spin_scale * J`` where
``J`` are the ordinary spin matrices from :mod:`spinbattery.spin`.  The default
``spin_scale = 2`` makes ``S`` the Pauli matrices at j = 1/2 and fixes the
relative weight of field, coupling and charging terms for every j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateSpectrumError, ResourceLimitError
from .spin import embed_at_site, spin_label, spin_operators

PAULI_SCALE = 2.0
MAX_DIM = 4096


def check_dimension(two_j: int, n_sites: int, max_dim: int | None = None) -> int:
    cap = MAX_DIM if max_dim is None else max_dim
    dim = (two_j + 1) ** n_sites
    if dim > cap:
        raise ResourceLimitError(
            f"Hilbert space dimension {dim} for j={spin_label(two_j)}, N={n_sites} exceeds cap {cap}",
            two_j=two_j, n_sites=n_sites, dim=dim)
    return dim


def _couplings(couplings, n_sites):
    lam = np.atleast_1d(np.asarray(couplings, dtype=float))
    if lam.size == 1 and n_sites > 2:
        lam = np.full(n_sites - 1, lam[0])
    if lam.shape != (n_sites - 1,):
        raise ConfigError(f"need {n_sites - 1} couplings for N={n_sites}, got {lam.size}",
                          field="couplings")
    if not np.all(np.isfinite(lam)):
        raise ConfigError("couplings must be finite", field="couplings")
    return lam


@dataclass(frozen=True)
class XYParams:
    n_sites: int
    two_j: int
    couplings: Sequence[float]
    gamma: float = 0.0
    h: float = 1.0
    spin_scale: float = PAULI_SCALE

    def __post_init__(self):
        if self.n_sites < 2:
            raise ConfigError("chain needs at least two sites", field="n")
        object.__setattr__(self, "couplings", tuple(_couplings(self.couplings, self.n_sites)))


@dataclass(frozen=True)
class BBHParams:
    n_sites: int
    two_j: int
    couplings: Sequence[float]
    phi: float = 0.0
    h: float = 1.0
    spin_scale: float = PAULI_SCALE

    def __post_init__(self):
        if self.n_sites < 2:
            raise ConfigError("chain needs at least two sites", field="n")
        object.__setattr__(self, "couplings", tuple(_couplings(self.couplings, self.n_sites)))


def embed_bond(op: np.ndarray, k: int, n_sites: int) -> np.ndarray:
    """Embed a two-site operator (``d^2 x d^2``) on the bond ``(k, k+1)``."""
    d = int(round(np.sqrt(op.shape[0])))
    if not 0 <= k < n_sites - 1:
        raise ValueError(f"bond index {k} out of range for a chain of {n_sites} sites")
    left = np.eye(d ** k, dtype=op.dtype)
    right = np.eye(d ** (n_sites - 2 - k), dtype=op.dtype)
    return np.kron(np.kron(left, op), right)


def _energy_unit(h):
    # couplings are lambda = J/|h|; without a field they are J itself
    return abs(h) if h != 0 else 1.0


def _site_ops(two_j, scale):
    ops = spin_operators(two_j)
    return scale * ops.sx, scale * ops.sy, scale * ops.sz


def _field(sz, n_sites, h):
    d = sz.shape[0]
    diag = np.zeros(d ** n_sites)
    local = np.real(np.diag(sz))
    for k in range(n_sites):
        diag += np.kron(np.kron(np.ones(d ** k), local), np.ones(d ** (n_sites - 1 - k)))
    return np.diag(0.5 * h * diag).astype(complex)


def build_xy_hamiltonian(p: XYParams, max_dim: int | None = None) -> np.ndarray:
    """Open XY chain: ``(h/2) sum S^z + (1/4) sum J_k [(1+g) S^x S^x + (1-g) S^y S^y]``.

    ``J_k = lambda_k |h|`` (``J_k = lambda_k`` when ``h = 0``).  The result is not normalized.
    """
    check_dimension(p.two_j, p.n_sites, max_dim)
    sx, sy, sz = _site_ops(p.two_j, p.spin_scale)
    H = _field(sz, p.n_sites, p.h)
    bond = (1 + p.gamma) * np.kron(sx, sx) + (1 - p.gamma) * np.kron(sy, sy)
    for k, lam in enumerate(p.couplings):
        if lam != 0.0:
            H += 0.25 * lam * _energy_unit(p.h) * embed_bond(bond, k, p.n_sites)
    return H


def build_bbh_hamiltonian(p: BBHParams, max_dim: int | None = None) -> np.ndarray:
    """Bilinear-biquadratic chain with a longitudinal field.

    ``sum J_k [cos(phi) S.S + sin(phi) (S.S)^2] + (h/2) sum S^z``.
    """
    check_dimension(p.two_j, p.n_sites, max_dim)
    sx, sy, sz = _site_ops(p.two_j, p.spin_scale)
    H = _field(sz, p.n_sites, p.h)
    dot = np.kron(sx, sx) + np.kron(sy, sy) + np.kron(sz, sz)
    bond = np.cos(p.phi) * dot + np.sin(p.phi) * (dot @ dot)
    for k, lam in enumerate(p.couplings):
        if lam != 0.0:
            H += lam * _energy_unit(p.h) * embed_bond(bond, k, p.n_sites)
    return H


def hermitian_eigh(H: np.ndarray):
    """``numpy.linalg.eigh`` that drops an identically-zero imaginary part first."""
    if np.iscomplexobj(H) and not np.any(H.imag):
        H = H.real
    return np.linalg.eigh(H)


@dataclass(frozen=True)
class NormalizedHamiltonian:
    """Battery Hamiltonian with its spectrum mapped onto [-1, 1].

    ``energies`` and ``eigenvectors`` are the eigendecomposition of ``matrix``
    (ascending); ``e_max`` and ``e_min`` refer to the raw input.
    """
    matrix: np.ndarray
    e_max: float
    e_min: float
    energies: np.ndarray
    eigenvectors: np.ndarray
    model_tag: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, rho: np.ndarray) -> float:
        return float(np.real(np.einsum("ij,ji->", self.matrix, rho)))


def normalize_spectrum(H: np.ndarray, model_tag: dict | None = None) -> NormalizedHamiltonian:
    """Apply ``[2H - (e_max + e_min) I] / (e_max - e_min)`` using a full diagonalization."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got shape {H.shape}")
    if np.iscomplexobj(H) and not np.any(H.imag):
        H = H.real
    evals, evecs = hermitian_eigh(H)
    e_min, e_max = float(evals[0]), float(evals[-1])
    width = e_max - e_min
    if width <= 1e-12 * max(1.0, abs(e_max), abs(e_min)):
        raise DegenerateSpectrumError("Hamiltonian is proportional to the identity; cannot normalize")
    matrix = (2 * H - (e_max + e_min) * np.eye(H.shape[0])) / width
    energies = (2 * evals - (e_max + e_min)) / width
    energies[0], energies[-1] = -1.0, 1.0
    return NormalizedHamiltonian(matrix, e_max, e_min, energies, evecs, dict(model_tag or {}))


@dataclass(frozen=True)
class ChargerHamiltonian:
    """Sum of identical single-site terms ``local`` over ``n_sites`` sites."""
    local: np.ndarray
    n_sites: int
    omega: float
    form: str

    @property
    def dim(self) -> int:
        return self.local.shape[0] ** self.n_sites

    @cached_property
    def matrix(self) -> np.ndarray:
        return sum(embed_at_site(self.local, k, self.n_sites) for k in range(self.n_sites))

    @cached_property
    def local_eigh(self):
        return hermitian_eigh(self.local)


def build_xy_charger(omega: float, n_sites: int, two_j: int, spin_scale: float = PAULI_SCALE,
                     max_dim: int | None = None) -> ChargerHamiltonian:
    """Linear transverse charger ``(omega/2) sum S^x``."""
    check_dimension(two_j, n_sites, max_dim)
    sx = spin_scale * spin_operators(two_j).sx
    return ChargerHamiltonian(0.5 * omega * sx, n_sites, omega, "linear")


def build_bbh_charger(omega: float, n_sites: int, two_j: int, spin_scale: float = PAULI_SCALE,
                      omega_scope: str = "full", max_dim: int | None = None) -> ChargerHamiltonian:
    """Quadratic charger ``omega sum [S^x/2 + (S^x)^2/4]``.

    With ``omega_scope="linear-only"`` the strength multiplies ``S^x/2`` alone.
    """
    check_dimension(two_j, n_sites, max_dim)
    sx = spin_scale * spin_operators(two_j).sx
    if omega_scope == "full":
        local = omega * (sx / 2 + sx @ sx / 4)
    elif omega_scope == "linear-only":
        local = omega * sx / 2 + sx @ sx / 4
    else:
        raise ConfigError(f"unknown omega scope {omega_scope!r}", field="bbh_charger_omega_scope")
    return ChargerHamiltonian(local, n_sites, omega, "quadratic")
