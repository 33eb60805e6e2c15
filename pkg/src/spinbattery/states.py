"""Initial battery states: ground and canonical equilibrium states."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateGroundStateWarning
from .hamiltonians import NormalizedHamiltonian

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray
    purity: float

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "DensityOperator":
        rho = np.asarray(rho)
        purity = float(np.real(np.einsum("ij,ji->", rho, rho)))
        return cls(rho, purity)

    @classmethod
    def from_pure(cls, psi: np.ndarray) -> "DensityOperator":
        psi = np.asarray(psi)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), 1.0)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def fidelity_with_pure(self, psi: np.ndarray) -> float:
        return float(np.real(psi.conj() @ self.matrix @ psi))


def as_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)


def ground_vector(H: NormalizedHamiltonian) -> np.ndarray:
    """Lowest eigenvector; a degenerate ground level is resolved deterministically.

    For a degenerate level the result is the normalized projection of the first
    computational basis vector that overlaps the ground space, with its largest
    component made real and positive.
    """
    e = H.energies
    g = int(np.count_nonzero(e - e[0] <= DEGENERACY_TOL * max(1.0, abs(e[0]))))
    if g == 1:
        return H.eigenvectors[:, 0]
    warnings.warn(f"ground level is {g}-fold degenerate; picking a deterministic representative",
                  DegenerateGroundStateWarning, stacklevel=2)
    V = H.eigenvectors[:, :g]
    for i in range(V.shape[0]):
        psi = V @ V[i].conj()
        norm = np.linalg.norm(psi)
        if norm > 1e-6:
            psi = psi / norm
            k = int(np.argmax(np.abs(psi)))
            return psi * (abs(psi[k]) / psi[k])
    raise RuntimeError("empty ground space")  # pragma: no cover


def ground_state(H: NormalizedHamiltonian) -> DensityOperator:
    return DensityOperator.from_pure(ground_vector(H))


def thermal_state(H: NormalizedHamiltonian, beta: float, raw: bool = False) -> DensityOperator:
    """Gibbs state ``exp(-beta H) / Z`` from the eigendecomposition of ``H``.

    ``beta`` is dimensionless and acts on the normalized spectrum unless ``raw``
    is set, in which case the original (pre-normalization) energies are used.
    """
    if not np.isfinite(beta) or beta < 0:
        raise ConfigError(f"inverse temperature must be >= 0, got {beta}", field="beta")
    e = H.energies
    if raw:
        e = 0.5 * (e * (H.e_max - H.e_min) + H.e_max + H.e_min)
    w = np.exp(-beta * (e - e[0]))
    w /= w.sum()
    V = H.eigenvectors
    rho = (V * w) @ V.conj().T
    return DensityOperator(rho, float(np.sum(w ** 2)))
