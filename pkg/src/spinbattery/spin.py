"""Spin-j operator matrices and their embedding into an N-site chain.

Spin quantum numbers are carried as the integer ``two_j = 2j`` so that
half-integer spins never go through floating point.  The local basis is
ordered by descending magnetization, ``m = j, j-1, ..., -j``; the last basis
vector of every site is the fully-down state.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from .errors import ConfigError


def parse_spin(j) -> int:
    """Return ``2j`` for a spin given as int, float, Fraction or string like ``"3/2"``."""
    try:
        value = Fraction(j) if not isinstance(j, float) else Fraction(j).limit_denominator(64)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse spin quantum number {j!r}", field="j") from exc
    two_j = 2 * value
    if two_j.denominator != 1 or two_j <= 0:
        raise ConfigError(f"spin j must be a positive multiple of 1/2, got {j!r}", field="j")
    return int(two_j)


def spin_label(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


@dataclass(frozen=True)
class SpinOperators:
    two_j: int
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def splus(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    @property
    def sminus(self) -> np.ndarray:
        return self.sx - 1j * self.sy


@lru_cache(maxsize=None)
def _ladder(two_j: int):
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    # <m+1| S+ |m> sits one row above the diagonal in descending-m order
    sp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1)
    return m, sp


def spin_operators(two_j: int) -> SpinOperators:
    """Spin matrices for spin ``two_j / 2`` built from the ladder operators."""
    if int(two_j) != two_j or two_j < 1:
        raise ConfigError(f"two_j must be a positive integer, got {two_j!r}", field="two_j")
    two_j = int(two_j)
    m, sp = _ladder(two_j)
    sp = sp.astype(complex)
    sm = sp.conj().T
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    sz = np.diag(m).astype(complex)
    for a in (sx, sy, sz):
        a.flags.writeable = False
    return SpinOperators(two_j, sx, sy, sz)


def build_spin_operators(j) -> SpinOperators:
    """Spin matrices for a spin given as ``1/2``, ``Fraction(3, 2)``, ``"5/2"``, ``1``..."""
    return spin_operators(parse_spin(j))


def embed_at_site(op: np.ndarray, k: int, n_sites: int) -> np.ndarray:
    """``I^{(k)} (x) op (x) I^{(N-1-k)}`` as a dense matrix."""
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"local operator must be square, got shape {op.shape}")
    if n_sites < 1 or not 0 <= k < n_sites:
        raise ValueError(f"site index {k} out of range for a chain of {n_sites} sites")
    d = op.shape[0]
    left = np.eye(d ** k, dtype=op.dtype)
    right = np.eye(d ** (n_sites - 1 - k), dtype=op.dtype)
    return np.kron(np.kron(left, op), right)


def two_site_term(op_a: np.ndarray, op_b: np.ndarray, k: int, n_sites: int) -> np.ndarray:
    """``op_a`` on site ``k`` times ``op_b`` on site ``k + 1``."""
    op_a, op_b = np.asarray(op_a), np.asarray(op_b)
    if op_a.shape != op_b.shape:
        raise ValueError("two-site operators must act on the same local dimension")
    if not 0 <= k < n_sites - 1:
        raise ValueError(f"bond index {k} out of range for a chain of {n_sites} sites")
    d = op_a.shape[0]
    dtype = np.result_type(op_a, op_b)
    left = np.eye(d ** k, dtype=dtype)
    right = np.eye(d ** (n_sites - 2 - k), dtype=dtype)
    return reduce(np.kron, (left, op_a, op_b, right))


def product_state(local: np.ndarray, n_sites: int) -> np.ndarray:
    return reduce(np.kron, [np.asarray(local)] * n_sites)
