from fractions import Fraction

import numpy as np
import pytest

from spinbattery.errors import ConfigError
from spinbattery.spin import (build_spin_operators, embed_at_site, parse_spin, spin_operators,
                              two_site_term)

from conftest import PAULI_X, PAULI_Y, PAULI_Z, SUPPORTED_TWO_J


def comm(a, b):
    return a @ b - b @ a


def test_spin_half_is_half_pauli():
    ops = build_spin_operators(Fraction(1, 2))
    np.testing.assert_allclose(ops.sx, PAULI_X / 2, atol=1e-15)
    np.testing.assert_allclose(ops.sy, PAULI_Y / 2, atol=1e-15)
    np.testing.assert_allclose(ops.sz, PAULI_Z / 2, atol=1e-15)


def test_spin_one_by_hand():
    ops = build_spin_operators(1)
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(ops.sz, np.diag([1, 0, -1]), atol=1e-15)
    np.testing.assert_allclose(ops.sx, [[0, r, 0], [r, 0, r], [0, r, 0]], atol=1e-15)


def test_spin_three_halves_casimir():
    ops = build_spin_operators("3/2")
    np.testing.assert_allclose(np.diag(ops.sz).real, [1.5, 0.5, -0.5, -1.5])
    casimir = ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz
    np.testing.assert_allclose(casimir, 15 / 4 * np.eye(4), atol=1e-12)


@pytest.mark.parametrize("two_j", SUPPORTED_TWO_J)
def test_algebra(two_j):
    ops = spin_operators(two_j)
    j = two_j / 2
    for a in (ops.sx, ops.sy, ops.sz):
        assert np.max(np.abs(a - a.conj().T)) < 1e-12
    assert np.max(np.abs(comm(ops.sx, ops.sy) - 1j * ops.sz)) < 1e-12
    assert np.max(np.abs(comm(ops.sy, ops.sz) - 1j * ops.sx)) < 1e-12
    assert np.max(np.abs(comm(ops.sz, ops.sx) - 1j * ops.sy)) < 1e-12
    casimir = ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz
    assert np.max(np.abs(casimir - j * (j + 1) * np.eye(two_j + 1))) < 1e-12
    np.testing.assert_array_equal(np.diag(ops.sz).real, j - np.arange(two_j + 1))


@pytest.mark.parametrize("bad", [0, -1, 0.3, "1/3", Fraction(2, 3), "x"])
def test_rejects_invalid_spin(bad):
    with pytest.raises(ConfigError):
        build_spin_operators(bad)


def test_parse_spin_forms():
    assert parse_spin(0.5) == 1
    assert parse_spin("5/2") == 5
    assert parse_spin(3) == 6


def test_embed_identity():
    np.testing.assert_array_equal(embed_at_site(np.eye(2), 1, 3), np.eye(8))


def test_embed_sz_by_hand():
    sz = spin_operators(1).sz
    np.testing.assert_allclose(np.diag(embed_at_site(sz, 0, 2)).real, [0.5, 0.5, -0.5, -0.5])
    np.testing.assert_allclose(np.diag(embed_at_site(sz, 1, 2)).real, [0.5, -0.5, 0.5, -0.5])


def test_two_site_terms_by_hand():
    ops = spin_operators(1)
    np.testing.assert_array_equal(two_site_term(np.eye(2), np.eye(2), 0, 2), np.eye(4))
    np.testing.assert_allclose(np.diag(two_site_term(ops.sz, ops.sz, 0, 2)).real,
                               [0.25, -0.25, -0.25, 0.25])
    np.testing.assert_allclose(two_site_term(ops.sx, ops.sx, 0, 2), np.fliplr(np.eye(4)) / 4)


def test_embedding_errors():
    with pytest.raises(ValueError):
        embed_at_site(np.eye(2), 3, 3)
    with pytest.raises(ValueError):
        embed_at_site(np.ones((2, 3)), 0, 2)
    with pytest.raises(ValueError):
        two_site_term(np.eye(2), np.eye(2), 2, 3)
    with pytest.raises(ValueError):
        two_site_term(np.eye(2), np.eye(3), 0, 3)


@pytest.mark.parametrize("two_j", [1, 2, 3])
def test_embedding_preserves_hermiticity_and_norm(two_j, rng):
    d = two_j + 1
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a = a + a.conj().T
    for k in range(3):
        e = embed_at_site(a, k, 3)
        assert np.max(np.abs(e - e.conj().T)) < 1e-12
        assert np.isclose(np.linalg.norm(e, 2), np.linalg.norm(a, 2))


@pytest.mark.parametrize("two_j", [1, 2])
def test_different_sites_commute(two_j):
    ops = spin_operators(two_j)
    for k in range(3):
        for kk in range(3):
            if k != kk:
                for a in (ops.sx, ops.sy, ops.sz):
                    for b in (ops.sx, ops.sy, ops.sz):
                        x, y = embed_at_site(a, k, 3), embed_at_site(b, kk, 3)
                        assert np.array_equal(x @ y, y @ x)
