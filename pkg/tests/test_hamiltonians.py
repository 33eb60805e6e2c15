import itertools

import numpy as np
import pytest

from spinbattery.errors import ConfigError, DegenerateSpectrumError, ResourceLimitError
from spinbattery.hamiltonians import (BBHParams, XYParams, build_bbh_charger, build_bbh_hamiltonian,
                                      build_xy_charger, build_xy_hamiltonian, check_dimension,
                                      normalize_spectrum)
from spinbattery.spin import embed_at_site, spin_operators

from conftest import PAULI_X, xx_battery


def total(op, n):
    return sum(embed_at_site(op, k, n) for k in range(n))


def spectrum(m):
    return np.linalg.eigvalsh(m)


@pytest.mark.parametrize("lam", [0.1, 0.2, 0.5])
def test_two_spin_half_xx_normalized_matrix(lam):
    H = xx_battery(1, 2, lam)
    expected = np.array([[1, 0, 0, 0], [0, 0, lam / 2, 0], [0, lam / 2, 0, 0], [0, 0, 0, -1]])
    np.testing.assert_allclose(H.matrix, expected, atol=1e-14)


def test_two_spin_one_xx_normalized_matrix():
    lam = 0.3
    # basis |ab>, a, b in {0, 1, 2} with m = 1 - a
    expected = np.zeros((9, 9))
    for a, b in itertools.product(range(3), repeat=2):
        expected[3 * a + b, 3 * a + b] = (2 - a - b) / 2
    for (a, b), (c, d) in [((0, 1), (1, 0)), ((0, 2), (1, 1)), ((1, 1), (2, 0)), ((1, 2), (2, 1))]:
        expected[3 * a + b, 3 * c + d] = expected[3 * c + d, 3 * a + b] = lam / 2
    H = xx_battery(2, 2, lam)
    np.testing.assert_allclose(H.matrix, expected, atol=1e-14)
    assert H.e_max == pytest.approx(2.0) and H.e_min == pytest.approx(-2.0)


@pytest.mark.parametrize("two_j", [1, 2, 3])
def test_noninteracting_limit_is_diagonal_field(two_j):
    H = build_xy_hamiltonian(XYParams(3, two_j, [0.0, 0.0], gamma=0.3, h=1.0))
    sz = 2 * spin_operators(two_j).sz
    np.testing.assert_allclose(H, 0.5 * total(sz, 3), atol=1e-14)
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


def test_bbh_singlet_triplet_in_plain_spin_units():
    H = build_bbh_hamiltonian(BBHParams(2, 1, [1.0], phi=0.0, h=0.0, spin_scale=1.0))
    np.testing.assert_allclose(spectrum(H), [-0.75, 0.25, 0.25, 0.25], atol=1e-12)
    H2 = build_bbh_hamiltonian(BBHParams(2, 1, [1.0], phi=0.0, h=0.0))
    np.testing.assert_allclose(spectrum(H2), [-3, 1, 1, 1], atol=1e-12)


def test_bbh_phase_limits():
    ops = spin_operators(2)
    s = [2 * ops.sx, 2 * ops.sy, 2 * ops.sz]
    dot = sum(np.kron(a, a) for a in s)
    bil = build_bbh_hamiltonian(BBHParams(2, 2, [0.7], phi=0.0, h=0.0))
    biq = build_bbh_hamiltonian(BBHParams(2, 2, [0.7], phi=np.pi / 2, h=0.0))
    np.testing.assert_allclose(bil, 0.7 * dot, atol=1e-12)
    np.testing.assert_allclose(biq, 0.7 * dot @ dot, atol=1e-11)


def test_normalize_diagonal():
    H = normalize_spectrum(np.diag([5.0, 3.0, 1.0]))
    np.testing.assert_allclose(H.matrix, np.diag([1.0, 0.0, -1.0]), atol=1e-15)
    assert (H.e_max, H.e_min) == (5.0, 1.0)
    np.testing.assert_allclose(H.energies, [-1, 0, 1], atol=1e-15)


def test_normalize_idempotent():
    H = normalize_spectrum(build_xy_hamiltonian(XYParams(3, 2, [0.4, -0.2], gamma=0.5)))
    again = normalize_spectrum(H.matrix)
    np.testing.assert_allclose(again.matrix, H.matrix, atol=1e-13)


def test_normalize_rejects_identity():
    with pytest.raises(DegenerateSpectrumError):
        normalize_spectrum(3.0 * np.eye(4))


@pytest.mark.parametrize("model,two_j,params", [
    ("xy", 1, dict(gamma=0.0)), ("xy", 2, dict(gamma=0.6)), ("xy", 3, dict(gamma=1.0)),
    ("bbh", 2, dict(phi=np.pi / 6)), ("bbh", 3, dict(phi=2 * np.pi / 3)),
])
def test_normalized_spectrum_endpoints(model, two_j, params):
    couplings = [0.3, -0.7, 1.1]
    if model == "xy":
        raw = build_xy_hamiltonian(XYParams(4, two_j, couplings, **params))
    else:
        raw = build_bbh_hamiltonian(BBHParams(4, two_j, couplings, **params))
    assert np.max(np.abs(raw - raw.conj().T)) < 1e-12
    H = normalize_spectrum(raw)
    e = spectrum(H.matrix)
    assert abs(e[0] + 1) < 1e-10 and abs(e[-1] - 1) < 1e-10
    assert np.all(e >= -1 - 1e-10) and np.all(e <= 1 + 1e-10)
    np.testing.assert_allclose(H.energies, e, atol=1e-10)


@pytest.mark.parametrize("two_j", [1, 2, 3])
def test_xx_conserves_magnetization(two_j):
    H = build_xy_hamiltonian(XYParams(3, two_j, [0.5, 0.9], gamma=0.0))
    mz = total(spin_operators(two_j).sz, 3)
    assert np.linalg.norm(H @ mz - mz @ H) < 1e-10
    Hg = build_xy_hamiltonian(XYParams(3, two_j, [0.5, 0.9], gamma=0.4))
    assert np.linalg.norm(Hg @ mz - mz @ Hg) > 1e-3


@pytest.mark.parametrize("two_j", [1, 2, 3])
def test_bbh_rotational_invariance(two_j):
    H = build_bbh_hamiltonian(BBHParams(3, two_j, [0.5, -0.8], phi=1.1, h=0.0))
    ops = spin_operators(two_j)
    for a in (ops.sx, ops.sy, ops.sz):
        m = total(a, 3)
        assert np.linalg.norm(H @ m - m @ H) < 1e-10


def reversal(d, n):
    perm = np.zeros((d ** n, d ** n))
    for idx in itertools.product(range(d), repeat=n):
        src = np.ravel_multi_index(idx, (d,) * n)
        dst = np.ravel_multi_index(idx[::-1], (d,) * n)
        perm[dst, src] = 1
    return perm


@pytest.mark.parametrize("builder,params", [
    (build_xy_hamiltonian, XYParams(4, 2, [0.4], gamma=0.3)),
    (build_bbh_hamiltonian, BBHParams(4, 2, [-0.5], phi=np.pi / 3)),
])
def test_reflection_symmetry(builder, params):
    H = builder(params)
    P = reversal(3, 4)
    np.testing.assert_allclose(P @ H @ P.T, H, atol=1e-12)


def test_couplings_validation():
    with pytest.raises(ConfigError):
        XYParams(4, 1, [0.1, 0.2])
    with pytest.raises(ConfigError):
        BBHParams(1, 2, [])
    assert XYParams(4, 1, 0.3).couplings == (0.3, 0.3, 0.3)


def test_dimension_cap():
    assert check_dimension(6, 4) == 2401
    with pytest.raises(ResourceLimitError) as err:
        build_xy_hamiltonian(XYParams(5, 6, [0.1] * 4))
    assert err.value.two_j == 6 and err.value.n_sites == 5
    with pytest.raises(ResourceLimitError):
        build_xy_charger(1.0, 3, 2, max_dim=20)


def test_xy_charger_single_site():
    ch = build_xy_charger(1.0, 1, 1)
    np.testing.assert_allclose(ch.matrix, PAULI_X / 2, atol=1e-15)
    plain = build_xy_charger(1.0, 1, 1, spin_scale=1.0)
    np.testing.assert_allclose(plain.matrix, [[0, 0.25], [0.25, 0]], atol=1e-15)
    zero = build_xy_charger(0.0, 2, 2)
    assert not np.any(zero.matrix)


def test_charger_is_sum_of_local_terms():
    for ch in (build_xy_charger(0.7, 3, 2), build_bbh_charger(1.3, 3, 2)):
        np.testing.assert_allclose(ch.matrix, total(ch.local, 3), atol=1e-14)
        assert np.max(np.abs(ch.matrix - ch.matrix.conj().T)) < 1e-12


def test_bbh_charger_spin_half_is_shifted_linear_charger():
    ch = build_bbh_charger(1.0, 2, 1)
    lin = build_xy_charger(1.0, 2, 1)
    np.testing.assert_allclose(ch.matrix, lin.matrix + 2 * 0.25 * np.eye(4), atol=1e-14)


def test_bbh_charger_spin_one_by_hand():
    ch = build_bbh_charger(1.0, 1, 2, spin_scale=1.0)
    r = 1 / np.sqrt(2)
    sx = np.array([[0, r, 0], [r, 0, r], [0, r, 0]])
    sx2 = np.array([[0.5, 0, 0.5], [0, 1, 0], [0.5, 0, 0.5]])
    np.testing.assert_allclose(sx @ sx, sx2, atol=1e-15)
    np.testing.assert_allclose(ch.matrix, sx / 2 + sx2 / 4, atol=1e-15)
    assert not np.any(build_bbh_charger(0.0, 2, 2).matrix)


def test_bbh_charger_omega_scope():
    full = build_bbh_charger(2.0, 1, 2)
    lin = build_bbh_charger(2.0, 1, 2, omega_scope="linear-only")
    sx = 2 * spin_operators(2).sx
    np.testing.assert_allclose(full.matrix, 2.0 * (sx / 2 + sx @ sx / 4), atol=1e-14)
    np.testing.assert_allclose(lin.matrix, 2.0 * sx / 2 + sx @ sx / 4, atol=1e-14)
    np.testing.assert_allclose(build_bbh_charger(1.0, 1, 2).matrix,
                               build_bbh_charger(1.0, 1, 2, omega_scope="linear-only").matrix)
    with pytest.raises(ConfigError):
        build_bbh_charger(1.0, 1, 2, omega_scope="both")
