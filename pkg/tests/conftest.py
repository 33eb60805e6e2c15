import numpy as np
import pytest

from spinbattery.hamiltonians import XYParams, build_xy_charger, build_xy_hamiltonian, normalize_spectrum

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

SUPPORTED_TWO_J = [1, 2, 3, 4, 5, 6]


def xx_battery(two_j, n, lam, gamma=0.0):
    return normalize_spectrum(build_xy_hamiltonian(XYParams(n, two_j, [lam] * (n - 1), gamma)))


@pytest.fixture
def xx_pair():
    """Two-site spin-1/2 XX battery at lambda = 0.2 with its linear charger."""
    return xx_battery(1, 2, 0.2), build_xy_charger(1.0, 2, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


# criterion id -> list of (label, passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def record(criterion, label, passed, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((label, bool(passed), detail))
    assert passed, f"{criterion} / {label}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[criterion]
        failed = [e for e in entries if not e[1]]
        verdict = "PASS" if not failed else "FAIL"
        detail = "; ".join(f"{label}: {d}" if d else label for label, _, d in failed)
        terminalreporter.write_line(f"{verdict} {criterion} ({len(entries) - len(failed)}/{len(entries)}) {detail}".rstrip())
