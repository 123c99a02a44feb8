"""Sanity checks on the reference implementations themselves."""
import math

import numpy as np
import pytest

from spinphase import ConfigError
from spinphase.oracles import (SIGMA_X, SIGMA_Y, SIGMA_Z, TwoSpinAngles,
                               analytic_beta_decomposition_two_spin, analytic_beta_i_three_spin,
                               analytic_ms_total_two_spin, analytic_q_two_spin,
                               analytic_qmed_two_spin, brute_force_evolve, full_hamiltonian_kron,
                               heisenberg_kron)


def test_pauli_algebra():
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        np.testing.assert_allclose(s @ s, np.eye(2))
    np.testing.assert_allclose(SIGMA_X @ SIGMA_Y, 1j * SIGMA_Z)


def test_two_spin_kron_hamiltonian():
    h = heisenberg_kron(2)
    expected = np.array([[1, 0, 0, 0], [0, -1, 2, 0], [0, 2, -1, 0], [0, 0, 0, 1]])
    np.testing.assert_allclose(h, expected)


def test_kron_hamiltonian_is_hermitian():
    h = full_hamiltonian_kron(4, 0.7, 1.9)
    np.testing.assert_allclose(h, h.conj().T)


def test_brute_force_unitarity(rng):
    h = full_hamiltonian_kron(3, 1.0, 3.0)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    assert np.linalg.norm(brute_force_evolve(h, psi, 2.3)) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(brute_force_evolve(h, psi, 0.0), psi)


def test_brute_force_is_capped():
    with pytest.raises(ConfigError):
        brute_force_evolve(np.eye(2**9), np.ones(2**9), 1.0)


@pytest.mark.parametrize("bad", [(-0.1, 1.0, 0, 0), (1.0, 4.0, 0, 0), (1.0, 1.0, 7.0, 0)])
def test_angles_validation(bad):
    with pytest.raises(ConfigError):
        TwoSpinAngles(*bad)


def test_bracket_is_one_minus_dot_product():
    a = TwoSpinAngles(0.4, 2.2, 1.0, 3.5)
    n1 = [math.sin(0.4) * math.cos(1.0), math.sin(0.4) * math.sin(1.0), math.cos(0.4)]
    n2 = [math.sin(2.2) * math.cos(3.5), math.sin(2.2) * math.sin(3.5), math.cos(2.2)]
    assert a.bracket == pytest.approx(1 - np.dot(n1, n2), abs=1e-15)


def test_antiparallel_two_spin_values():
    a = TwoSpinAngles(0.0, math.pi)
    assert a.bracket == pytest.approx(2.0)
    assert analytic_q_two_spin(a, 1.0, 1.0, math.pi / 8) == pytest.approx(1.0)
    assert analytic_qmed_two_spin(a, 1.0, 1.0, math.pi) == pytest.approx(0.5)
    bf, bi = analytic_beta_decomposition_two_spin(a, 1.0, 3.0, 3)
    assert bf == pytest.approx(-6 * math.pi)
    assert bi == pytest.approx(-2 * math.pi)


def test_ms_total_at_north_pole():
    # |++> is an eigenstate with omega = 1 + 2B
    assert analytic_ms_total_two_spin(0.0, 3.0, 0.2) == pytest.approx(-7 * 0.2)


@pytest.mark.parametrize("theta, expected", [
    (0.0, 4 * math.pi / 3),
    (math.pi / 2, 4 * math.pi / 3),
    (math.pi, math.pi * 2 / 3),
    (math.pi / 4, math.pi + math.pi * math.sqrt(2) / 3),
])
def test_three_spin_closed_form_values(theta, expected):
    assert analytic_beta_i_three_spin(theta) == pytest.approx(expected, abs=1e-15)


def test_three_spin_closed_form_guards():
    with pytest.raises(ConfigError):
        analytic_beta_i_three_spin(1.0, field_over_j=2.0)
    with pytest.raises(ConfigError):
        analytic_beta_i_three_spin(4.0)
