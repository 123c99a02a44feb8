"""Independent references for the test suite.

Nothing here touches the sector machinery in ``model`` or the eigen-expansion
in ``dynamics``: Hamiltonians are assembled from Kronecker products of Pauli
matrices and propagated with a Pade matrix exponential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import ConfigError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
BRUTE_FORCE_MAX_SITES = 8


@dataclass(frozen=True)
class TwoSpinAngles:
    theta1: float
    theta2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        for th in (self.theta1, self.theta2):
            if not 0 <= th <= math.pi:
                raise ConfigError(f"theta={th} outside [0, pi]")
        for ph in (self.phi1, self.phi2):
            if not 0 <= ph < 2 * math.pi:
                raise ConfigError(f"phi={ph} outside [0, 2pi)")

    @property
    def bracket(self) -> float:
        """1 - n1 . n2 for the two Bloch vectors."""
        return (1 - math.cos(self.theta1) * math.cos(self.theta2)
                - math.cos(self.phi1 - self.phi2) * math.sin(self.theta1) * math.sin(self.theta2))


def analytic_q_two_spin(angles: TwoSpinAngles, coupling_j: float, hbar: float, t: float) -> float:
    return 0.25 * math.sin(4 * coupling_j * t / hbar) ** 2 * angles.bracket**2


def analytic_qmed_two_spin(angles: TwoSpinAngles, coupling_j: float, hbar: float, tau: float) -> float:
    x = 8 * coupling_j * tau / hbar
    g = 0.5 - math.sin(x) / (2 * x)
    return 0.25 * g * angles.bracket**2


def analytic_beta_decomposition_two_spin(angles: TwoSpinAngles, coupling_j, field_b, p):
    beta_f = -math.pi * p * ((1 - math.cos(angles.theta1)) + (1 - math.cos(angles.theta2)))
    beta_i = -(coupling_j * math.pi * p / field_b) * angles.bracket
    return beta_f, beta_i


def analytic_dynamic_phase_two_spin(angles: TwoSpinAngles, coupling_j, field_b, p) -> float:
    c1, c2 = math.cos(angles.theta1), math.cos(angles.theta2)
    s1, s2 = math.sin(angles.theta1), math.sin(angles.theta2)
    return -(math.pi * p / field_b) * (
        field_b * (c1 + c2) + coupling_j * c1 * c2
        + coupling_j * math.cos(angles.phi1 - angles.phi2) * s1 * s2
    )


def analytic_ms_total_two_spin(theta2: float, field_b: float, t: float) -> float:
    """Arg of <psi(0)|psi(t)> for |+> x (cos|+> + sin|->), with J = hbar = 1."""
    z = np.exp(-1j * (1 + 2 * field_b) * t) * (
        1 + math.cos(theta2)
        + np.exp(2j * field_b * t) * (1 + np.exp(4j * t)) * math.sin(theta2 / 2) ** 2
    )
    return float(np.angle(z))


def analytic_ms_dynamic_two_spin(theta2: float, field_b: float, t: float) -> float:
    return -t * (field_b + (1 + field_b) * math.cos(theta2))


def analytic_beta_i_three_spin(theta3: float, field_over_j: float = 3.0) -> float:
    """Interaction AA phase of |+> (|+>+|->)/sqrt2 (cos|+> + sin|->), B/J = 3 only."""
    if not math.isclose(field_over_j, 3.0):
        raise ConfigError("the three-spin closed form holds only for B/J = 3")
    if not 0 <= theta3 <= math.pi:
        raise ConfigError("theta3 outside [0, pi]")
    return math.pi + (math.pi / 3) * (math.cos(theta3) + math.sin(theta3))


def _site_operator(op: np.ndarray, k: int, n: int) -> np.ndarray:
    # site k is bit k, i.e. the (n-1-k)-th Kronecker factor from the left
    factors = [np.eye(2)] * n
    factors[n - 1 - k] = op
    return reduce(np.kron, factors)


def heisenberg_kron(n_sites: int, periodic: bool = True) -> np.ndarray:
    if n_sites == 2 or not periodic:
        bonds = [(i, i + 1) for i in range(n_sites - 1)]
    else:
        bonds = [(i, (i + 1) % n_sites) for i in range(n_sites)]
    dim = 2**n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for i, j in bonds:
        for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            h += _site_operator(s, i, n_sites) @ _site_operator(s, j, n_sites)
    return h


def full_hamiltonian_kron(n_sites, coupling_j, field_b, periodic=True) -> np.ndarray:
    h = coupling_j * heisenberg_kron(n_sites, periodic)
    for k in range(n_sites):
        h += field_b * _site_operator(SIGMA_Z, k, n_sites)
    return h


def brute_force_evolve(h: np.ndarray, state: np.ndarray, t: float, hbar: float = 1.0) -> np.ndarray:
    """exp(-i H t / hbar) |state> via scaling-and-squaring Pade."""
    dim = h.shape[0]
    if dim > 2**BRUTE_FORCE_MAX_SITES:
        raise ConfigError(f"brute force limited to {BRUTE_FORCE_MAX_SITES} sites")
    return scipy.linalg.expm(-1j * t / hbar * h) @ np.asarray(state, dtype=complex)
