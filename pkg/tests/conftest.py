"""Shared fixtures and independent oracle helpers for the test suite."""
from __future__ import annotations

import math

import numpy as np
import pytest

from crlab.cr_hamiltonian import CrCoefficients

KHZ = 2.0e3 * math.pi
T_HALF = 206.22e-9


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)


def random_coefficients(rng: np.random.Generator, scale: float, t: float = T_HALF) -> CrCoefficients:
    """Random coefficient set with |nu| t <= scale (radians)."""
    nus = rng.uniform(-1.0, 1.0, size=7) * (scale / t)
    return CrCoefficients(
        nu_ix=nus[0], nu_iy=nus[1], nu_iz=nus[2], nu_zi=nus[3],
        nu_zx=nus[4], nu_zy=nus[5], nu_zz=nus[6],
    )


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (m + m.conj().T)


def transmon_pair_zz(
    j_coupling: float,
    delta1: float,
    delta2: float,
    detuning: float,
    n_levels: int = 3,
) -> float:
    """Exact-diagonalization oracle for the always-on ZZ rate.

    Builds the two-transmon ladder with exchange coupling, matches dressed
    states to bare states by maximum overlap, and returns half the level
    combination (E11 - E10 - E01 + E00): the rate multiplying ZZ/2.
    """
    base = 2.0 * math.pi * 5.0e9
    freqs = [base, base - detuning]
    anharms = [delta1, delta2]
    dim = n_levels
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1)
    number = np.diag(np.arange(dim)).astype(float)
    eye = np.eye(dim)
    h = (
        freqs[0] * np.kron(number, eye)
        + 0.5 * anharms[0] * np.kron(number @ (number - eye), eye)
        + freqs[1] * np.kron(eye, number)
        + 0.5 * anharms[1] * np.kron(eye, number @ (number - eye))
        + j_coupling * (np.kron(lower.T, lower) + np.kron(lower, lower.T))
    )
    evals, evecs = np.linalg.eigh(h)

    def dressed(i: int, j: int) -> float:
        bare = np.zeros(dim * dim)
        bare[i * dim + j] = 1.0
        return evals[int(np.argmax(np.abs(evecs.T @ bare)))]

    shift = dressed(1, 1) - dressed(1, 0) - dressed(0, 1) + dressed(0, 0)
    return 0.5 * shift
