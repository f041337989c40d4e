"""Dense Pauli-string algebra for 1-3 qubit systems.

Conventions used throughout the package:

* Tensor slots read left to right as control, target, target-spectator.
* Hamiltonians are expanded as ``H = sum_P nu_P * P / 2`` with the ``nu``
  coefficients in rad/s, and unitaries are generated as ``U = exp(-i H t)``.
* A two-pulse echo of half duration ``t`` runs for total time ``2 t``, so the
  generating Hamiltonian of the full sequence is ``H = i log(U) / (2 t)``.

Everything here is dense linear algebra on matrices of dimension at most 8;
no sparsity machinery is used on purpose.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

import numpy as np
import scipy.linalg

from .errors import BranchCutError, InvalidInputError

# Tolerance policy, used package-wide.
ATOL_ALGEBRA = 1e-10   # hermiticity / unitarity predicates
ATOL_ROUNDTRIP = 1e-9  # exp/log round trips
ATOL_DECOMP = 1e-12    # Pauli decomposition exactness
BRANCH_GUARD_RAD = 1e-6  # guard band around the -1 branch cut of the log

_SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_LETTERS = "IXYZ"
MAX_QUBITS = 3


def validate_label(label: str) -> str:
    """Return the canonical (uppercase) form of a Pauli label or raise."""
    if not isinstance(label, str):
        raise InvalidInputError(f"Pauli label must be a string, got {type(label)!r}")
    canon = label.upper()
    if not 1 <= len(canon) <= MAX_QUBITS:
        raise InvalidInputError(f"Pauli label {label!r} must have 1..{MAX_QUBITS} letters")
    if any(ch not in _LETTERS for ch in canon):
        raise InvalidInputError(f"Pauli label {label!r} contains letters outside I/X/Y/Z")
    return canon


def pauli_labels(n: int) -> list[str]:
    """All 4**n labels for an n-qubit system, in lexicographic I,X,Y,Z order."""
    if not 1 <= n <= MAX_QUBITS:
        raise InvalidInputError(f"qubit count {n} outside 1..{MAX_QUBITS}")
    labels = [""]
    for _ in range(n):
        labels = [s + ch for s in labels for ch in _LETTERS]
    return labels


@lru_cache(maxsize=None)
def _pauli_matrix_cached(label: str) -> np.ndarray:
    out = _SIGMA[label[0]]
    for ch in label[1:]:
        out = np.kron(out, _SIGMA[ch])
    out.setflags(write=False)
    return out


def pauli_matrix(label: str) -> np.ndarray:
    """Kronecker product of single-qubit Paulis for ``label`` (read-only view)."""
    return _pauli_matrix_cached(validate_label(label))


def n_qubits_for_dim(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim or not 1 <= n <= MAX_QUBITS:
        raise InvalidInputError(f"matrix dimension {dim} is not 2^n with n in 1..{MAX_QUBITS}")
    return n


def is_hermitian(m: np.ndarray, atol: float = ATOL_ALGEBRA) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def is_unitary(m: np.ndarray, atol: float = ATOL_ALGEBRA) -> bool:
    d = m.shape[0]
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(d))) <= atol)


@dataclass(frozen=True)
class PauliDecomposition:
    """Expansion coefficients of a matrix in the (unnormalized) Pauli basis.

    ``coeffs`` maps label -> complex coefficient; labels with coefficient
    exactly zero may be omitted.  For a unitary the coefficients satisfy
    ``sum |c_P|^2 = 1``; for a Hamiltonian they are real up to tolerance.
    """

    n: int
    coeffs: Mapping[str, complex]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise InvalidInputError(f"qubit count {self.n} outside 1..{MAX_QUBITS}")
        for label in self.coeffs:
            if len(validate_label(label)) != self.n:
                raise InvalidInputError(f"label {label!r} does not match n={self.n}")

    def __getitem__(self, label: str) -> complex:
        return complex(self.coeffs.get(validate_label(label), 0.0))

    def items(self) -> Iterator[tuple[str, complex]]:
        return iter(self.coeffs.items())

    def matrix(self) -> np.ndarray:
        dim = 2**self.n
        out = np.zeros((dim, dim), dtype=complex)
        for label, c in self.coeffs.items():
            out += c * pauli_matrix(label)
        return out

    def weight_sum(self) -> float:
        """sum_P |c_P|^2 (equals 1 for a unitary's decomposition)."""
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def real_coeffs(self, atol: float = ATOL_ROUNDTRIP) -> dict[str, float]:
        """Coefficients as floats, checking imaginary parts are below ``atol``."""
        scale = max(1.0, max((abs(c) for c in self.coeffs.values()), default=1.0))
        out = {}
        for label, c in self.coeffs.items():
            if abs(c.imag) > atol * scale:
                raise InvalidInputError(
                    f"coefficient {label} = {c} has imaginary part above {atol:g}*scale"
                )
            out[label] = float(c.real)
        return out

    def to_json(self) -> dict[str, list[float]]:
        return {label: [c.real, c.imag] for label, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, n: int, payload: Mapping[str, list[float]]) -> "PauliDecomposition":
        return cls(n=n, coeffs={k: complex(v[0], v[1]) for k, v in payload.items()})


def decompose(m: np.ndarray) -> PauliDecomposition:
    """Expand ``m`` in the Pauli basis via ``c_P = tr(P m) / 2^n``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError("decompose() expects a square matrix")
    n = n_qubits_for_dim(m.shape[0])
    dim = m.shape[0]
    coeffs = {}
    for label in pauli_labels(n):
        c = complex(np.trace(pauli_matrix(label) @ m)) / dim
        coeffs[label] = c
    return PauliDecomposition(n=n, coeffs=coeffs)


def recompose(dec: PauliDecomposition) -> np.ndarray:
    """Inverse of :func:`decompose`."""
    return dec.matrix()


def mat_exp(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise InvalidInputError("mat_exp() requires a Hermitian generator")
    evals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return (vecs * phases) @ vecs.conj().T


def mat_log_principal(u: np.ndarray, guard: float = BRANCH_GUARD_RAD) -> np.ndarray:
    """Principal matrix logarithm of a unitary.

    Eigenphases are mapped to (-pi, pi]; any eigenphase within ``guard`` of the
    branch cut at pi raises :class:`BranchCutError` carrying the offender.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise InvalidInputError("mat_log_principal() requires a unitary matrix")
    # Schur of a normal matrix is diagonal up to rounding; more stable than eig
    # for (near-)degenerate eigenvalues.
    t_mat, q = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t_mat))
    for phi in phases:
        if np.pi - abs(phi) < guard:
            raise BranchCutError(eigenphase=float(phi), guard=guard)
    return (q * (1j * phases)) @ q.conj().T


def generating_hamiltonian(u: np.ndarray, t_half: float) -> PauliDecomposition:
    """Hamiltonian generating ``u`` over a two-pulse echo: ``H = i log(u) / (2 t_half)``.

    ``t_half`` is the duration of each echo half; ``mat_exp(H, 2*t_half)``
    reproduces ``u`` to roundoff.  Coefficients are returned real.
    """
    if t_half <= 0:
        raise InvalidInputError("t_half must be positive")
    log_u = mat_log_principal(u)
    h = 1j * log_u / (2.0 * t_half)
    h = 0.5 * (h + h.conj().T)  # symmetrize away roundoff
    dec = decompose(h)
    reals = dec.real_coeffs(atol=ATOL_ROUNDTRIP)
    return PauliDecomposition(n=dec.n, coeffs={k: complex(v) for k, v in reals.items()})
