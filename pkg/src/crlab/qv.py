"""Desk-scale quantum-volume harness: square model circuits, ideal heavy sets,
noisy simulation with pluggable per-block error models, and the heavy-output
pass/fail decision against the 2/3 threshold.

Circuits are width m, depth m: each layer permutes the qubits uniformly at
random and applies an independent Haar-random SU(4) block to each adjacent
pair of the permuted order (one qubit idles when m is odd).  Everything is
deterministic given the seed; per-circuit seeds derive from the master seed.
Width is capped at 5 so the density-matrix path stays at 1024 rows or fewer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import amplitude_damping_kraus, phase_damping_kraus
from .errors import InvalidInputError, OutOfScopeError
from .pauli import mat_exp, pauli_matrix

MIN_WIDTH = 2
MAX_WIDTH = 5
HOP_THRESHOLD = 2.0 / 3.0


@dataclass(frozen=True)
class QvLayer:
    permutation: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]  # one 4x4 Haar unitary per adjacent pair


@dataclass(frozen=True)
class QvCircuit:
    width: int
    layers: tuple[QvLayer, ...]
    seed: int


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix with the
    R-diagonal phase fix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def generate_circuit(width: int, seed: int) -> QvCircuit:
    """Deterministic square model circuit of the given width."""
    if width > MAX_WIDTH:
        raise OutOfScopeError(f"width {width} exceeds the desk-scale cap of {MAX_WIDTH}")
    if width < MIN_WIDTH:
        raise InvalidInputError(f"width must be at least {MIN_WIDTH}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    layers = []
    for _ in range(width):
        perm = tuple(int(q) for q in rng.permutation(width))
        blocks = tuple(haar_unitary(4, rng) for _ in range(width // 2))
        layers.append(QvLayer(permutation=perm, blocks=blocks))
    return QvCircuit(width=width, layers=tuple(layers), seed=seed)


# ---------------------------------------------------------------------------
# simulation


def _apply_two_qubit(state: np.ndarray, gate: np.ndarray, q0: int, q1: int, width: int) -> np.ndarray:
    """Apply a 4x4 gate to qubits (q0, q1) of a statevector."""
    psi = state.reshape([2] * width)
    psi = np.moveaxis(psi, (q0, q1), (0, 1))
    shape = psi.shape
    psi = gate.reshape(2, 2, 2, 2).reshape(4, 4) @ psi.reshape(4, -1)
    psi = psi.reshape(shape)
    psi = np.moveaxis(psi, (0, 1), (q0, q1))
    return psi.reshape(-1)


def _apply_two_qubit_dm(rho: np.ndarray, op: np.ndarray, q0: int, q1: int, width: int) -> np.ndarray:
    """rho -> op rho op^dag on the (q0, q1) pair of a density matrix."""
    dim = 2**width
    t = rho.reshape([2] * (2 * width))
    t = np.moveaxis(t, (q0, q1), (0, 1))
    shape = t.shape
    t = (op @ t.reshape(4, -1)).reshape(shape)
    t = np.moveaxis(t, (0, 1), (q0, q1))
    # right side: conjugate on the bra indices
    t = np.moveaxis(t, (width + q0, width + q1), (0, 1))
    shape = t.shape
    t = (op.conj() @ t.reshape(4, -1)).reshape(shape)
    t = np.moveaxis(t, (0, 1), (width + q0, width + q1))
    return t.reshape(dim, dim)


def _layer_pairs(layer: QvLayer, width: int) -> list[tuple[int, int]]:
    perm = layer.permutation
    return [(perm[2 * i], perm[2 * i + 1]) for i in range(width // 2)]


def ideal_probabilities(circuit: QvCircuit) -> np.ndarray:
    """Exact output distribution of the noiseless circuit from |0...0>."""
    width = circuit.width
    psi = np.zeros(2**width, dtype=complex)
    psi[0] = 1.0
    for layer in circuit.layers:
        for (q0, q1), block in zip(_layer_pairs(layer, width), layer.blocks):
            psi = _apply_two_qubit(psi, block, q0, q1, width)
    return np.abs(psi) ** 2


def heavy_set(circuit: QvCircuit) -> tuple[frozenset[int], np.ndarray, float]:
    """Bitstrings with ideal probability strictly above the median.

    Returns (heavy outcomes, ideal probabilities, median).  For a degenerate
    (flat) distribution the strict rule yields an empty set.
    """
    probs = ideal_probabilities(circuit)
    median = float(np.median(probs))
    heavy = frozenset(int(i) for i in np.flatnonzero(probs > median))
    return heavy, probs, median


# ---------------------------------------------------------------------------
# per-block noise models


class BlockNoise:
    """Maps an ideal 4x4 block to (unitary, kraus-or-None) applied in its place."""

    def apply(self, block: np.ndarray) -> tuple[np.ndarray, list[np.ndarray] | None]:
        raise NotImplementedError

    @property
    def needs_density_matrix(self) -> bool:
        return True


class NoNoise(BlockNoise):
    def apply(self, block):
        return block, None

    @property
    def needs_density_matrix(self) -> bool:
        return False


class CoherentIyError(BlockNoise):
    """Appends exp(-i epsilon IY/2) to every block (epsilon = error rate x time)."""

    def __init__(self, epsilon: float):
        self.epsilon = float(epsilon)
        self._err = mat_exp(0.5 * pauli_matrix("IY"), self.epsilon)

    def apply(self, block):
        return self._err @ block, None

    @property
    def needs_density_matrix(self) -> bool:
        return False


class DepolarizingError(BlockNoise):
    """Two-qubit depolarizing with probability p after every block."""

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise InvalidInputError("depolarizing probability outside [0, 1]")
        self.p = float(p)
        kraus = [math.sqrt(1.0 - 15.0 * p / 16.0) * np.eye(4, dtype=complex)]
        labels = [a + b for a in "IXYZ" for b in "IXYZ"][1:]
        kraus.extend(math.sqrt(p / 16.0) * pauli_matrix(lbl) for lbl in labels)
        self.kraus = kraus

    def apply(self, block):
        return block, self.kraus


class DampingError(BlockNoise):
    """Per-qubit amplitude+phase damping over the block duration."""

    def __init__(self, gamma_a: float, gamma_p: float):
        ka = amplitude_damping_kraus(gamma_a)
        kp = phase_damping_kraus(gamma_p)
        one_qubit = [a @ p for a in ka for p in kp]
        self.kraus = [np.kron(k1, k2) for k1 in one_qubit for k2 in one_qubit]

    def apply(self, block):
        return block, self.kraus


@dataclass(frozen=True)
class HopResult:
    width: int
    n_circuits: int
    mean_hop: float
    sigma: float
    threshold: float
    passed: bool
    per_circuit: tuple[float, ...]
    shots: int | None
    seed: int


def _simulate_noisy_hop(
    circuit: QvCircuit,
    heavy: frozenset[int],
    noise: BlockNoise,
    shots: int | None,
    rng: np.random.Generator,
) -> float:
    width = circuit.width
    if noise.needs_density_matrix:
        dim = 2**width
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        for layer in circuit.layers:
            for (q0, q1), block in zip(_layer_pairs(layer, width), layer.blocks):
                gate, kraus = noise.apply(block)
                rho = _apply_two_qubit_dm(rho, gate, q0, q1, width)
                if kraus is not None:
                    rho = sum(
                        _apply_two_qubit_dm(rho, k, q0, q1, width) for k in kraus
                    )
        probs = np.clip(np.real(np.diag(rho)), 0.0, None)
    else:
        psi = np.zeros(2**width, dtype=complex)
        psi[0] = 1.0
        for layer in circuit.layers:
            for (q0, q1), block in zip(_layer_pairs(layer, width), layer.blocks):
                gate, _ = noise.apply(block)
                psi = _apply_two_qubit(psi, gate, q0, q1, width)
        probs = np.abs(psi) ** 2
    probs = probs / probs.sum()
    if shots is None:
        return float(sum(probs[i] for i in heavy))
    counts = rng.multinomial(shots, probs)
    return float(sum(counts[i] for i in heavy)) / shots


def hop_estimate(
    circuits: Sequence[QvCircuit],
    noise: BlockNoise | None = None,
    shots: int | None = None,
    seed: int = 0,
) -> HopResult:
    """Heavy-output probability over a circuit ensemble with the 2-sigma rule.

    Exact mode (``shots`` None) uses the full output distribution per
    circuit and the circuit-to-circuit spread for sigma; with shots, sigma
    adds the binomial sampling term.  ``passed`` is mean - 2 sigma > 2/3.
    """
    if not circuits:
        raise InvalidInputError("need at least one circuit")
    noise = noise or NoNoise()
    widths = {c.width for c in circuits}
    if len(widths) != 1:
        raise InvalidInputError("all circuits must share one width")
    rng_seeds = np.random.SeedSequence(seed).spawn(len(circuits))
    hops = []
    for circuit, child in zip(circuits, rng_seeds):
        heavy, _, _ = heavy_set(circuit)
        hops.append(
            _simulate_noisy_hop(circuit, heavy, noise, shots, np.random.default_rng(child))
        )
    hops_arr = np.array(hops)
    mean = float(hops_arr.mean())
    n_c = len(hops)
    circuit_var = float(hops_arr.var(ddof=1)) / n_c if n_c > 1 else 0.0
    if shots is not None:
        circuit_var += mean * (1.0 - mean) / (n_c * shots)
    sigma = math.sqrt(circuit_var)
    return HopResult(
        width=next(iter(widths)),
        n_circuits=n_c,
        mean_hop=mean,
        sigma=sigma,
        threshold=HOP_THRESHOLD,
        passed=bool(mean - 2.0 * sigma > HOP_THRESHOLD),
        per_circuit=tuple(float(h) for h in hops_arr),
        shots=shots,
        seed=seed,
    )


def generate_ensemble(width: int, n_circuits: int, seed: int) -> list[QvCircuit]:
    """Deterministic circuit ensemble; circuit k uses the k-th spawned seed."""
    children = np.random.SeedSequence(seed).spawn(n_circuits)
    return [
        generate_circuit(width, seed=int(child.generate_state(1)[0]))
        for child in children
    ]


def noise_from_spec(spec: dict | None) -> BlockNoise:
    """Build a per-block error model from a JSON-style description.

    Kinds: none | coherent_iy (epsilon) | depolarizing (p) |
    damping (gamma_a, gamma_p).
    """
    if spec is None:
        return NoNoise()
    kind = spec.get("kind", "none")
    if kind == "none":
        return NoNoise()
    if kind == "coherent_iy":
        return CoherentIyError(float(spec["epsilon"]))
    if kind == "depolarizing":
        return DepolarizingError(float(spec["p"]))
    if kind == "damping":
        return DampingError(float(spec["gamma_a"]), float(spec["gamma_p"]))
    raise InvalidInputError(f"unknown noise kind {kind!r}")
