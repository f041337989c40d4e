"""Uniform Clifford-group sampling for 1 and 2 qubits.

The single-qubit group (24 elements mod phase) and the two-qubit group
(11520 elements mod phase) are enumerated once by breadth-first closure over
the generators {H, S} and {H1, H2, S1, S2, CZ} with phase-canonical
deduplication, then cached.  Sampling an index uniformly from the cached
list gives exactly uniform group elements, which is what the purity-decay
twirl needs.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

CLIFFORD_1Q_SIZE = 24
CLIFFORD_2Q_SIZE = 11520


def _canonical_key(u: np.ndarray) -> bytes:
    """Phase-canonical rounded key: divide by the phase of the first big entry."""
    flat = u.ravel()
    idx = int(np.argmax(np.abs(flat) > 0.25))
    phase = flat[idx] / abs(flat[idx])
    v = u / phase
    ints = np.round(v.view(float) * 1e6).astype(np.int64)
    return ints.tobytes()


def _closure(generators: list[np.ndarray], dim: int) -> list[np.ndarray]:
    eye = np.eye(dim, dtype=complex)
    found = {_canonical_key(eye): eye}
    frontier = [eye]
    while frontier:
        nxt = []
        for u in frontier:
            for g in generators:
                w = g @ u
                key = _canonical_key(w)
                if key not in found:
                    found[key] = w
                    nxt.append(w)
        frontier = nxt
    return list(found.values())


@lru_cache(maxsize=1)
def clifford_1q() -> tuple[np.ndarray, ...]:
    """All 24 single-qubit Cliffords (mod phase)."""
    group = _closure([_H, _S], 2)
    assert len(group) == CLIFFORD_1Q_SIZE, f"1Q closure found {len(group)} elements"
    for u in group:
        u.setflags(write=False)
    return tuple(group)


@lru_cache(maxsize=1)
def clifford_2q() -> tuple[np.ndarray, ...]:
    """All 11520 two-qubit Cliffords (mod phase); built lazily, ~1 s, cached."""
    eye2 = np.eye(2, dtype=complex)
    gens = [
        np.kron(_H, eye2),
        np.kron(eye2, _H),
        np.kron(_S, eye2),
        np.kron(eye2, _S),
        _CZ,
    ]
    group = _closure(gens, 4)
    assert len(group) == CLIFFORD_2Q_SIZE, f"2Q closure found {len(group)} elements"
    for u in group:
        u.setflags(write=False)
    return tuple(group)


def clifford_group(n_qubits: int) -> tuple[np.ndarray, ...]:
    if n_qubits == 1:
        return clifford_1q()
    if n_qubits == 2:
        return clifford_2q()
    raise ValueError("Clifford sampling implemented for 1 or 2 qubits only")


def sample_clifford_indices(n_qubits: int, count: int, rng: np.random.Generator) -> np.ndarray:
    group = clifford_group(n_qubits)
    return rng.integers(0, len(group), size=count)
