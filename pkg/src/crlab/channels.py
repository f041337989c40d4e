"""Quantum channel algebra: Kraus sets, Pauli transfer matrices, unitarity,
product unitarity, purity randomized benchmarking, and unitary entanglement.

PTM convention: normalized Pauli basis P_hat = P / sqrt(d), entries
``R[i, j] = tr(P_i E(P_j)) / d`` (real for any channel), basis ordered
lexicographically I, X, Y, Z per qubit with the identity first.  The
representation is multiplicative under composition and tensor products, and
trace preservation makes the first row (1, 0, ..., 0).

The unitarity of a channel is the squared Frobenius norm of the unital block
of its PTM over d^2 - 1:  u = sum_{i,j>=2} R(i,j)^2 / (d^2 - 1).  It is 1
exactly for unitary channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import cliffords
from .errors import FitDegenerateError, InvalidInputError
from .pauli import mat_exp, n_qubits_for_dim, pauli_labels, pauli_matrix

# ---------------------------------------------------------------------------
# relaxation parameters


@dataclass(frozen=True)
class QubitRelaxation:
    """Per-qubit T1/T2 (seconds) with the derived damping probabilities.

    gamma_a(dt) = 1 - exp(-dt / (2 T1));  gamma_p(dt) = 1 - exp(-dt / T_phi),
    with 1/T_phi = 1/T2 - 1/(2 T1) (so T2 <= 2 T1 is required).
    """

    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 <= 0 or self.t2 <= 0:
            raise InvalidInputError("T1 and T2 must be positive")
        if self.t2 > 2.0 * self.t1 * (1.0 + 1e-12):
            raise InvalidInputError(f"T2 = {self.t2} exceeds 2*T1 = {2*self.t1}")

    @property
    def t_phi(self) -> float:
        denom = 2.0 * self.t1 - self.t2
        if denom <= 0.0:
            return math.inf
        return 2.0 * self.t1 * self.t2 / denom

    def gamma_a(self, duration: float) -> float:
        return 1.0 - math.exp(-duration / (2.0 * self.t1))

    def gamma_p(self, duration: float) -> float:
        t_phi = self.t_phi
        if math.isinf(t_phi):
            return 0.0
        return 1.0 - math.exp(-duration / t_phi)


@dataclass(frozen=True)
class NoiseParams:
    """Relaxation parameters for each qubit of a register."""

    qubits: tuple[QubitRelaxation, ...]

    @classmethod
    def from_times(cls, t1s: Sequence[float], t2s: Sequence[float]) -> "NoiseParams":
        if len(t1s) != len(t2s):
            raise InvalidInputError("t1s and t2s must have equal length")
        return cls(qubits=tuple(QubitRelaxation(t1=a, t2=b) for a, b in zip(t1s, t2s)))

    def gammas(self, duration: float) -> list[tuple[float, float]]:
        return [(q.gamma_a(duration), q.gamma_p(duration)) for q in self.qubits]

    def damping_ptm(self, duration: float) -> np.ndarray:
        """PTM of the tensor product of per-qubit amplitude+phase damping."""
        out = None
        for ga, gp in self.gammas(duration):
            r = ptm_amplitude_damping(ga) @ ptm_phase_damping(gp)
            out = r if out is None else np.kron(out, r)
        if out is None:
            raise InvalidInputError("NoiseParams has no qubits")
        return out


# ---------------------------------------------------------------------------
# Kraus sets and PTMs


def amplitude_damping_kraus(gamma_a: float) -> list[np.ndarray]:
    _check_prob(gamma_a, "gamma_a")
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma_a)]], dtype=complex),
        np.array([[0.0, math.sqrt(gamma_a)], [0.0, 0.0]], dtype=complex),
    ]


def phase_damping_kraus(gamma_p: float) -> list[np.ndarray]:
    _check_prob(gamma_p, "gamma_p")
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma_p)]], dtype=complex),
        np.array([[0.0, 0.0], [0.0, math.sqrt(gamma_p)]], dtype=complex),
    ]


def ptm_amplitude_damping(gamma_a: float) -> np.ndarray:
    """Closed-form PTM: sqrt(1-g) off-diagonals, non-unital g in the Z row."""
    _check_prob(gamma_a, "gamma_a")
    k = math.sqrt(1.0 - gamma_a)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, k, 0.0, 0.0],
            [0.0, 0.0, k, 0.0],
            [gamma_a, 0.0, 0.0, 1.0 - gamma_a],
        ]
    )


def ptm_phase_damping(gamma_p: float) -> np.ndarray:
    _check_prob(gamma_p, "gamma_p")
    k = math.sqrt(1.0 - gamma_p)
    return np.diag([1.0, k, k, 1.0])


def ptm_depolarizing(lam: float, n_qubits: int = 1) -> np.ndarray:
    """PTM diag(1, lam, ..., lam): traceless components shrink by ``lam``."""
    d2 = 4**n_qubits
    r = np.eye(d2) * lam
    r[0, 0] = 1.0
    return r


def _check_prob(p: float, name: str) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"{name} = {p} outside [0, 1]")


@lru_cache(maxsize=8)
def _pauli_stack(n: int) -> np.ndarray:
    stack = np.stack([pauli_matrix(lbl) for lbl in pauli_labels(n)])
    stack.setflags(write=False)
    return stack


def _normalized_paulis(n: int) -> np.ndarray:
    return _pauli_stack(n) / math.sqrt(2**n)


def kraus_to_ptm(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """PTM of ``rho -> sum_k K rho K^dag`` (general superoperator construction)."""
    ks = np.stack([np.asarray(k, dtype=complex) for k in kraus])
    dim = ks.shape[1]
    n = n_qubits_for_dim(dim)
    paulis = _pauli_stack(n)
    mapped = np.einsum("kab,jbc,kdc->jad", ks, paulis, ks.conj(), optimize=True)
    r = np.einsum("iab,jba->ij", paulis, mapped, optimize=True) / dim
    if np.max(np.abs(r.imag)) > 1e-12:
        raise InvalidInputError("Kraus map produced a non-real PTM")
    return np.real(r)


def ptm_from_unitary(u: np.ndarray) -> np.ndarray:
    return kraus_to_ptm([u])


def apply_ptm_to_density(r: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a PTM to a density matrix via the normalized-Pauli vectorization."""
    n = n_qubits_for_dim(rho.shape[0])
    paulis = _normalized_paulis(n)
    vec = np.real(np.einsum("qab,ba->q", paulis, rho))
    out_vec = r @ vec
    return np.einsum("q,qab->ab", out_vec, paulis).astype(complex)


def density_to_pauli_vec(rho: np.ndarray) -> np.ndarray:
    n = n_qubits_for_dim(rho.shape[0])
    return np.real(np.einsum("qab,ba->q", _normalized_paulis(n), rho))


def compose_ptm(*ptms: np.ndarray) -> np.ndarray:
    """PTM of the composition (last argument applied first)."""
    out = ptms[0]
    for r in ptms[1:]:
        out = out @ r
    return out


# ---------------------------------------------------------------------------
# unitarity


def unitarity_ptm(r: np.ndarray) -> float:
    """u = sum of squared unital-block entries over d^2 - 1."""
    r = np.asarray(r, dtype=float)
    d2 = r.shape[0]
    if r.shape != (d2, d2):
        raise InvalidInputError("PTM must be square")
    if np.max(np.abs(r[0] - np.eye(d2)[0])) > 1e-9:
        raise InvalidInputError("PTM first row is not (1, 0, ..., 0); channel not trace preserving")
    block = r[1:, 1:]
    return float(np.sum(block * block) / (d2 - 1))


def unitarity_damping_1q(gamma_a: float, gamma_p: float) -> float:
    """Closed form for one qubit: (1/3)(1-ga)(3-ga-2gp)."""
    return (1.0 - gamma_a) * (3.0 - gamma_a - 2.0 * gamma_p) / 3.0


def unitarity_2q_equal(gamma_a: float, gamma_p: float) -> float:
    """Closed form for two qubits with equal damping parameters."""
    ga, gp = gamma_a, gamma_p
    return (
        (ga - 1.0)
        * (ga + 2.0 * gp - 3.0)
        * (ga * (3.0 * ga + 2.0 * gp - 4.0) - 2.0 * gp + 5.0)
        / 15.0
    )


def unitarity_independent(gammas: Sequence[tuple[float, float]]) -> float:
    """n-qubit independent amplitude+phase damping unitarity.

    u = [ prod_j (1 + ga_j^2 + 2(1-ga_j)(1-gp_j) + (1-ga_j)^2)
          - prod_j (1 + ga_j^2) ] / (4^n - 1)
    """
    n = len(gammas)
    if not 1 <= n <= 3:
        raise InvalidInputError("unitarity_independent supports 1..3 qubits")
    full = 1.0
    nonunital = 1.0
    for ga, gp in gammas:
        full *= 1.0 + ga * ga + 2.0 * (1.0 - ga) * (1.0 - gp) + (1.0 - ga) ** 2
        nonunital *= 1.0 + ga * ga
    return (full - nonunital) / (4**n - 1)


def product_unitarity(
    u1: float,
    u2: float,
    gammas_a: tuple[float, float, float] | None = None,
    dims: tuple[int, int] = (4, 2),
) -> float:
    """Unitarity the composite system would have with unentangled subsystem noise.

    Unital case (``gammas_a`` None or all zero): for subsystem dimensions
    (d1, d2),

        u_p = [ (1 + (d1^2-1) u1)(1 + (d2^2-1) u2) - 1 ] / (d^2 - 1).

    With per-qubit amplitude damping on the control-target (subsystem 1,
    qubits 1 and 2) plus spectator (subsystem 2, qubit 3) split, dims must be
    (4, 2) and

        u_p = [ 15 u1 (1 + ga3^2) + 45 u1 u2 + 3 u2 (1 + ga1^2)(1 + ga2^2) ] / 63.
    """
    d1, d2 = dims
    if d1 * d2 > 8:
        raise InvalidInputError("dims product must be at most 8")
    if gammas_a is None or all(g == 0.0 for g in gammas_a):
        d_sq = (d1 * d2) ** 2
        return ((1.0 + (d1**2 - 1) * u1) * (1.0 + (d2**2 - 1) * u2) - 1.0) / (d_sq - 1)
    if dims != (4, 2):
        raise InvalidInputError("damping-aware product unitarity is defined for dims (4, 2)")
    ga1, ga2, ga3 = gammas_a
    return (
        15.0 * u1 * (1.0 + ga3**2)
        + 45.0 * u1 * u2
        + 3.0 * u2 * (1.0 + ga1**2) * (1.0 + ga2**2)
    ) / 63.0


def entanglement_witness(u_full: float, u_product: float) -> float:
    """e = u_full - u_product; zero for product noise, positive under entangling error."""
    return u_full - u_product


def marginal_ptm(r: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """PTM of the marginal channel on one subsystem of a bipartite channel.

    Prepares the complement maximally mixed and traces it out; in the
    normalized Pauli basis this is the sub-block of ``r`` with the complement
    index pinned to identity.
    """
    d1, d2 = dims
    n1, n2 = n_qubits_for_dim(d1), n_qubits_for_dim(d2)
    k1, k2 = 4**n1, 4**n2
    if r.shape[0] != k1 * k2:
        raise InvalidInputError("PTM dimension does not match dims")
    r4 = r.reshape(k1, k2, k1, k2)
    if keep == 0:
        return np.array(r4[:, 0, :, 0])
    if keep == 1:
        return np.array(r4[0, :, 0, :])
    raise InvalidInputError("keep must be 0 or 1")


# ---------------------------------------------------------------------------
# purity randomized benchmarking


@dataclass(frozen=True)
class RbDecayFit:
    """Fit of E[P](m) = a_offset + b_scale * u_hat^(m-1) to mean purities."""

    a_offset: float
    b_scale: float
    u_hat: float
    lengths: tuple[int, ...]
    mean_purity: tuple[float, ...]
    std_purity: tuple[float, ...]
    residual: float
    degenerate_flat: bool = False


def purity_rb(
    noise_ptm: np.ndarray,
    n_qubits: int,
    lengths: Sequence[int],
    n_sequences: int = 200,
    seed: int = 0,
    shots: int | None = None,
) -> RbDecayFit:
    """Simulate purity randomized benchmarking and fit the unitarity decay.

    Random Cliffords are drawn uniformly from the full group (24 or 11520
    elements); ``noise_ptm`` is applied after every gate.  Purity is computed
    exactly from the Pauli vector by default (``P = |r|^2``); with ``shots``
    each Pauli expectation is binomially sampled first.

    The decay model is fit in two stages: a log-domain line with the unital
    floor 1/d pinned for starting values, then a free 3-parameter least
    squares (the floor must float because non-unital noise shifts the purity
    asymptote above 1/d).
    """
    lengths = tuple(int(m) for m in lengths)
    if not lengths or min(lengths) < 1:
        raise InvalidInputError("lengths must be positive integers")
    d = 2**n_qubits
    d2 = 4**n_qubits
    if noise_ptm.shape != (d2, d2):
        raise InvalidInputError("noise PTM dimension does not match n_qubits")
    group = cliffords.clifford_group(n_qubits)
    ptm_cache: dict[int, np.ndarray] = {}
    seq_seeds = np.random.SeedSequence(seed).spawn(n_sequences)
    max_len = max(lengths)
    wanted = set(lengths)

    # initial state |0...0>
    rho0 = np.zeros((d, d), dtype=complex)
    rho0[0, 0] = 1.0
    r0 = density_to_pauli_vec(rho0)

    purities = np.zeros((n_sequences, len(lengths)))
    len_index = {m: i for i, m in enumerate(sorted(wanted))}
    sorted_lengths = tuple(sorted(wanted))
    for s in range(n_sequences):
        seq_rng = np.random.default_rng(seq_seeds[s])
        idxs = seq_rng.integers(0, len(group), size=max_len)
        r = r0.copy()
        for step in range(1, max_len + 1):
            gi = int(idxs[step - 1])
            if gi not in ptm_cache:
                ptm_cache[gi] = ptm_from_unitary(np.asarray(group[gi]))
            r = noise_ptm @ (ptm_cache[gi] @ r)
            if step in wanted:
                if shots is None:
                    purities[s, len_index[step]] = float(r @ r)
                else:
                    n_vec = r * math.sqrt(d)  # unnormalized-Pauli expectations
                    probs = np.clip((1.0 + n_vec[1:]) / 2.0, 0.0, 1.0)
                    sampled = 2.0 * seq_rng.binomial(shots, probs) / shots - 1.0
                    purities[s, len_index[step]] = float(
                        (1.0 + np.sum(sampled**2)) / d
                    )
        # note: purities columns follow sorted_lengths order
    mean_p = purities.mean(axis=0)
    std_p = purities.std(axis=0)

    if np.max(np.abs(mean_p - 1.0)) < 1e-12:
        return RbDecayFit(
            a_offset=1.0 - 1.0 / d,
            b_scale=1.0 / d,
            u_hat=1.0,
            lengths=sorted_lengths,
            mean_purity=tuple(mean_p),
            std_purity=tuple(std_p),
            residual=0.0,
            degenerate_flat=True,
        )

    excess = mean_p - 1.0 / d
    if (
        np.any(excess <= 0.0)
        or len(sorted_lengths) < 2
        or mean_p[-1] > mean_p[0] + 1e-12
    ):
        raise FitDegenerateError(
            "purity data is not a decaying curve above the unital floor",
            data={"lengths": sorted_lengths, "mean_purity": tuple(mean_p)},
        )
    m_arr = np.asarray(sorted_lengths, dtype=float)
    slope, intercept = np.polyfit(m_arr - 1.0, np.log(excess), 1)
    u0 = float(np.clip(math.exp(slope), 1e-6, 1.0))
    b0 = float(math.exp(intercept))
    a0 = 1.0 / d

    from scipy.optimize import least_squares

    def model(params, m):
        a, b, u = params
        return a + b * np.power(u, m - 1.0)

    def resid(params):
        return model(params, m_arr) - mean_p

    sol = least_squares(
        resid, x0=[a0, b0, u0], bounds=([0.0, 0.0, 0.0], [1.0, 1.5, 1.0]), xtol=1e-14,
        ftol=1e-14, gtol=1e-14,
    )
    if not sol.success and np.max(np.abs(sol.fun)) > 1e-6:
        raise FitDegenerateError(
            f"purity decay fit failed: {sol.message}",
            data={"lengths": sorted_lengths, "mean_purity": tuple(mean_p)},
        )
    a_fit, b_fit, u_fit = (float(v) for v in sol.x)
    return RbDecayFit(
        a_offset=a_fit,
        b_scale=b_fit,
        u_hat=u_fit,
        lengths=sorted_lengths,
        mean_purity=tuple(mean_p),
        std_purity=tuple(std_p),
        residual=float(np.sqrt(np.mean(sol.fun**2))),
    )


# ---------------------------------------------------------------------------
# unitary entanglement


def unitary_entanglement(u: np.ndarray, d1: int, d2: int) -> float:
    """E(U) = 1 - tr((U^dag)^x2 T13 U^x2 T13) / (d1^2 d2^2).

    T13 swaps the two copies of subsystem 1 in H1 x H2 x H1' x H2'.  Zero for
    product unitaries, invariant under local unitaries.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (d1 * d2, d1 * d2):
        raise InvalidInputError("unitary dimension does not match d1*d2")
    uu = np.kron(u, u)
    t13 = _swap_1_3(d1, d2)
    val = np.trace(uu.conj().T @ t13 @ uu @ t13) / (d1**2 * d2**2)
    e = 1.0 - val
    if abs(e.imag) > 1e-10:
        raise InvalidInputError(f"E(U) came out non-real: {e}")
    return float(np.clip(e.real, 0.0, 1.0))


def unitary_entanglement_state(u: np.ndarray, d1: int, d2: int) -> float:
    """Same quantity via the associated pure state: one minus the purity of the
    reduced state on the doubled first subsystem (operator-Schmidt route)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (d1 * d2, d1 * d2):
        raise InvalidInputError("unitary dimension does not match d1*d2")
    # |psi_U> coefficients: psi[(i,j),(i',j')] = U[(i,j),(i',j')] / sqrt(d1 d2);
    # group row/column indices of subsystem 1 together and Schmidt-split.
    m = u.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)
    m = m / math.sqrt(d1 * d2)
    rho1 = m @ m.conj().T
    purity = float(np.real(np.trace(rho1 @ rho1)))
    return float(np.clip(1.0 - purity, 0.0, 1.0))


def _swap_1_3(d1: int, d2: int) -> np.ndarray:
    dims = (d1, d2, d1, d2)
    total = d1 * d2 * d1 * d2
    t = np.zeros((total, total))
    for idx in np.ndindex(dims):
        src = np.ravel_multi_index(idx, dims)
        dst = np.ravel_multi_index((idx[2], idx[1], idx[0], idx[3]), dims)
        t[dst, src] = 1.0
    return t


def entanglement_from_heat(nu_yz: float, nu_zz: float, duration: float) -> float:
    """E(U) of the target-spectator unitary generated by the measured rates.

    Builds H = nu_yz YZ/2 + nu_zz ZZ/2 on the (target, spectator) pair and
    exponentiates for ``duration``.
    """
    h = 0.5 * nu_yz * pauli_matrix("YZ") + 0.5 * nu_zz * pauli_matrix("ZZ")
    return unitary_entanglement(mat_exp(h, duration), 2, 2)


def average_gate_fidelity_ptm(r: np.ndarray, r_ideal: np.ndarray | None = None) -> float:
    """Average gate fidelity of a channel (PTM) against an ideal unitary PTM.

    F_avg = (d F_pro + 1) / (d + 1) with F_pro = tr(R_ideal^T R) / d^2.
    """
    d2 = r.shape[0]
    d = int(round(math.sqrt(d2)))
    target = np.eye(d2) if r_ideal is None else r_ideal
    f_pro = float(np.trace(target.T @ r)) / d2
    return (d * f_pro + 1.0) / (d + 1.0)
