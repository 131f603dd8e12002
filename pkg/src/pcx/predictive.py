"""Predictive-state machinery for finite bipartite systems.

Declared equivalence subspaces of the exterior factor are collapsed onto
single rays; surviving coefficients are renormalized so every equivalence
class keeps its total probability.  The entropy of the reduced operator
after this map is the predictive complexity of the interior factor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, NormalizationError

ORTHO_TOL = 1e-10
DEGENERATE_PHASE_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteState:
    """Normalized pure state on H_A (x) H_B, amplitudes indexed (a, b)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 2:
            raise ValueError("amplitudes must be a 2-D (dim_a, dim_b) array")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise NormalizationError(f"state norm {norm!r} is not 1")

    @property
    def dim_a(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amplitudes.shape[1]

    @classmethod
    def from_amplitudes(cls, amps) -> "BipartiteState":
        amps = np.asarray(amps, dtype=np.complex128)
        return cls(amps / np.linalg.norm(amps))


def _one_hot_columns(mat: np.ndarray) -> list[int] | None:
    """If every column of mat is exactly a basis vector, return their indices."""
    idx = []
    for col in mat.T:
        hits = np.nonzero(col)[0]
        if len(hits) != 1 or col[hits[0]] != 1.0:
            return None
        idx.append(int(hits[0]))
    return idx


def _orthonormal_complement(stacked: np.ndarray, dim_b: int) -> np.ndarray:
    """Deterministic orthonormal basis of the complement of span(stacked)."""
    if stacked.shape[1] == 0:
        return np.eye(dim_b, dtype=np.complex128)
    hot = _one_hot_columns(stacked)
    if hot is not None:
        rest = sorted(set(range(dim_b)) - set(hot))
        return np.eye(dim_b, dtype=np.complex128)[:, rest]
    u, _, _ = np.linalg.svd(stacked, full_matrices=True)
    comp = u[:, stacked.shape[1]:]
    # fix column phases: largest-magnitude entry made real positive
    out = comp.copy()
    for k in range(out.shape[1]):
        pivot = np.argmax(np.abs(out[:, k]))
        piv = out[pivot, k]
        if abs(piv) > 0:
            out[:, k] *= np.conj(piv) / abs(piv)
    return out


@dataclass(frozen=True)
class EquivalencePartition:
    """Mutually orthogonal equivalence subspaces of H_B plus the remainder.

    Each subspace is given by an orthonormal-column matrix (dim_b, n_s) with
    n_s >= 2.  The remainder basis (the inequivalent states) is derived
    deterministically; gamma vectors are the normalized in-class sums.
    """

    dim_b: int
    subspaces: tuple = ()
    gammas: np.ndarray = field(init=False, repr=False)
    remainder: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        subs = tuple(np.asarray(s, dtype=np.complex128) for s in self.subspaces)
        object.__setattr__(self, "subspaces", subs)
        for s in subs:
            if s.ndim != 2 or s.shape[0] != self.dim_b or s.shape[1] < 2:
                raise GeometryError("each subspace needs >= 2 orthonormal columns in H_B")
        if subs:
            stacked = np.hstack(subs)
        else:
            stacked = np.zeros((self.dim_b, 0), dtype=np.complex128)
        if stacked.shape[1] > self.dim_b:
            raise GeometryError("subspaces overfill H_B")
        gram = stacked.conj().T @ stacked
        if stacked.shape[1] and np.max(np.abs(gram - np.eye(stacked.shape[1]))) > ORTHO_TOL:
            raise GeometryError("subspace vectors are not mutually orthonormal")
        gammas = np.hstack(
            [s.sum(axis=1, keepdims=True) / np.sqrt(s.shape[1]) for s in subs]
        ) if subs else np.zeros((self.dim_b, 0), dtype=np.complex128)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "remainder", _orthonormal_complement(stacked, self.dim_b))

    @classmethod
    def from_index_groups(cls, dim_b: int, groups) -> "EquivalencePartition":
        """Partition whose subspaces are spanned by computational basis states."""
        eye = np.eye(dim_b, dtype=np.complex128)
        return cls(dim_b=dim_b, subspaces=tuple(eye[:, sorted(g)] for g in groups))

    @property
    def n_subspaces(self) -> int:
        return len(self.subspaces)

    @property
    def remainder_dim(self) -> int:
        return self.remainder.shape[1]

    @property
    def primed_dim(self) -> int:
        return self.n_subspaces + self.remainder_dim

    @property
    def primed_basis(self) -> np.ndarray:
        """H_B coordinates of the predictive basis [gamma_1.., remainder..]."""
        return np.hstack([self.gammas, self.remainder])

    def embed(self, primed_amplitudes: np.ndarray) -> np.ndarray:
        """Map (dim_a, primed_dim) coefficients back into H_B coordinates."""
        return np.asarray(primed_amplitudes) @ self.primed_basis.T


@dataclass(frozen=True)
class Projector:
    """Idempotent map collapsing each equivalence subspace onto its gamma ray."""

    matrix: np.ndarray
    gammas: np.ndarray


def build_projector(part: EquivalencePartition) -> Projector:
    P = np.eye(part.dim_b, dtype=np.complex128)
    for s, sub in enumerate(part.subspaces):
        gamma = part.gammas[:, s]
        P -= sub @ sub.conj().T
        P += np.outer(gamma, gamma.conj())
    return Projector(matrix=P, gammas=part.gammas)


def _collapse(coeffs: np.ndarray) -> tuple[np.ndarray, int]:
    """Per-row collapse of in-class coefficients: sqrt(mass) * unit phase.

    Rows whose coefficient sum vanishes relative to their mass get phase 1;
    the count of such degenerate-phase rows is returned.
    """
    mass = np.sum(np.abs(coeffs) ** 2, axis=1)
    zsum = coeffs.sum(axis=1)
    degenerate = np.abs(zsum) < DEGENERATE_PHASE_TOL * np.sqrt(np.maximum(mass, 0.0))
    phases = np.where(degenerate, 1.0 + 0j, zsum / np.where(np.abs(zsum) == 0, 1.0, np.abs(zsum)))
    nonzero_mass = mass > 0
    return np.sqrt(mass) * phases, int(np.count_nonzero(degenerate & nonzero_mass))


@dataclass(frozen=True)
class PredictiveState(BipartiteState):
    """State on H_A (x) H'_B in the [gamma.., remainder..] coordinates."""

    partition: EquivalencePartition = None
    degenerate_phases: int = 0


def predictive_map(psi: BipartiteState, part: EquivalencePartition) -> PredictiveState:
    """Project psi onto the predictive state space and renormalize.

    For each interior index the coefficient on a class gamma carries the
    full in-class probability and the phase of the plain coefficient sum;
    remainder coefficients are copied verbatim.  The output is normalized
    by construction.
    """
    if psi.dim_b != part.dim_b:
        raise ValueError("state and partition disagree on dim_b")
    blocks = []
    n_degenerate = 0
    for s, sub in enumerate(part.subspaces):
        coeffs = psi.amplitudes @ np.conj(sub)
        col, ndeg = _collapse(coeffs)
        n_degenerate += ndeg
        blocks.append(col[:, None])
    blocks.append(psi.amplitudes @ np.conj(part.remainder))
    out = np.hstack(blocks)
    return PredictiveState(amplitudes=out, partition=part, degenerate_phases=n_degenerate)


def reduced_density(psi: BipartiteState, side: str = "a") -> np.ndarray:
    """Partial trace of |psi><psi| over the other factor."""
    a = psi.amplitudes
    if side == "a":
        return a @ a.conj().T
    if side == "b":
        return a.T @ a.conj()
    raise ValueError("side must be 'a' or 'b'")


def predictive_reduced_density(psi: BipartiteState, part: EquivalencePartition) -> np.ndarray:
    """Reduced density operator of A after the predictive map.

    Accumulated directly from per-class masses, phases and remainder
    coefficients, without materializing the primed state; agrees with
    reduced_density(predictive_map(psi, part)).
    """
    if psi.dim_b != part.dim_b:
        raise ValueError("state and partition disagree on dim_b")
    rho = np.zeros((psi.dim_a, psi.dim_a), dtype=np.complex128)
    for sub in part.subspaces:
        coeffs = psi.amplitudes @ np.conj(sub)
        w, _ = _collapse(coeffs)
        rho += np.outer(w, w.conj())
    rest = psi.amplitudes @ np.conj(part.remainder)
    rho += rest @ rest.conj().T
    return rho


def von_neumann_entropy(rho: np.ndarray, base: str = "bits") -> float:
    """Entropy -tr(rho log rho); log base 2 by default, 'nats' optional."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise NormalizationError("density matrix is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-9:
        raise NormalizationError(f"density matrix trace {trace!r} is not 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-12:
        raise NormalizationError(f"density matrix has negative eigenvalue {evals.min()!r}")
    evals = np.clip(evals, 0.0, None)
    positive = evals[evals > 0]
    s_nats = float(-(positive * np.log(positive)).sum()) + 0.0
    if base == "nats":
        return s_nats
    if base == "bits":
        return s_nats / np.log(2.0)
    raise ValueError("base must be 'bits' or 'nats'")


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """(1/2) ||rho1 - rho2||_1 for Hermitian operators."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho1 - rho2))))


def equivalence_residual(phi1, phi2, psi, t: float, dynamics) -> float:
    """How far two exterior states are from predicting the same interior.

    Builds the products psi (x) phi_i, evolves both with the supplied
    dynamics callback (BipartiteState, t) -> BipartiteState, and returns
    the trace distance of the two interior reduced operators at time t.
    Zero means the pair is predictively equivalent at t for this psi.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    rhos = []
    for phi in (phi1, phi2):
        state = BipartiteState.from_amplitudes(np.outer(psi, np.asarray(phi, dtype=np.complex128)))
        rhos.append(reduced_density(dynamics(state, t), side="a"))
    return trace_distance(rhos[0], rhos[1])


def monitor_complexity_bound(s_bits: float, c_bits: float, context: str = "", slack: float = 1e-9) -> bool:
    """Monitored conjecture C <= S; violations warn loudly, never pass silently."""
    if c_bits > s_bits + slack:
        warnings.warn(
            f"complexity bound violated{': ' + context if context else ''}: "
            f"C={c_bits!r} > S={s_bits!r}",
            stacklevel=2,
        )
        return False
    return True


def worked_qubit_qutrit_example(amps=None) -> dict:
    """2 x 3 worked example with the first two exterior states equivalent.

    Returns the projector, primed coefficients, both reduced operators and
    both entropies for amplitudes (a1..a6) laid out row-major over
    {|1>_A, |2>_A} x {|1>_B, |2>_B, |3>_B}.  Non-normalized input is
    normalized (flagged in the result).
    """
    if amps is None:
        amps = (0.5, 0.5, 0.0, 0.5, 0.0, 0.5)
    a = np.asarray(amps, dtype=np.complex128)
    if a.shape != (6,):
        raise ValueError("need exactly six amplitudes a1..a6")
    norm = np.linalg.norm(a)
    if norm == 0:
        raise NormalizationError("amplitudes are all zero")
    renormalized = abs(norm - 1.0) > 1e-9
    psi = BipartiteState(amplitudes=(a / norm).reshape(2, 3))
    part = EquivalencePartition.from_index_groups(3, [(0, 1)])
    primed = predictive_map(psi, part)
    rho_a = reduced_density(psi, side="a")
    rho_a_primed = predictive_reduced_density(psi, part)
    return {
        "projector": build_projector(part).matrix,
        "primed_coefficients": primed.amplitudes,
        "rho_a": rho_a,
        "rho_a_primed": rho_a_primed,
        "entropy_bits": von_neumann_entropy(rho_a),
        "complexity_bits": von_neumann_entropy(rho_a_primed),
        "degenerate_phases": primed.degenerate_phases,
        "renormalized": renormalized,
    }
