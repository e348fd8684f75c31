"""Executing protocols against a true box, shot sampling, and multi-candidate elimination.

Shot ``i`` of a run seeded with ``s`` always draws the same uniform variate
(a counter-based stream keyed by ``(s, i)``), so sampled counts do not depend
on how shots are batched or scheduled.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .arc import PHASE_TOL, min_runs
from .errors import DimensionMismatch, IndexOutOfRange, NotDifferent
from .linalg import as_matrix, basis_state, certify_unitary, ensure_unitary, fourier_matrix, fourier_state, haar_state
from .synthesis import ORTH_TOL, build_measurement, execute, synthesize_protocol

SNAP_TOL = 1e-12
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ShotRecord:
    label: str
    probability: float
    counts: int


def clean_probabilities(p):
    """Clip round-off: entries within 1e-12 of zero become zero, then renormalize."""
    p = np.asarray(p, dtype=np.float64).copy()
    p[p < SNAP_TOL] = 0.0
    total = p.sum()
    if total <= 0:
        raise ValueError("probabilities vanish")
    return p / total


def sample_counts(probabilities, shots, seed):
    if shots < 1:
        raise ValueError("shots must be positive")
    cdf = np.cumsum(probabilities)
    cdf[-1] = 1.0
    return _kernels.sample_categorical(np.ascontiguousarray(cdf), int(seed) & SEED_MASK, int(shots))


def run_protocol(protocol, truth, shots, seed, measurement=None):
    """Run ``protocol`` with ``truth`` inside the box and sample ``shots`` outcomes."""
    truth = ensure_unitary(truth)
    if truth.dim != protocol.dim:
        raise DimensionMismatch(f"truth has dim {truth.dim}, protocol expects {protocol.dim}")
    measurement = measurement or build_measurement(protocol)
    out = execute(truth, protocol.interleavers, protocol.input_state)
    probs = clean_probabilities(measurement.probabilities(out))
    counts = sample_counts(probs, shots, seed)
    return [ShotRecord(label, float(p), int(c)) for label, p, c in zip(measurement.labels, probs, counts)]


@dataclass(frozen=True)
class TournamentRound:
    pair: tuple
    num_runs: int
    outcome: str
    eliminated: int


@dataclass(frozen=True)
class TournamentTranscript:
    rounds: tuple
    survivor: int
    total_runs: int
    max_pair_runs: int

    @property
    def bound(self):
        return (len(self.rounds)) * self.max_pair_runs


def pairwise_runs(candidates, phase_tol=PHASE_TOL):
    """``{(i, j): N_ij}`` for every candidate pair; raises NotDifferent on a degenerate pair."""
    runs = {}
    for i, j in combinations(range(len(candidates)), 2):
        try:
            runs[(i, j)] = min_runs(candidates[i], candidates[j], phase_tol)
        except NotDifferent as exc:
            raise NotDifferent(f"candidates {i} and {j} coincide up to a global phase") from exc
    return runs


def eliminate_tournament(candidates, truth_index, seed, orth_tol=ORTH_TOL, phase_tol=PHASE_TOL):
    """Knock out one candidate per round until one is left.

    Each round separates the first two survivors with their sequential
    protocol and measures ``{P, I - P}`` with P the projector on the first
    candidate's output: outcome P drops the second candidate, otherwise the
    first is dropped.
    """
    candidates = [ensure_unitary(c) for c in candidates]
    if len(candidates) < 2:
        raise ValueError("need at least two candidates")
    if not 0 <= truth_index < len(candidates):
        raise IndexOutOfRange(f"truth index {truth_index} outside [0, {len(candidates)})")
    if len({c.dim for c in candidates}) != 1:
        raise DimensionMismatch("candidates differ in dimension")
    n_max = max(pairwise_runs(candidates, phase_tol).values())
    truth = candidates[truth_index]

    alive = list(range(len(candidates)))
    rounds = []
    while len(alive) > 1:
        a, b = alive[0], alive[1]
        protocol = synthesize_protocol(candidates[a], candidates[b], orth_tol, phase_tol)
        out = protocol.run(truth)
        ref = protocol.branch_u_output
        p_first = abs(np.vdot(ref, out)) ** 2 / np.vdot(ref, ref).real
        probs = clean_probabilities([p_first, max(1.0 - p_first, 0.0)])
        counts = sample_counts(probs, 1, _kernels.derive_seed(seed, len(rounds)))
        if counts[0] == 1:
            outcome, dropped = "P", b
        else:
            outcome, dropped = "I-P", a
        alive.remove(dropped)
        rounds.append(TournamentRound(pair=(a, b), num_runs=protocol.num_runs, outcome=outcome, eliminated=dropped))
    return TournamentTranscript(
        rounds=tuple(rounds),
        survivor=alive[0],
        total_runs=sum(r.num_runs for r in rounds),
        max_pair_runs=n_max,
    )


def pauli_matrix(d, m, n):
    """Generalized Pauli ``sigma_mn = sum_k w^{nk} |k+m><k|``, ``w = exp(2 pi i / d)``."""
    if d < 2 or not (0 <= m < d and 0 <= n < d):
        raise IndexOutOfRange(f"(m, n) = ({m}, {n}) outside [0, {d})")
    k = np.arange(d)
    out = np.zeros((d, d), dtype=np.complex128)
    out[(k + m) % d, k] = np.exp(2j * np.pi * ((n * k) % d) / d)
    return certify_unitary(out)


@dataclass(frozen=True, eq=False)
class PauliTwoRunProtocol:
    """Product input ``|0> x |0~>``; read qudit 1 in the computational and qudit 2 in the Fourier basis."""

    d: int
    input_state: np.ndarray
    readout: np.ndarray
    runs: int = 2

    def output(self, truth):
        t = as_matrix(truth)
        if t.shape[0] != self.d:
            raise DimensionMismatch(f"truth has dim {t.shape[0]}, expected {self.d}")
        return np.kron(t, t) @ self.input_state

    def outcome_probabilities(self, truth):
        """``d x d`` table of readout probabilities indexed by (m, n)."""
        amps = self.readout.conj().T @ self.output(truth)
        return (np.abs(amps) ** 2).reshape(self.d, self.d)

    def identify(self, truth):
        probs = self.outcome_probabilities(truth)
        m, n = np.unravel_index(int(np.argmax(probs)), probs.shape)
        return (int(m), int(n)), float(probs[m, n])

    def sample(self, truth, shots, seed):
        probs = clean_probabilities(self.outcome_probabilities(truth).ravel())
        return sample_counts(probs, shots, seed).reshape(self.d, self.d)


def pauli_two_run_protocol(d):
    if d < 2:
        raise IndexOutOfRange("d must be at least 2")
    psi = np.kron(basis_state(d, 0), fourier_state(d, 0))
    readout = np.kron(np.eye(d), fourier_matrix(d))
    return PauliTwoRunProtocol(d=d, input_state=psi, readout=readout)


def pauli_one_run_impossible(d, trials, seed, states=None, tol=1e-6):
    """Check that no single-qudit input separates all ``d^2`` Pauli operators in one run.

    For each input (random unless ``states`` is given) some pair of images
    must overlap by more than ``tol``.
    """
    paulis = np.array([pauli_matrix(d, m, n).matrix for m in range(d) for n in range(d)])
    if states is None:
        rng = np.random.default_rng(seed)
        states = [haar_state(d, rng) for _ in range(trials)]
    for psi in states:
        images = paulis @ np.asarray(psi, dtype=np.complex128)
        gram = np.abs(images.conj() @ images.T)
        np.fill_diagonal(gram, 0.0)
        if gram.max() <= tol:
            return False
    return True
