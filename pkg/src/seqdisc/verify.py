"""Sampling and search based checks of the arc-width and run-count properties.

These checks sample and search; a passing report is evidence, not proof.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .arc import PHASE_TOL, min_runs, minimal_covering_arc, relative_operator, theta
from .errors import DimensionMismatch, HypothesisViolation, PreconditionViolation
from .linalg import as_matrix, eigenphases, ensure_unitary, haar_unitary

IDENTITY_TOL = 1e-9
SEARCH_TOL = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 50
    iterations: int = 40
    seed: int = 0
    samples: int = 10_000
    parametrization: str = "phased-givens"

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("restarts and iterations must be positive")


@dataclass(frozen=True)
class OptimalityReport:
    k: int
    best_chain_theta: float
    best_orthogonality_gap: float
    chain_bound: float
    overlap_floor: float
    samples: int
    restarts: int
    seed: int
    restart_thetas: tuple = field(default=(), repr=False)

    @property
    def passed(self):
        below_pi = self.best_chain_theta < np.pi - SEARCH_TOL
        bounded = self.best_chain_theta <= min(self.chain_bound, np.pi) + SEARCH_TOL
        floor_ok = self.best_orthogonality_gap >= self.overlap_floor - SEARCH_TOL
        return below_pi and bounded and floor_ok


def random_unitary_with_arc(d, width, rng):
    """Haar-rotated unitary whose eigenphases fill an arc of exactly ``width`` at a random offset."""
    offset = rng.uniform(0, 2 * np.pi)
    inner_phases = np.concatenate([[0.0, width], rng.uniform(0, width, d - 2)])[:d] if d > 1 else np.zeros(1)
    frame = haar_unitary(d, rng).matrix
    return ensure_unitary((frame * np.exp(1j * (offset + inner_phases))) @ frame.conj().T)


def check_subadditivity(u, v):
    """``(theta(UV), theta(U) + theta(V), holds)`` when theta(U) + theta(V) < pi."""
    tu, tv = theta(u), theta(v)
    if tu + tv >= np.pi:
        raise HypothesisViolation(f"theta(U) + theta(V) = {tu + tv:.12g} >= pi")
    lhs = theta(as_matrix(ensure_unitary(u)) @ as_matrix(ensure_unitary(v)))
    rhs = tu + tv
    return lhs, rhs, lhs <= rhs + IDENTITY_TOL


def subadditivity_sweep(d, trials, seed):
    """Random pairs with ``theta(U) + theta(V) < pi``; returns (violations, worst slack, first counterexample)."""
    rng = np.random.default_rng([seed, d])
    violations, worst, example = 0, -np.inf, None
    for _ in range(trials):
        total = rng.uniform(0, np.pi)
        split = rng.uniform(0, 1)
        u = random_unitary_with_arc(d, total * split, rng)
        v = random_unitary_with_arc(d, total * (1 - split), rng)
        try:
            lhs, rhs, holds = check_subadditivity(u, v)
        except HypothesisViolation:
            continue
        worst = max(worst, lhs - rhs)
        if not holds:
            violations += 1
            if example is None:
                example = (u, v, lhs, rhs)
    return violations, worst, example


def chain_operator(w, interleavers):
    """``(X_{k-1}...X_1)^H W X_{k-1} W ... X_1 W`` for the pair (W, I)."""
    wm = as_matrix(w)
    x_prod = np.eye(wm.shape[0], dtype=np.complex128)
    chain = wm
    for x in interleavers:
        xm = as_matrix(x)
        if xm.shape != wm.shape:
            raise DimensionMismatch("interleaver dimension differs from the operator")
        chain = wm @ xm @ chain
        x_prod = xm @ x_prod
    return x_prod.conj().T @ chain


def chain_theta(w, interleavers):
    return minimal_covering_arc(eigenphases(chain_operator(w, interleavers))).width


def givens_unitary(params, d):
    """Product of ``d(d-1)/2`` phased Givens rotations and a diagonal phase layer (``d^2`` parameters)."""
    params = np.asarray(params, dtype=np.float64)
    out = np.diag(np.exp(1j * params[-d:])).astype(np.complex128)
    pos = 0
    for p in range(d):
        for q in range(p + 1, d):
            t, phi = params[pos], params[pos + 1]
            pos += 2
            g = np.eye(d, dtype=np.complex128)
            c, s = math.cos(t), math.sin(t)
            g[p, p], g[q, q] = c, c
            g[p, q] = -np.exp(-1j * phi) * s
            g[q, p] = np.exp(1j * phi) * s
            out = g @ out
    return out


def _interleavers(x, d, count):
    size = d * d
    return [givens_unitary(x[i * size:(i + 1) * size], d) for i in range(count)]


def _pattern_search(objective, x0, iterations, step=0.5, min_step=1e-6):
    """Coordinate-wise compass search maximizing ``objective``."""
    x, best = x0.copy(), objective(x0)
    for _ in range(iterations):
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sign * step
                val = objective(trial)
                if val > best:
                    x, best, improved = trial, val, True
                    break
        if not improved:
            step *= 0.5
            if step < min_step:
                break
    return x, best


def sampled_min_overlap(chain, samples, rng):
    """Smallest ``|<psi|C|psi>|`` over random unit vectors (an upper estimate of the true minimum)."""
    c = as_matrix(chain)
    d = c.shape[0]
    psi = rng.standard_normal((d, samples)) + 1j * rng.standard_normal((d, samples))
    psi /= np.linalg.norm(psi, axis=0)
    vals = np.einsum("ij,ij->j", psi.conj(), c @ psi)
    return float(np.abs(vals).min())


def optimality_search(u, v, k, cfg=SearchConfig(), phase_tol=PHASE_TOL):
    """Try hard to make ``k < N`` runs separate U from V by maximizing the chain arc width.

    Each restart draws its start point from the stream ``(seed, restart)`` and
    runs a derivative-free compass search over the interleavers; ties between
    restarts go to the lowest index.
    """
    w = relative_operator(u, v)
    n = min_runs(u, v, phase_tol)
    if not 1 <= k < n:
        raise PreconditionViolation(f"k={k} must satisfy 1 <= k < N={n}")
    d = w.dim
    tw = theta(w)
    count = k - 1
    dim = count * d * d

    def objective(x):
        return chain_theta(w, _interleavers(x, d, count))

    best_theta, best_gap, thetas = -np.inf, np.inf, []
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        x0 = rng.uniform(0, 2 * np.pi, dim)
        if dim:
            x, val = _pattern_search(objective, x0, cfg.iterations)
        else:
            x, val = x0, objective(x0)
        thetas.append(val)
        if val > best_theta:
            best_theta = val
        gap = sampled_min_overlap(chain_operator(w, _interleavers(x, d, count)), cfg.samples, rng)
        best_gap = min(best_gap, gap)
    return OptimalityReport(
        k=k,
        best_chain_theta=float(best_theta),
        best_orthogonality_gap=float(best_gap),
        chain_bound=float(k * tw),
        overlap_floor=float(math.cos(min(k * tw, np.pi) / 2)),
        samples=cfg.samples,
        restarts=cfg.restarts,
        seed=cfg.seed,
        restart_thetas=tuple(thetas),
    )


def random_multi_run_pair(d, rng, min_n=3, max_n=6):
    """A pair (U, I) with ``min_n <= N <= max_n``."""
    target = int(rng.integers(min_n, max_n + 1))
    lo, hi = np.pi / target, np.pi / (target - 1)
    width = rng.uniform(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo))
    return random_unitary_with_arc(d, width, rng), ensure_unitary(np.eye(d))


def max_entangled_overlap(u, v):
    """``<Phi|(I x U)^H (I x V)|Phi>`` with ``Phi = (|00> + |11>)/sqrt(2)``."""
    a, b = as_matrix(ensure_unitary(u)), as_matrix(ensure_unitary(v))
    phi = np.zeros(4, dtype=np.complex128)
    phi[0] = phi[3] = 1 / math.sqrt(2)
    return complex(np.vdot(np.kron(np.eye(2), a) @ phi, np.kron(np.eye(2), b) @ phi))


def qubit_one_run_criterion(u, v, tol=IDENTITY_TOL):
    """Three equivalent single-run tests for qubits: trace zero, arc width pi, and orthogonal outputs on Phi.

    The entangled overlap equals ``tr(U^H V) / 2``, so it is compared against
    ``tol / 2`` to keep the three tests on the same boundary.
    """
    u, v = ensure_unitary(u), ensure_unitary(v)
    if u.dim != 2 or v.dim != 2:
        raise DimensionMismatch("the qubit criterion needs 2 x 2 operators")
    w = relative_operator(u, v)
    trace_zero = abs(np.trace(w.matrix)) <= tol
    theta_pi = theta(w) >= np.pi - tol
    entangled = abs(max_entangled_overlap(u, v)) <= tol / 2
    return trace_zero, theta_pi, entangled


def near_boundary_qubit_pair(rng, trace_modulus):
    """Haar-random U and V = U W with ``|tr W|`` equal to ``trace_modulus``."""
    gap = math.pi - 2 * math.asin(trace_modulus / 2)
    w = random_unitary_with_arc(2, gap, rng)
    u = haar_unitary(2, rng)
    return u, ensure_unitary(u.matrix @ w.matrix)


def criterion_sweep(trials, seed, adversarial=100):
    """Random and near-boundary qubit pairs; returns (disagreements, first counterexample)."""
    rng = np.random.default_rng(seed)
    bad, example = 0, None
    pairs = [(haar_unitary(2, rng), haar_unitary(2, rng)) for _ in range(trials)]
    pairs += [near_boundary_qubit_pair(rng, rng.uniform(0, 1e-6)) for _ in range(adversarial)]
    for u, v in pairs:
        flags = qubit_one_run_criterion(u, v)
        if len(set(flags)) != 1:
            bad += 1
            example = example or (u, v, flags)
    return bad, example
