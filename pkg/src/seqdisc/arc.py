"""Minimal covering arcs on the unit circle and the spectral arc width of a unitary."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, EmptyInput, NoCertificate, NotDifferent, TooLarge
from .linalg import TWO_PI, as_matrix, eigenphases, ensure_unitary, wrap_phase

PHASE_TOL = 1e-8
MERGE_TOL = 1e-8
SUM_DEDUP_TOL = 1e-12
CEIL_GUARD = 1e-9
HULL_TOL = 1e-10
MAX_COMBINATIONS = 10**6


@dataclass(frozen=True)
class Arc:
    """Counter-clockwise arc ``[start, start + width]`` (radians, modulo 2pi)."""

    start: float
    width: float

    @property
    def end(self):
        return float(wrap_phase(self.start + self.width))

    def contains(self, phase, tol=1e-12):
        offset = float(wrap_phase(phase - self.start))
        return offset <= self.width + tol or offset >= TWO_PI - tol


@dataclass(frozen=True)
class HullCertificate:
    """Convex weights on at most three phases whose unit vectors average to zero."""

    support: tuple
    weights: np.ndarray
    phases: np.ndarray

    @property
    def residual(self):
        return float(abs(np.sum(self.weights * np.exp(1j * self.phases))))


def _sorted_phases(phases):
    p = np.ascontiguousarray(np.sort(wrap_phase(np.asarray(phases, dtype=np.float64).ravel())))
    if p.size == 0:
        raise EmptyInput("phase multiset is empty")
    if not np.all(np.isfinite(p)):
        raise ValueError("phases must be finite")
    return p


def minimal_covering_arc(phases, merge_tol=MERGE_TOL):
    """Smallest arc containing every phase.

    Phases closer than ``merge_tol`` (single linkage) are merged before the
    largest circular gap is located; the arc starts right after that gap.
    """
    start, width = _kernels.covering_arc(_sorted_phases(phases), merge_tol)
    return Arc(start=float(start), width=float(width))


def theta(u):
    """Length of the smallest arc holding every eigenvalue of ``u``."""
    return minimal_covering_arc(eigenphases(ensure_unitary(u))).width


def relative_operator(u, v):
    """``U^H V``, the operator whose spectrum decides how well U and V separate."""
    a, b = as_matrix(ensure_unitary(u)), as_matrix(ensure_unitary(v))
    if a.shape != b.shape:
        raise DimensionMismatch(f"candidates have shapes {a.shape} and {b.shape}")
    return ensure_unitary(a.conj().T @ b)


def runs_for_width(width, phase_tol=PHASE_TOL):
    """Fewest runs for an arc width: ``ceil(pi / width)`` with a guard against round-off.

    Widths within ``phase_tol`` of pi count as pi (one run); a width at or
    below ``phase_tol`` means the operators coincide up to global phase.
    """
    if width <= phase_tol:
        raise NotDifferent(f"arc width {width:.3e} is within {phase_tol:.1e}: operators equal up to a global phase")
    if width >= np.pi - phase_tol:
        return 1
    return max(1, math.ceil(np.pi / width - CEIL_GUARD))


def min_runs(u, v, phase_tol=PHASE_TOL):
    return runs_for_width(theta(relative_operator(u, v)), phase_tol)


def _barycentric(angles):
    a = np.array([np.cos(angles), np.sin(angles), np.ones(3)])
    w = np.linalg.solve(a, np.array([0.0, 0.0, 1.0]))
    w = np.clip(w, 0.0, None)
    return w / w.sum()


def zero_hull_weights(phases, phase_tol=PHASE_TOL):
    """Carathéodory certificate that 0 lies in the convex hull of ``e^{i phases}``.

    Prefers an (almost) antipodal pair with weights 1/2; otherwise takes the
    first phase and the two phases whose sector contains its antipode.
    """
    p = wrap_phase(np.asarray(phases, dtype=np.float64).ravel())
    if p.size == 0:
        raise EmptyInput("phase multiset is empty")
    width = minimal_covering_arc(p).width
    if width < np.pi - phase_tol:
        raise NoCertificate(f"arc width {width:.12g} < pi: 0 is outside the convex hull")

    n = p.size
    best_pair, best_miss = None, np.inf
    for i in range(n):
        for j in range(i + 1, n):
            sep = abs(float(p[j] - p[i]))
            miss = abs(min(sep, TWO_PI - sep) - np.pi)
            if miss < best_miss:
                best_pair, best_miss = (i, j), miss
    half = np.array([0.5, 0.5])

    def pair_cert():
        i, j = best_pair
        return HullCertificate(support=(i, j), weights=half, phases=p[[i, j]])

    if best_pair is not None and best_miss <= 2 * HULL_TOL:
        return pair_cert()

    rel = wrap_phase(p - p[0])
    below = [j for j in range(1, n) if rel[j] < np.pi]
    above = [j for j in range(1, n) if rel[j] > np.pi]
    if below and above:
        lo = max(below, key=lambda j: (rel[j], -j))
        hi = min(above, key=lambda j: (rel[j], j))
        support = (0, lo, hi)
        cert = HullCertificate(support=support, weights=_barycentric(p[list(support)]), phases=p[list(support)])
        if cert.residual <= HULL_TOL:
            return cert
    # arc width within phase_tol below pi: the nearest antipodal pair is the best available
    if best_pair is None:
        raise NoCertificate("a single phase cannot average to zero")
    return pair_cert()


def _distinct(phases, tol=SUM_DEDUP_TOL):
    p = _sorted_phases(phases)
    keep = np.empty(p.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(p) > tol
    return np.ascontiguousarray(p[keep])


def combination_count(distinct_counts_and_reps):
    """Number of phase-sum combinations: a product of multiset coefficients C(n + r - 1, r)."""
    total = 1
    for n, r in distinct_counts_and_reps:
        total *= math.comb(n + r - 1, r)
    return total


def phase_sum_width(phase_sets, max_combinations=MAX_COMBINATIONS):
    """Arc width of ``{sum_i phi_i : phi_i in phase_sets[i]}`` without building the tensor product."""
    sets = [_distinct(s) for s in phase_sets]
    if not sets:
        raise EmptyInput("no phase sets given")
    groups = {}
    for s in sets:
        key = s.tobytes()
        n, r = groups.get(key, (s.size, 0))
        groups[key] = (n, r + 1)
    count = combination_count(groups.values())
    if count > max_combinations:
        raise TooLarge(f"{count} phase-sum combinations exceed the limit of {max_combinations}")
    acc = sets[0]
    for s in sets[1:]:
        acc = _kernels.phase_sumset(acc, s, SUM_DEDUP_TOL)
    return minimal_covering_arc(acc).width


def theta_tensor_power(u, k, max_combinations=MAX_COMBINATIONS):
    """Arc width of ``u`` tensored with itself ``k`` times, from sums of eigenphases."""
    if k < 1:
        raise ValueError("k must be at least 1")
    phases = eigenphases(ensure_unitary(u))
    return phase_sum_width([phases] * k, max_combinations)
