"""Entanglement-free sequential protocols that separate two unitaries with certainty.

With ``W = U^H V`` and ``N = ceil(pi / theta(W))`` runs, the protocol applies
the unknown box N times to one qudit, interleaving ``U^H`` between the first
N-1 runs and ``X U^H`` before the last one. ``X`` is a real plane rotation
between the two eigenvectors of ``W`` at the ends of its spectral arc, chosen
so that ``X^H W X W^{N-1}`` has two antipodal eigenvalues; the input state is
the balanced superposition of their eigenvectors.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .arc import PHASE_TOL, minimal_covering_arc, relative_operator, runs_for_width, zero_hull_weights
from .errors import DimensionMismatch, NotDifferent, NumericalFailure, OrthogonalityFailure, PreconditionViolation
from .linalg import as_matrix, certify_unitary, ensure_unitary, inner, spectral_decompose, wrap_phase

ORTH_TOL = 1e-7
INTERNAL_TOL = 1e-9
BRACKET_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralSplit:
    phase_beta: float
    plus_vector: np.ndarray
    minus_vector: np.ndarray


@dataclass(frozen=True, eq=False)
class SequentialProtocol:
    """A certified N-run protocol and the two output states it separates."""

    num_runs: int
    input_state: np.ndarray
    interleavers: tuple
    branch_u_output: np.ndarray
    branch_v_output: np.ndarray
    candidate_u: object
    candidate_v: object
    orth_defect: float
    bumped: bool = False
    rotation: object = field(default=None, repr=False)

    @property
    def dim(self):
        return self.input_state.shape[0]

    def run(self, box):
        """Output state when the unknown box is ``box``."""
        return execute(box, self.interleavers, self.input_state)


def execute(box, interleavers, psi):
    """``box X_{N-1} box ... X_1 box psi``."""
    o = as_matrix(box)
    state = np.asarray(psi, dtype=np.complex128)
    if state.shape != (o.shape[0],):
        raise DimensionMismatch(f"box of dim {o.shape[0]} cannot act on a state of shape {state.shape}")
    state = o @ state
    for x in interleavers:
        state = o @ (as_matrix(x) @ state)
    return state


def rotation_angle(theta, n):
    """Rotation angle making ``tr(R^H D R D^{n-1}) = 0`` for ``D = diag(e^{i theta}, 1)``.

    Requires ``(n-1) theta < pi <= n theta``. The radicand is clamped at zero
    when ``n theta`` falls short of pi by round-off only.
    """
    if not 0.0 < theta < np.pi:
        raise PreconditionViolation(f"theta={theta!r} must lie in (0, pi)")
    if n < 2:
        raise PreconditionViolation(f"n={n} must be at least 2 when theta < pi")
    if (n - 1) * theta >= np.pi:
        raise PreconditionViolation(f"(n-1)*theta = {(n - 1) * theta!r} is not below pi")
    if n * theta < np.pi - BRACKET_TOL:
        raise PreconditionViolation(f"n*theta = {n * theta!r} falls short of pi")
    radicand = -math.cos(n * theta / 2) / math.cos((n - 2) * theta / 2)
    # radicand < 0 only when n*theta is within BRACKET_TOL below pi
    return math.atan(math.sqrt(max(radicand, 0.0)))


def trace_residual(theta, n, alpha):
    """``cos^2 a e^{in theta} + sin^2 a e^{i(n-1)theta} + sin^2 a e^{i theta} + cos^2 a``."""
    c2, s2 = math.cos(alpha) ** 2, math.sin(alpha) ** 2
    return (c2 * np.exp(1j * n * theta) + s2 * np.exp(1j * (n - 1) * theta)
            + s2 * np.exp(1j * theta) + c2)


def split_state(m, phase_tol=PHASE_TOL):
    """A unit vector with ``<psi|M|psi> = 0``, built from a zero-in-hull certificate of M's spectrum."""
    dec = spectral_decompose(m)
    cert = zero_hull_weights(dec.phases, phase_tol)
    psi = np.zeros(dec.frame.shape[0], dtype=np.complex128)
    for idx, w in zip(cert.support, cert.weights):
        psi += math.sqrt(w) * dec.frame[:, idx]
    return psi / np.linalg.norm(psi)


def spectral_split(m):
    """Eigen-split of a 2 x 2 unitary with antipodal spectrum ``e^{i beta}, -e^{i beta}``."""
    dec = spectral_decompose(m)
    if dec.frame.shape[0] != 2:
        raise DimensionMismatch("spectral_split expects a 2 x 2 operator")
    return SpectralSplit(phase_beta=float(dec.phases[0]), plus_vector=dec.frame[:, 0], minus_vector=dec.frame[:, 1])


def _endpoint_index(phases, target, tol=1e-8):
    dist = np.abs(wrap_phase(phases - target + np.pi) - np.pi)
    close = np.flatnonzero(dist <= dist.min() + tol)
    return int(close[0])


def claim_synthesize(w, runs=None, phase_tol=PHASE_TOL):
    """Find ``(X, psi, N)`` with ``<psi| X^H W X W^{N-1} |psi> = 0``.

    ``runs`` overrides the run count (used for the one-step bump at ceiling
    boundaries).
    """
    w = ensure_unitary(w)
    d = w.dim
    dec = spectral_decompose(w)
    arc = minimal_covering_arc(dec.phases)
    width = arc.width
    n = runs_for_width(width, phase_tol) if runs is None else int(runs)
    if width <= phase_tol:
        raise NotDifferent(f"arc width {width:.3e}: operators equal up to a global phase")

    if n == 1:
        if width < np.pi - phase_tol:
            raise PreconditionViolation("a single run needs an arc width of pi")
        cert = zero_hull_weights(dec.phases, phase_tol)
        psi = np.zeros(d, dtype=np.complex128)
        for idx, wt in zip(cert.support, cert.weights):
            psi += math.sqrt(wt) * dec.frame[:, idx]
        x = certify_unitary(np.eye(d))
        return x, psi / np.linalg.norm(psi), 1

    lo = _endpoint_index(dec.phases, arc.start)
    hi = _endpoint_index(dec.phases, arc.start + width)
    if lo == hi:
        raise NumericalFailure("arc endpoints resolve to the same eigenvector")
    span = float(wrap_phase(dec.phases[hi] - dec.phases[lo]))
    alpha = rotation_angle(span, n)
    c, s = math.cos(alpha), math.sin(alpha)
    rot = np.array([[c, -s], [s, c]], dtype=np.complex128)
    frame = dec.frame[:, [hi, lo]]
    x = certify_unitary(np.eye(d) + frame @ (rot - np.eye(2)) @ frame.conj().T)

    diag = np.diag(np.exp(1j * np.array([dec.phases[hi], dec.phases[lo]])))
    core = rot.conj().T @ diag @ rot @ np.linalg.matrix_power(diag, n - 1)
    psi = frame @ split_state(core, phase_tol)
    psi = psi / np.linalg.norm(psi)

    wm, xm = w.matrix, x.matrix
    check = abs(inner(psi, xm.conj().T @ wm @ xm @ np.linalg.matrix_power(wm, n - 1) @ psi))
    if check > INTERNAL_TOL:
        raise NumericalFailure(f"claim residual {check:.3e} exceeds {INTERNAL_TOL:.0e}")
    return x, psi, n


def _assemble(u, v, x, psi, n, bumped):
    u_adj = u.H
    interleavers = tuple([u_adj] * (n - 2) + [certify_unitary(x.matrix @ u_adj.matrix)]) if n >= 2 else ()
    out_u = execute(u, interleavers, psi)
    out_v = execute(v, interleavers, psi)
    return SequentialProtocol(
        num_runs=n,
        input_state=psi,
        interleavers=interleavers,
        branch_u_output=out_u,
        branch_v_output=out_v,
        candidate_u=u,
        candidate_v=v,
        orth_defect=abs(inner(out_u, out_v)),
        bumped=bumped,
        rotation=x,
    )


def synthesize_protocol(u, v, orth_tol=ORTH_TOL, phase_tol=PHASE_TOL):
    """Build and certify a sequential protocol separating ``u`` from ``v``.

    If the outputs at ``N`` runs are not orthogonal within ``orth_tol`` (only
    plausible when ``pi / theta`` sits on an integer), one retry at ``N + 1``
    is made and flagged via ``bumped``.
    """
    u, v = ensure_unitary(u), ensure_unitary(v)
    w = relative_operator(u, v)
    n = runs_for_width(minimal_covering_arc(spectral_decompose(w).phases).width, phase_tol)
    failures = []
    for runs, bumped in ((n, False), (n + 1, True)):
        try:
            x, psi, runs = claim_synthesize(w, runs=runs, phase_tol=phase_tol)
        except (NumericalFailure, PreconditionViolation) as exc:
            failures.append(f"N={runs}: {exc}")
            continue
        protocol = _assemble(u, v, x, psi, runs, bumped)
        if protocol.orth_defect <= orth_tol:
            return protocol
        failures.append(f"N={runs}: overlap {protocol.orth_defect:.3e}")
    raise OrthogonalityFailure("no certified protocol: " + "; ".join(failures))


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    projectors: tuple
    labels: tuple

    def probabilities(self, state):
        state = np.asarray(state, dtype=np.complex128)
        return np.array([float(np.real(np.vdot(state, p @ state))) for p in self.projectors])


def build_measurement(protocol):
    """Projectors onto the two branch outputs and onto their orthogonal complement.

    The two outputs are symmetrically orthonormalized first, which moves each
    by at most the certified overlap.
    """
    pair = np.column_stack([protocol.branch_u_output, protocol.branch_v_output])
    gram = pair.conj().T @ pair
    evals, evecs = np.linalg.eigh(gram)
    pair = pair @ (evecs @ np.diag(evals ** -0.5) @ evecs.conj().T)
    p_u = np.outer(pair[:, 0], pair[:, 0].conj())
    p_v = np.outer(pair[:, 1], pair[:, 1].conj())
    rest = np.eye(protocol.dim) - p_u - p_v
    return ProjectiveMeasurement(projectors=(p_u, p_v, rest), labels=("U", "V", "rest"))
