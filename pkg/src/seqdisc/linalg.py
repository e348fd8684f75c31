"""Small dense complex linear algebra for unitary operators and pure states.

Matrices are plain ``numpy`` arrays of dtype complex128; :class:`UnitaryOperator`
wraps one together with its measured unitarity defect so downstream code can
rely on it being unitary to within tolerance.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, IndexOutOfRange, NotUnitary, NumericalFailure

TWO_PI = 2.0 * np.pi

U_TOL = 1e-9
S_TOL = 1e-10
R_TOL = 1e-8


def as_matrix(a):
    """Return ``a`` as a finite square complex128 array (unwrapping operators)."""
    if isinstance(a, UnitaryOperator):
        return a.matrix
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_state(psi, tol=S_TOL):
    v = np.asarray(psi, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm {np.linalg.norm(v):.12g})")
    return v


def _frozen(m):
    m = np.array(m, dtype=np.complex128, copy=True)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """A d x d matrix certified unitary: ``||M^H M - I||_F <= tol``."""

    matrix: np.ndarray
    defect: float

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def H(self):
        return UnitaryOperator(_frozen(self.matrix.conj().T), self.defect)

    def __matmul__(self, other):
        if isinstance(other, UnitaryOperator):
            prod = mul(self.matrix, other.matrix)
            return UnitaryOperator(_frozen(prod), unitarity_defect(prod))
        return apply(self.matrix, other) if np.ndim(other) == 1 else mul(self.matrix, other)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"UnitaryOperator(dim={self.dim}, defect={self.defect:.2e})"


def unitarity_defect(m):
    m = as_matrix(m)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]), "fro"))


def certify_unitary(m, tol=U_TOL):
    """Wrap ``m`` as a :class:`UnitaryOperator`.

    Raises :class:`NotUnitary` (carrying the defect) when the Frobenius norm of
    ``M^H M - I`` exceeds ``tol``.
    """
    if isinstance(m, UnitaryOperator):
        if m.defect <= tol:
            return m
        raise NotUnitary(m.defect, tol)
    m = as_matrix(m)
    defect = unitarity_defect(m)
    if defect > tol:
        raise NotUnitary(defect, tol)
    return UnitaryOperator(_frozen(m), defect)


def ensure_unitary(u, tol=U_TOL):
    return u if isinstance(u, UnitaryOperator) else certify_unitary(u, tol)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenphases in [0, 2pi) with orthonormal eigenvectors as the columns of ``frame``."""

    phases: np.ndarray
    frame: np.ndarray

    @property
    def eigenvalues(self):
        return np.exp(1j * self.phases)

    def reconstruct(self):
        return (self.frame * self.eigenvalues) @ self.frame.conj().T


def wrap_phase(x):
    """Map angles into [0, 2pi), never returning 2pi itself."""
    p = np.mod(x, TWO_PI)
    return np.where(p >= TWO_PI, 0.0, p)


def eigenphases(u):
    """Eigenphases of a unitary matrix in [0, 2pi), unsorted."""
    m = as_matrix(u)
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    return wrap_phase(np.angle(vals))


def spectral_decompose(u, r_tol=R_TOL):
    """Spectral decomposition of a unitary via the complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the unitary Schur
    vectors are an orthonormal eigenbasis even inside degenerate eigenspaces.
    """
    m = ensure_unitary(u).matrix
    try:
        t, z = scipy.linalg.schur(m, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(str(exc)) from exc
    phases = wrap_phase(np.angle(np.diag(t)))
    dec = SpectralDecomposition(phases=phases, frame=z)
    defect = np.linalg.norm(dec.reconstruct() - m)
    if defect > r_tol:
        raise NumericalFailure(f"spectral reconstruction defect {defect:.3e} exceeds {r_tol:.1e}")
    return dec


def mul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def tensor(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def apply(u, psi):
    m = as_matrix(u)
    v = np.asarray(psi, dtype=np.complex128)
    if v.shape != (m.shape[0],):
        raise DimensionMismatch(f"operator of dim {m.shape[0]} applied to vector of shape {v.shape}")
    return m @ v


def inner(phi, psi):
    """``<phi|psi>``, conjugate-linear in the first argument."""
    phi = np.asarray(phi, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    if phi.shape != psi.shape:
        raise DimensionMismatch(f"cannot take inner product of {phi.shape} and {psi.shape}")
    return complex(np.vdot(phi, psi))


def basis_state(d, k):
    if not 0 <= k < d:
        raise IndexOutOfRange(f"basis index {k} outside [0, {d})")
    e = np.zeros(d, dtype=np.complex128)
    e[k] = 1.0
    return e


def fourier_state(d, l):
    """``|l~> = d^{-1/2} sum_k w^{kl} |k>`` with ``w = exp(2 pi i / d)``."""
    if d < 1 or not 0 <= l < d:
        raise IndexOutOfRange(f"Fourier index {l} outside [0, {d})")
    k = np.arange(d)
    return np.exp(2j * np.pi * ((k * l) % d) / d) / np.sqrt(d)


def fourier_matrix(d):
    """Columns are the Fourier basis states."""
    return np.column_stack([fourier_state(d, l) for l in range(d)])


def haar_unitary(d, rng):
    """Haar-random unitary: QR of a complex Ginibre matrix with the phases of R's diagonal divided out."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return certify_unitary(q)


def haar_state(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def unitary_from_phases(phases, frame=None):
    """``frame diag(e^{i phases}) frame^H``; identity frame by default."""
    phases = np.asarray(phases, dtype=np.float64)
    if frame is None:
        return certify_unitary(np.diag(np.exp(1j * phases)))
    frame = as_matrix(frame)
    return certify_unitary((frame * np.exp(1j * phases)) @ frame.conj().T)
