"""Dense linear algebra for small Hermitian matrices.

The eigensolver is a cyclic complex Jacobi iteration. It accepts a single
matrix or a stack of shape ``(..., n, n)``; stacked inputs are rotated in
lock-step with numpy, which keeps batch property checks fast while every
matrix still sees exactly the rotation sequence it would see on its own.
A lone matrix of dimension <= 8 goes through a scalar loop instead (same
rotation order, cheaper for tiny inputs); the route depends only on the
input shape, so results stay bit-stable per call signature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NotPositive

HERMITIAN_TOL = 1e-9
CLAMP_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 100
SCALAR_MAX_DIM = 8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order, with optional eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    def reconstruct(self) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        v = self.eigenvectors
        return (v * self.eigenvalues[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.conj(a), -1, -2)


def hermitian_deviation(h) -> float:
    h = np.asarray(h)
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(h - dagger(h))))


def as_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``h`` as a complex array after checking Hermiticity.

    The result is the exact Hermitian part ``(h + h^†)/2``, so diagonals come
    back with zero imaginary part.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise NonHermitianInput("matrix has non-finite entries")
    dev = hermitian_deviation(h)
    if dev > tol:
        raise NonHermitianInput(f"matrix is not Hermitian (max |H - H^†| = {dev:.3g})")
    return 0.5 * (h + dagger(h))


def _off_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    off = a * (1.0 - np.eye(n))
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def _rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    # a: (B, n, n) Hermitian, rotated in place so that a[:, p, q] -> 0
    apq = a[:, p, q]
    mag = np.abs(apq)
    live = mag > 0.0
    phase = np.where(live, apq / np.where(live, mag, 1.0), 1.0)
    app = a[:, p, p].real
    aqq = a[:, q, q].real
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = (aqq - app) / (2.0 * mag)
        t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(live & np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    cph = np.conj(phase)

    u = np.empty((a.shape[0], 2, 2), dtype=complex)
    u[:, 0, 0] = c
    u[:, 0, 1] = s
    u[:, 1, 0] = -s * cph
    u[:, 1, 1] = c * cph

    cols = a[:, :, [p, q]] @ u
    a[:, :, p] = cols[:, :, 0]
    a[:, :, q] = cols[:, :, 1]
    rows = dagger(u) @ a[:, [p, q], :]
    a[:, p, :] = rows[:, 0, :]
    a[:, q, :] = rows[:, 1, :]
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    a[:, p, p] = a[:, p, p].real
    a[:, q, q] = a[:, q, q].real
    if v is not None:
        vc = v[:, :, [p, q]] @ u
        v[:, :, p] = vc[:, :, 0]
        v[:, :, q] = vc[:, :, 1]


def _jacobi(a: np.ndarray, want_vectors: bool) -> tuple[np.ndarray, np.ndarray | None]:
    batch, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy() if want_vectors else None
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1))))
    tol = OFF_DIAGONAL_TOL * scale
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(MAX_SWEEPS):
        todo = np.nonzero(_off_norm(a) >= tol)[0]
        if todo.size == 0:
            break
        sub = a[todo]
        vsub = v[todo] if v is not None else None
        for p, q in pairs:
            _rotate(sub, vsub, p, q)
        a[todo] = sub
        if v is not None:
            v[todo] = vsub
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.real(np.diagonal(a, axis1=-2, axis2=-1)).copy()
    return w, v


def _jacobi_single(a: np.ndarray, want_vectors: bool) -> tuple[np.ndarray, np.ndarray | None]:
    # Scalar loop for one matrix: numpy call overhead dominates at n <= 8.
    n = a.shape[0]
    m = [[complex(x) for x in row] for row in a]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)] if want_vectors else None
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))
    tol2 = (OFF_DIAGONAL_TOL * scale) ** 2
    for _ in range(MAX_SWEEPS):
        off = sum(abs(m[i][j]) ** 2 for i in range(n) for j in range(n) if i != j)
        if off < tol2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                cph = (apq / mag).conjugate()
                theta = (m[q][q].real - m[p][p].real) / (2.0 * mag)
                if theta * theta == float("inf"):
                    continue
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + (theta * theta + 1.0) ** 0.5)
                c = 1.0 / (t * t + 1.0) ** 0.5
                s = t * c
                u00, u01, u10, u11 = c, s, -s * cph, c * cph
                for i in range(n):
                    x, y = m[i][p], m[i][q]
                    m[i][p] = x * u00 + y * u10
                    m[i][q] = x * u01 + y * u11
                for j in range(n):
                    x, y = m[p][j], m[q][j]
                    m[p][j] = u00 * x + u10.conjugate() * y
                    m[q][j] = u01 * x + u11.conjugate() * y
                m[p][q] = m[q][p] = 0j
                m[p][p] = complex(m[p][p].real)
                m[q][q] = complex(m[q][q].real)
                if v is not None:
                    for i in range(n):
                        x, y = v[i][p], v[i][q]
                        v[i][p] = x * u00 + y * u10
                        v[i][q] = x * u01 + y * u11
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.array([[m[i][i].real for i in range(n)]])
    return w, (np.array([v]) if v is not None else None)


def eigh(h, vectors: bool = True) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix or stack of matrices.

    Args:
        h: Array of shape ``(n, n)`` or ``(..., n, n)``.
        vectors: Also return the unitary of eigenvector columns.

    Returns:
        Spectrum with eigenvalues sorted in descending order along the last
        axis; eigenvector columns are permuted to match.

    Raises:
        NonHermitianInput: if ``max |H - H^†|`` exceeds 1e-9.
    """
    a = as_hermitian(h)
    lead = a.shape[:-2]
    n = a.shape[-1]
    flat = a.reshape((-1, n, n)).copy()
    if flat.shape[0] == 1 and n <= SCALAR_MAX_DIM:
        w, v = _jacobi_single(flat[0], vectors)
    else:
        w, v = _jacobi(flat, vectors)
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    if v is not None:
        v = np.take_along_axis(v, order[:, None, :], axis=-1)
        v = v.reshape(lead + (n, n))
    return Spectrum(w.reshape(lead + (n,)), v)


def eigvalsh(h) -> np.ndarray:
    return eigh(h, vectors=False).eigenvalues


def clamp_eigenvalues(w: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)``; anything more negative raises."""
    w = np.asarray(w, dtype=float)
    low = float(np.min(w)) if w.size else 0.0
    if low < -tol:
        raise NotPositive(f"matrix is not positive semidefinite (min eigenvalue {low:.3g})")
    return np.where(w < 0.0, 0.0, w)


def psd_sqrt(a) -> np.ndarray:
    """Hermitian square root ``B`` with ``B @ B = A`` for a PSD matrix."""
    spec = eigh(a)
    w = clamp_eigenvalues(spec.eigenvalues)
    v = spec.eigenvectors
    b = (v * np.sqrt(w)[..., None, :]) @ dagger(v)
    return 0.5 * (b + dagger(b))


def det3(h) -> float:
    h = np.asarray(h, dtype=complex)
    if h.shape != (3, 3):
        raise DimensionMismatch(f"det3 needs a 3x3 matrix, got {h.shape}")
    d = (
        h[0, 0] * (h[1, 1] * h[2, 2] - h[1, 2] * h[2, 1])
        - h[0, 1] * (h[1, 0] * h[2, 2] - h[1, 2] * h[2, 0])
        + h[0, 2] * (h[1, 0] * h[2, 1] - h[1, 1] * h[2, 0])
    )
    if abs(d.imag) >= 1e-10:
        raise NonHermitianInput(f"determinant has imaginary part {d.imag:.3g}")
    return float(d.real)


def trace_power(h, k: int):
    """``Tr H^k`` for k in {1, 2, 3} from entry sums, no eigendecomposition.

    Works on stacks; returns a float for a single matrix.
    """
    h = np.asarray(h, dtype=complex)
    if k == 1:
        t = np.trace(h, axis1=-2, axis2=-1)
    elif k == 2:
        t = np.sum(h * np.swapaxes(h, -1, -2), axis=(-2, -1))
    elif k == 3:
        t = np.einsum("...ij,...jk,...ki->...", h, h, h)
    else:
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    if np.any(np.abs(np.imag(t)) >= 1e-10):
        raise NonHermitianInput("trace power has a non-negligible imaginary part")
    t = np.real(t)
    return float(t) if np.ndim(t) == 0 else t
