"""Pure-state ensembles, their density and Gram matrices, and purifications."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GramMismatch, InvalidEnsemble, TraceNotOne
from .numerics import CLAMP_TOL, as_hermitian, clamp_eigenvalues, dagger, eigh, psd_sqrt

NORM_TOL = 1e-10
PROB_TOL = 1e-10
RANK_TOL = 1e-8


@dataclass(frozen=True)
class Ensemble:
    """States ``|psi_i>`` (rows of ``states``) taken with priors ``probs``.

    Arrays are copied and made read-only on construction. States with zero
    probability are allowed; they are carried along but do not contribute to
    the density or Gram matrix.
    """

    states: np.ndarray
    probs: np.ndarray
    tol: float = field(default=NORM_TOL, repr=False, compare=False)

    def __post_init__(self):
        states = np.array(self.states, dtype=complex, copy=True)
        probs = np.array(self.probs, dtype=float, copy=True)
        if states.ndim == 1:
            states = states[None, :]
        if states.ndim != 2 or states.shape[0] < 1 or states.shape[1] < 1:
            raise InvalidEnsemble(f"states must be an (n, d) array, got shape {states.shape}")
        if probs.shape != (states.shape[0],):
            raise InvalidEnsemble(
                f"expected {states.shape[0]} probabilities, got shape {probs.shape}"
            )
        if not (np.all(np.isfinite(states)) and np.all(np.isfinite(probs))):
            raise InvalidEnsemble("ensemble contains non-finite values")
        norms = np.linalg.norm(states, axis=1)
        for i, nrm in enumerate(norms):
            if abs(nrm - 1.0) > self.tol:
                raise InvalidEnsemble(f"state {i} has norm {nrm:.12g}, expected 1")
        for i, p in enumerate(probs):
            if p < -self.tol:
                raise InvalidEnsemble(f"probability {i} is negative ({p:.6g})")
        total = float(np.sum(probs))
        if abs(total - 1.0) > self.tol:
            raise InvalidEnsemble(f"probabilities sum to {total:.12g}, expected 1")
        probs = np.clip(probs, 0.0, None)
        states.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @classmethod
    def from_unnormalized(cls, states, probs) -> Ensemble:
        """Normalise each state vector and the prior vector before building."""
        states = np.atleast_2d(np.asarray(states, dtype=complex))
        probs = np.asarray(probs, dtype=float)
        states = states / np.linalg.norm(states, axis=1, keepdims=True)
        return cls(states, probs / probs.sum())

    def embedded(self, dim: int) -> Ensemble:
        """Same ensemble with state vectors zero-padded to ``dim`` components."""
        if dim < self.dim:
            raise ValueError(f"cannot embed dimension {self.dim} into {dim}")
        padded = np.zeros((self.n, dim), dtype=complex)
        padded[:, : self.dim] = self.states
        return Ensemble(padded, self.probs)


def density_matrix(ens: Ensemble) -> np.ndarray:
    psi = ens.states
    return np.einsum("i,ia,ib->ab", ens.probs, psi, psi.conj())


def inner_products(ens: Ensemble) -> np.ndarray:
    """Matrix of ``<psi_i|psi_j>``."""
    return ens.states.conj() @ ens.states.T


def gram_matrix(ens: Ensemble) -> np.ndarray:
    """``G_ij = sqrt(p_i p_j) <psi_i|psi_j>``, with the diagonal set to ``p`` exactly."""
    w = np.sqrt(ens.probs)
    g = np.outer(w, w) * inner_products(ens)
    g = 0.5 * (g + dagger(g))
    g[np.diag_indices(ens.n)] = ens.probs
    return g


def pairwise_overlaps(ens: Ensemble) -> np.ndarray:
    o = np.abs(inner_products(ens))
    o = np.minimum(0.5 * (o + o.T), 1.0)
    np.fill_diagonal(o, 1.0)
    return o


@dataclass(frozen=True)
class PurifiedState:
    """Vector ``sum_i sqrt(p_i) |psi_i>|e_i>`` on system (d) x auxiliary (n).

    The flat index is ``a * n + i`` for system basis ``a`` and auxiliary
    basis ``e_i``.
    """

    vector: np.ndarray
    dim: int
    n: int

    def _grid(self) -> np.ndarray:
        return self.vector.reshape(self.dim, self.n)

    def reduced_system(self) -> np.ndarray:
        """Trace out the auxiliary factor; equals the density matrix."""
        m = self._grid()
        return m @ dagger(m)

    def reduced_auxiliary(self) -> np.ndarray:
        """Trace out the system factor, written in the ``{|e_i>}`` basis.

        This is the transpose (equivalently the complex conjugate) of the
        Gram matrix, so it has the same spectrum.
        """
        m = self._grid()
        return m.T @ m.conj()


def purify(ens: Ensemble) -> PurifiedState:
    m = ens.states.T * np.sqrt(ens.probs)[None, :]
    return PurifiedState(m.reshape(-1).copy(), ens.dim, ens.n)


def gram_to_ensemble(a) -> Ensemble:
    """Realise a positive unit-trace matrix as the Gram matrix of an ensemble.

    With ``A = B^2`` (``B`` the Hermitian square root), the normalised columns
    of ``B`` are the states and the squared column lengths, which equal the
    diagonal of ``A``, are the probabilities. A zero column is replaced by the
    basis vector ``e_i`` with probability 0.
    """
    a = as_hermitian(a)
    m = a.shape[0]
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > 1e-9:
        raise TraceNotOne(f"trace is {tr:.12g}, expected 1")
    b = psd_sqrt(a)
    lengths = np.linalg.norm(b, axis=0)
    states = np.zeros((m, m), dtype=complex)
    probs = np.clip(np.real(np.diag(a)), 0.0, None)
    for i in range(m):
        if lengths[i] > 1e-12:
            states[i] = b[:, i] / lengths[i]
        else:
            states[i, i] = 1.0
            probs[i] = 0.0
    return Ensemble(states, probs / probs.sum())


def gram_rank(g, tol: float = RANK_TOL) -> int:
    w = clamp_eigenvalues(eigh(g, vectors=False).eigenvalues, tol=CLAMP_TOL)
    return int(np.sum(w > tol))


def _orthonormal_completion(q: np.ndarray, dim: int) -> np.ndarray:
    # extend the orthonormal columns of q to a full basis, deterministically
    cols = list(q.T)
    for k in range(dim):
        if len(cols) == dim:
            break
        e = np.zeros(dim, dtype=complex)
        e[k] = 1.0
        for _ in range(2):
            for c in cols:
                e = e - c * np.vdot(c, e)
        nrm = np.linalg.norm(e)
        if nrm > 1e-6:
            cols.append(e / nrm)
    return np.array(cols).T


def recover_unitary(e1: Ensemble, e2: Ensemble) -> np.ndarray:
    """Unitary ``U`` with ``U |alpha_i> = |beta_i>`` for ensembles with equal Gram matrices.

    Both state spans are orthonormalised by Gram-Schmidt in index order, with
    the same keep/skip decision at every step, and the two bases are mapped
    onto each other; the orthogonal complements are matched by completing each
    basis deterministically. If the dimensions differ, both ensembles are
    zero-padded to the larger one. States with zero probability are not
    constrained by the Gram matrix and are ignored.

    Raises:
        GramMismatch: if the Gram matrices differ by more than 1e-8.
    """
    if e1.n != e2.n:
        raise GramMismatch(f"ensembles have {e1.n} and {e2.n} states")
    dev = float(np.max(np.abs(gram_matrix(e1) - gram_matrix(e2))))
    if dev > 1e-8:
        raise GramMismatch(f"Gram matrices differ (max deviation {dev:.3g})", dev)
    dim = max(e1.dim, e2.dim)
    alpha = e1.embedded(dim).states
    beta = e2.embedded(dim).states
    qa, qb = [], []
    for i in range(e1.n):
        if e1.probs[i] <= 0.0:
            continue
        ra, rb = alpha[i].copy(), beta[i].copy()
        for _ in range(2):
            for ca, cb in zip(qa, qb):
                ra = ra - ca * np.vdot(ca, ra)
                rb = rb - cb * np.vdot(cb, rb)
        na = np.linalg.norm(ra)
        if na > RANK_TOL:
            qa.append(ra / na)
            qb.append(rb / np.linalg.norm(rb))
    qa_full = _orthonormal_completion(np.array(qa).T.reshape(dim, len(qa)), dim)
    qb_full = _orthonormal_completion(np.array(qb).T.reshape(dim, len(qb)), dim)
    return qb_full @ dagger(qa_full)


def apply_unitary(u: np.ndarray, ens: Ensemble) -> Ensemble:
    states = ens.embedded(u.shape[0]).states if ens.dim < u.shape[0] else ens.states
    return Ensemble(states @ u.T, ens.probs)
