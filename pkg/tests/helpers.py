"""Shared generators and fixture loaders for the test suite."""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

from gramdeform import io
from gramdeform.ensemble import Ensemble

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(DATA))

from make_fixtures import (  # noqa: E402
    STAIRCASE_OVERLAPS,
    planar_triple,
    lifted_triple,
    staircase,
    two_state,
)

__all__ = [
    "DATA",
    "STAIRCASE_OVERLAPS",
    "planar_triple",
    "lifted_triple",
    "staircase",
    "load",
    "random_ensemble",
    "random_psd",
    "random_unitary",
    "two_state",
]


def load(name: str) -> Ensemble:
    return io.load_ensemble(DATA / name)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ensemble(rng: np.random.Generator, n: int, d: int) -> Ensemble:
    states = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    probs = rng.dirichlet(np.ones(n))
    return Ensemble.from_unnormalized(states, probs)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    k = n if rank is None else rank
    b = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    a = b @ b.conj().T
    return a / np.trace(a).real


def bits(x: float) -> float:
    return x / math.log(2.0)


def _batch_gram(states: np.ndarray, probs: np.ndarray) -> np.ndarray:
    w = np.sqrt(probs)
    ip = np.einsum("kia,kja->kij", states.conj(), states)
    return w[:, :, None] * w[:, None, :] * ip


def qubit_dominance_pairs(rng: np.random.Generator, count: int, n: int):
    """Stacks ``(G, G_tilde)`` of qubit ensembles whose overlaps satisfy
    ``|<psi~_i|psi~_j>| <= |<psi_i|psi_j>|`` for every pair, with equal priors.

    Half the pairs are independent draws, half are small perturbations of
    the first ensemble, which puts many of them close to equal entropy.
    """
    iu = np.triu_indices(n, k=1)
    got_g, got_gt = [], []
    have = 0
    while have < count:
        m = 8 * count + 1000
        probs = rng.dirichlet(np.ones(n), size=m)
        psi = rng.normal(size=(m, n, 2)) + 1j * rng.normal(size=(m, n, 2))
        noise = rng.normal(size=(m, n, 2)) + 1j * rng.normal(size=(m, n, 2))
        sigma = np.where(rng.random(m) < 0.5, 10.0, 10.0 ** rng.uniform(-3, -0.5, m))
        psi_t = psi + sigma[:, None, None] * noise
        psi /= np.linalg.norm(psi, axis=-1, keepdims=True)
        psi_t /= np.linalg.norm(psi_t, axis=-1, keepdims=True)
        o = np.abs(np.einsum("kia,kja->kij", psi.conj(), psi))[:, iu[0], iu[1]]
        ot = np.abs(np.einsum("kia,kja->kij", psi_t.conj(), psi_t))[:, iu[0], iu[1]]
        keep = np.all(ot <= o, axis=1)
        got_g.append(_batch_gram(psi[keep], probs[keep]))
        got_gt.append(_batch_gram(psi_t[keep], probs[keep]))
        have += int(keep.sum())
    return np.concatenate(got_g)[:count], np.concatenate(got_gt)[:count]


def random_correlation(rng: np.random.Generator, stack: int, n: int) -> np.ndarray:
    """Positive matrices with unit diagonal (valid Hadamard multipliers)."""
    k = rng.integers(1, n + 1)
    b = rng.normal(size=(stack, n, k)) + 1j * rng.normal(size=(stack, n, k))
    c = b @ np.conj(np.swapaxes(b, -1, -2))
    d = np.sqrt(np.real(np.einsum("kii->ki", c)))
    return c / (d[:, :, None] * d[:, None, :])


def random_psd_stack(rng: np.random.Generator, stack: int, n: int) -> np.ndarray:
    k = rng.integers(1, n + 1)
    b = rng.normal(size=(stack, n, k)) + 1j * rng.normal(size=(stack, n, k))
    a = b @ np.conj(np.swapaxes(b, -1, -2))
    return a / np.real(np.einsum("kii->k", a))[:, None, None]
