"""Entropy functionals and polar coordinates on the 3-outcome simplex."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, density_matrix, gram_matrix, pairwise_overlaps
from .errors import InvalidDistribution, OutsideSimplex, TraceNotOne
from .numerics import clamp_eigenvalues, eigvalsh, trace_power

LN2 = math.log(2.0)
SQRT_2_3 = math.sqrt(2.0 / 3.0)
VERTEX_RADIUS = SQRT_2_3


def _scale(base: str) -> float:
    if base == "nats":
        return 1.0
    if base == "bits":
        return 1.0 / LN2
    raise ValueError(f"base must be 'nats' or 'bits', got {base!r}")


def spectrum_entropy(w, base: str = "nats"):
    """``-sum w log w`` over the last axis with ``0 log 0 = 0``.

    Negative entries in ``[-1e-10, 0)`` are treated as zero.
    """
    w = clamp_eigenvalues(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0.0, -w * np.log(np.where(w > 0.0, w, 1.0)), 0.0)
    s = np.sum(terms, axis=-1)
    if base != "nats":
        s = s * _scale(base)
    return float(s) if np.ndim(s) == 0 else s


def von_neumann_entropy(h, base: str = "nats"):
    """Von Neumann entropy of a unit-trace PSD matrix (or stack of them).

    Raises:
        NotPositive: an eigenvalue is below -1e-10.
        TraceNotOne: the trace differs from 1 by more than 1e-9.
    """
    h = np.asarray(h, dtype=complex)
    tr = np.real(np.trace(h, axis1=-2, axis2=-1))
    if np.any(np.abs(tr - 1.0) > 1e-9):
        raise TraceNotOne(f"trace is {np.max(np.abs(tr - 1.0)) + 1:.12g}, expected 1")
    return spectrum_entropy(eigvalsh(h), base)


def shannon_entropy(probs, base: str = "nats") -> float:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistribution("probabilities must be a non-empty vector")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise InvalidDistribution("probabilities must be finite and non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise InvalidDistribution(f"probabilities sum to {p.sum():.12g}, expected 1")
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)) * _scale(base))


def linearized_entropy(ens: Ensemble) -> float:
    """``Tr(rho - rho^2)``, computed from the overlaps and from ``rho``.

    The two routes must agree to 1e-10; a mismatch raises RuntimeError.
    """
    p = ens.probs
    o2 = pairwise_overlaps(ens) ** 2
    iu = np.triu_indices(ens.n, k=1)
    from_overlaps = (1.0 - np.sum(p * p)) - 2.0 * np.sum(np.outer(p, p)[iu] * o2[iu])
    rho = density_matrix(ens)
    from_rho = trace_power(rho, 1) - trace_power(rho, 2)
    if abs(from_overlaps - from_rho) > 1e-10:
        raise RuntimeError(
            f"linearised entropy routes disagree: {from_overlaps!r} vs {from_rho!r}"
        )
    return float(from_overlaps)


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the probability simplex in polar form around the centre.

    ``lambdas`` keeps the caller's order. ``perm`` lists the indices that put
    them into canonical order ``(lambda1, lambda2, lambda3)`` with
    ``theta`` in ``[0, pi/3]``: the largest value sits at position 1, the
    middle one at position 3 and the smallest at position 2.
    """

    lambdas: tuple[float, float, float]
    r: float
    theta: float
    perm: tuple[int, int, int]

    @property
    def canonical(self) -> tuple[float, float, float]:
        return tuple(self.lambdas[i] for i in self.perm)


def _check_simplex(lam: np.ndarray) -> None:
    if lam.shape != (3,):
        raise OutsideSimplex(f"need three values, got shape {lam.shape}")
    if np.any(lam < -1e-12) or abs(lam.sum() - 1.0) > 1e-12:
        raise OutsideSimplex(f"{lam.tolist()} is not a point of the probability simplex")


def simplex_to_polar(lambdas) -> SimplexPoint:
    lam = np.asarray(lambdas, dtype=float)
    _check_simplex(lam)
    hi, mid, lo = np.argsort(-lam, kind="stable")
    perm = (int(hi), int(lo), int(mid))
    x = lam[list(perm)] - 1.0 / 3.0
    r = math.sqrt(max(0.0, float(np.sum(x * x))))
    if r == 0.0:
        theta = 0.0
    else:
        theta = math.atan2((x[2] - x[1]) / math.sqrt(3.0), x[0])
        theta = min(max(theta, 0.0), math.pi / 3.0)
    return SimplexPoint(tuple(float(v) for v in lam), r, theta, perm)


def polar_lambdas(r, theta) -> np.ndarray:
    """The three coordinates for polar point ``(r, theta)``; vectorised over inputs."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    k = SQRT_2_3 * r
    return np.stack(
        [
            1.0 / 3.0 + k * np.cos(theta),
            1.0 / 3.0 + k * np.cos(theta + 2.0 * math.pi / 3.0),
            1.0 / 3.0 + k * np.cos(theta + 4.0 * math.pi / 3.0),
        ],
        axis=-1,
    )


def polar_to_simplex(r: float, theta: float) -> SimplexPoint:
    lam = polar_lambdas(r, theta)
    if r < 0 or np.any(lam < -1e-12):
        raise OutsideSimplex(f"(r={r}, theta={theta}) lies outside the simplex")
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    return simplex_to_polar(lam)


def theta_max(r: float) -> float:
    """Largest canonical angle still inside the simplex at radius ``r``."""
    if r < 0 or r > VERTEX_RADIUS + 1e-12:
        raise OutsideSimplex(f"radius {r} exceeds the simplex")
    k = SQRT_2_3 * r
    if k <= 1.0 / 3.0:
        return math.pi / 3.0
    # smallest coordinate 1/3 + k cos(theta + 2pi/3) hits zero
    return min(math.pi / 3.0, math.acos(max(-1.0, -1.0 / (3.0 * k))) - 2.0 * math.pi / 3.0)


def trace_cubed_polar(r: float, theta: float) -> float:
    if r < 0 or np.any(polar_lambdas(r, theta) < -1e-12):
        raise OutsideSimplex(f"(r={r}, theta={theta}) lies outside the simplex")
    return 1.0 / 9.0 + r * r + r**3 * math.cos(3.0 * theta) / math.sqrt(6.0)


def ensemble_entropy(ens: Ensemble, base: str = "nats") -> float:
    """Entropy of the ensemble, read off the spectrum of its Gram matrix."""
    return spectrum_entropy(eigvalsh(gram_matrix(ens)), base)
