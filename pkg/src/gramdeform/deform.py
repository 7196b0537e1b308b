"""Deformations that raise every overlap and the entropy together (or lower both).

Two ensembles with the same priors are compared pairwise by overlap and
globally by entropy. ``kind="D1"`` asks for all overlaps up and entropy up,
``kind="D2"`` for both down. Deformations of three-state ensembles are done
in (overlaps, triple phase) coordinates, which fix an ensemble up to a
global unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, gram_matrix, pairwise_overlaps
from .entropy import ensemble_entropy, spectrum_entropy
from .errors import (
    DiagonalMismatch,
    DimensionMismatch,
    MethodInapplicable,
    NonUnitVector,
    NotPlanar,
    OverlapIncreaseFromZero,
    R2Violation,
    RankDeficient,
    ShapeMismatch,
)
from .numerics import as_hermitian, eigvalsh
from .triples import TripleSpec, canonical_gram, construct_triple, triple_spec_of, xi_max

SLACK = 1e-10
PHASE_ZERO = 1e-9
KINDS = ("D1", "D2")


def _kind(kind: str) -> str:
    k = kind.upper()
    if k not in KINDS:
        raise ValueError(f"kind must be D1 or D2, got {kind!r}")
    return k


def phase_multiplier(phi: float) -> np.ndarray:
    """Unit-modulus multiplier that shifts the triple phase of a canonical Gram by ``phi``."""
    e = complex(math.cos(phi), math.sin(phi))
    r = np.ones((3, 3), dtype=complex)
    r[1, 2] = e
    r[2, 1] = e.conjugate()
    return r


def hadamard(g, r) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    r = np.asarray(r, dtype=complex)
    if g.shape != r.shape or g.shape[-1] != g.shape[-2]:
        raise DimensionMismatch(f"cannot multiply shapes {g.shape} and {r.shape} entrywise")
    return g * r


@dataclass(frozen=True)
class Multiplier:
    matrix: np.ndarray
    min_eigenvalue: float


def check_multiplier(r, tol: float = 1e-12) -> np.ndarray:
    """Validate a multiplier matrix: Hermitian, unit diagonal, entries of modulus <= 1."""
    r = as_hermitian(r)
    if np.max(np.abs(np.diag(r) - 1.0)) > tol:
        raise R2Violation("multiplier diagonal must be all ones")
    worst = float(np.max(np.abs(r)))
    if worst > 1.0 + tol:
        raise R2Violation(f"multiplier entry has modulus {worst:.12g} > 1")
    return r


def extract_multiplier(g, g_tilde) -> Multiplier:
    """Entrywise ratio ``r = G~ / G`` for two Gram matrices with equal diagonals.

    Where ``|G_ij| <= 1e-12`` the ratio is set to 1, which requires
    ``|G~_ij| <= 1e-10``.
    """
    g = as_hermitian(g)
    gt = as_hermitian(g_tilde)
    if g.shape != gt.shape:
        raise DimensionMismatch(f"shapes {g.shape} and {gt.shape} differ")
    if np.max(np.abs(np.diag(g) - np.diag(gt))) > 1e-9:
        raise DiagonalMismatch("Gram matrices have different diagonals (priors differ)")
    small = np.abs(g) <= 1e-12
    if np.any(np.abs(gt[small]) > 1e-10):
        raise OverlapIncreaseFromZero("an overlap that is zero in G is non-zero in G~")
    r = np.where(small, 1.0 + 0j, gt / np.where(small, 1.0, g))
    np.fill_diagonal(r, 1.0)
    r = 0.5 * (r + r.conj().T)
    worst = float(np.max(np.abs(r)))
    if worst > 1.0 + 1e-9:
        raise R2Violation(f"multiplier entry has modulus {worst:.12g} > 1")
    return Multiplier(r, float(eigvalsh(r)[-1]))


@dataclass(frozen=True)
class PhenomenonReport:
    """Comparison of ``E`` against ``E~``.

    ``dominance``: every overlap of ``E~`` is at most the matching overlap
    of ``E`` (slack 1e-10). ``entropy_order``: sign of ``S(E) - S(E~)``,
    0 when within 1e-10.
    """

    dominance: bool
    entropy_order: int
    entropy: float
    entropy_tilde: float

    @property
    def holds(self) -> bool:
        return self.dominance and self.entropy_order > 0


def verify_phenomenon(ens: Ensemble, ens_tilde: Ensemble) -> PhenomenonReport:
    if ens.n != ens_tilde.n or np.max(np.abs(ens.probs - ens_tilde.probs)) > SLACK:
        raise ShapeMismatch("ensembles must have the same number of states and the same priors")
    dominance = bool(np.all(pairwise_overlaps(ens_tilde) <= pairwise_overlaps(ens) + SLACK))
    s, st = ensemble_entropy(ens), ensemble_entropy(ens_tilde)
    order = 0 if abs(s - st) <= SLACK else (1 if s > st else -1)
    return PhenomenonReport(dominance, order, s, st)


@dataclass(frozen=True)
class DeformationReport:
    kind: str
    method: str
    source: Ensemble
    result: Ensemble
    entropy_before: float
    entropy_after: float
    seed: int | None = None

    @property
    def overlaps_before(self) -> np.ndarray:
        return pairwise_overlaps(self.source)

    @property
    def overlaps_after(self) -> np.ndarray:
        return pairwise_overlaps(self.result)

    @property
    def overlap_deltas(self) -> np.ndarray:
        return self.overlaps_after - self.overlaps_before

    @property
    def entropy_delta(self) -> float:
        return self.entropy_after - self.entropy_before

    def is_valid(self) -> bool:
        sign = 1.0 if self.kind == "D1" else -1.0
        off = ~np.eye(self.source.n, dtype=bool)
        d = sign * self.overlap_deltas[off]
        if not (np.all(d >= -SLACK) and np.any(d > SLACK) and sign * self.entropy_delta > SLACK):
            return False
        if self.kind == "D1":
            rep = verify_phenomenon(self.result, self.source)
        else:
            rep = verify_phenomenon(self.source, self.result)
        return rep.holds


def _make_report(kind, method, source, result, seed=None) -> DeformationReport:
    return DeformationReport(
        kind, method, source, result, ensemble_entropy(source), ensemble_entropy(result), seed
    )


def spec_entropy(spec: TripleSpec) -> float:
    return spectrum_entropy(eigvalsh(canonical_gram(spec)))


def deform_theorem2(
    ens: Ensemble, kind: str, eta: float | None = None, delta: float = 1e-3
) -> DeformationReport:
    """Two-step deformation of a rank-3 triple of states.

    First the triple phase is moved by ``eta`` at fixed overlaps: towards 0
    for D1 (entropy rises) or towards ``xi_max`` for D2 (entropy falls).
    Then every overlap is scaled by ``1 + delta`` (D1) or ``1 - delta`` (D2).
    ``delta`` is halved, up to 40 times, until the rescaled triple is
    realisable and the total entropy change still has the wanted sign.

    Raises:
        RankDeficient: the Gram matrix has an eigenvalue <= 1e-8.
        MethodInapplicable: the phase cannot move in the needed direction
            (``xi0 = 0`` for D1, ``xi0 = pi`` for D2), some overlap is 0 or 1,
            or no step size resolves the entropy change.
    """
    kind = _kind(kind)
    if ens.n != 3:
        raise ShapeMismatch(f"expected 3 states, got {ens.n}")
    g = gram_matrix(ens)
    lam_min = float(eigvalsh(g)[-1])
    if lam_min <= 1e-8:
        raise RankDeficient(f"ensemble does not have rank 3 (smallest Gram eigenvalue {lam_min:.3g})")
    spec0 = triple_spec_of(ens)
    a = np.array(spec0.overlaps)
    if np.any(a <= 0.0) or np.any(a >= 1.0):
        raise MethodInapplicable(f"overlaps {a.tolist()} must all lie strictly between 0 and 1")
    xm = xi_max(*spec0.overlaps)
    if eta is None:
        eta = 0.05 * xm
    xi0 = spec0.xi
    mag, sign = abs(xi0), (1.0 if xi0 >= 0 else -1.0)
    if kind == "D1":
        if mag < PHASE_ZERO:
            raise MethodInapplicable("triple product is real positive; the phase step cannot raise the entropy")
        new_mag = max(mag - eta, 0.0)
        factor_sign = 1.0
    else:
        if mag > math.pi - PHASE_ZERO:
            raise MethodInapplicable("triple product is real negative; the phase step cannot lower the entropy")
        new_mag = min(mag + eta, xm)
        factor_sign = -1.0
    xi1 = sign * new_mag
    s0 = ensemble_entropy(ens)
    d = delta
    for _ in range(41):
        a1 = a * (1.0 + factor_sign * d)
        if np.all(a1 <= 1.0) and np.all(np.abs(a1 - a) > SLACK):
            cand = TripleSpec(*a1.tolist(), xi1, spec0.probs)
            if cand.feasible and factor_sign * (spec_entropy(cand) - s0) > SLACK:
                report = _make_report(kind, "xi-shift", ens, construct_triple(cand))
                if report.is_valid():
                    return report
        d *= 0.5
    raise MethodInapplicable("no overlap step keeps the entropy change from the phase step")


def _planar_phase(a: np.ndarray, xi: float) -> float | None:
    # phase that puts the three states in a plane, on the side of xi
    xm = xi_max(*a.tolist())
    if xm is None:
        return None
    if xm >= math.pi and TripleSpec(*a.tolist(), math.pi).margin > 1e-12:
        return None
    return xm if xi >= 0 else -xm


def search_deformation(
    ens: Ensemble,
    kind: str,
    budget: int = 2000,
    seed: int = 0,
    step: float = 0.1,
    decay: float = 0.95,
    temperature: float = 0.01,
    planar: bool | None = None,
) -> DeformationReport | None:
    """Simulated-annealing search for a D1 or D2 partner of a three-state ensemble.

    Candidates keep the priors, move each overlap strictly in the required
    direction and take any realisable triple phase. The step width and
    temperature shrink by ``decay`` a hundred times over the budget. With
    ``planar`` (default: input dimension <= 2) candidates are restricted to
    coplanar triples. Returns None when nothing is found; that says nothing
    about existence.
    """
    kind = _kind(kind)
    if ens.n != 3:
        raise ShapeMismatch(f"expected 3 states, got {ens.n}")
    if budget <= 0:
        return None
    if planar is None:
        planar = ens.dim <= 2
    spec0 = triple_spec_of(ens)
    a0 = np.array(spec0.overlaps)
    room = 1.0 - a0 if kind == "D1" else a0.copy()
    if np.any(room <= SLACK):
        return None
    sgn = 1.0 if kind == "D1" else -1.0
    s0 = ensemble_entropy(ens)
    rng = np.random.default_rng(seed)
    u_min = 1e-6
    block = max(1, budget // 100)

    def evaluate(u, xi):
        a = np.clip(a0 + sgn * room * u, 0.0, 1.0)
        if planar:
            xi = _planar_phase(a, xi)
            if xi is None:
                return None
        else:
            xm = xi_max(*a.tolist())
            if xm is None:
                return None
            xi = float(np.clip(xi, -xm, xm))
        spec = TripleSpec(*a.tolist(), xi, spec0.probs)
        if not spec.feasible:
            return None
        return spec, sgn * spec_entropy(spec)

    u = np.full(3, u_min)
    xi = spec0.xi
    cur = evaluate(u, xi)
    best = cur
    for k in range(budget):
        width = step * decay ** (k // block)
        temp = temperature * decay ** (k // block)
        if cur is None:
            u_new = rng.uniform(u_min, 1.0, 3)
            xi_new = rng.uniform(-math.pi, math.pi)
        else:
            u_new = np.clip(u + width * rng.normal(size=3), u_min, 1.0)
            xi_new = cur[0].xi + math.pi * width * rng.normal()
        cand = evaluate(u_new, xi_new)
        if cand is None:
            continue
        if cur is None or cand[1] >= cur[1] or rng.random() < math.exp((cand[1] - cur[1]) / temp):
            u, cur = u_new, cand
            if best is None or cur[1] > best[1]:
                best = cur
    if best is None or sgn * (sgn * best[1] - s0) <= SLACK:
        return None
    result = construct_triple(best[0])
    if planar and ens.dim == 2:
        result = Ensemble.from_unnormalized(result.states[:, :2], result.probs)
    report = _make_report(kind, "search", ens, result, seed)
    return report if report.is_valid() else None


def bloch_ket(n) -> np.ndarray:
    """Qubit state with Bloch vector ``n``."""
    x, y, z = (float(c) for c in n)
    half = 0.5 * math.atan2(math.hypot(x, y), z)
    phase = complex(x, y) / math.hypot(x, y) if (x or y) else 1.0
    return np.array([math.cos(half), phase * math.sin(half)], dtype=complex)


def spin_flip_pair(bloch_vectors, probs) -> tuple[Ensemble, Ensemble]:
    """Two-qubit ensembles ``{|n>|n>}`` and ``{|n>|-n>}`` with the same priors.

    Both have identical pairwise overlaps; the first lives in the symmetric
    subspace, the second generally does not.
    """
    vecs = np.atleast_2d(np.asarray(bloch_vectors, dtype=float))
    if vecs.shape[1] != 3:
        raise NonUnitVector(f"Bloch vectors must have 3 components, got shape {vecs.shape}")
    parallel, flipped = [], []
    for i, n in enumerate(vecs):
        if abs(np.linalg.norm(n) - 1.0) > 1e-10:
            raise NonUnitVector(f"Bloch vector {i} has length {np.linalg.norm(n):.12g}")
        k = bloch_ket(n)
        k_minus = np.array([-np.conj(k[1]), np.conj(k[0])])
        parallel.append(np.kron(k, k))
        flipped.append(np.kron(k, k_minus))
    p = np.asarray(probs, dtype=float)
    return Ensemble(np.array(parallel), p), Ensemble(np.array(flipped), p)


@dataclass(frozen=True)
class ProbeRow:
    eps: float
    delta_entropy: np.ndarray
    delta_overlap: np.ndarray

    @property
    def min_delta_entropy(self) -> float:
        return float(np.min(self.delta_entropy))


def planar_boundary_probe(
    spec: TripleSpec, eps_grid, directions: int = 100, seed: int = 0
) -> list[ProbeRow]:
    """Entropy change under small out-of-plane deformations of a coplanar triple.

    For each random direction, every state ``|psi_i>`` is moved to
    ``|psi_i> + eps v_i`` (renormalised) where ``v_i`` has a ``|2>``
    component of at least 0.1 of its norm. Overlaps that went up are then
    pulled back to their original values (an ``O(eps^2)`` or ``O(eps)``
    adjustment) at unchanged triple phase, so every probed ensemble has
    overlaps no larger than the start. ``delta_overlap`` records the largest
    signed overlap change per direction.

    Raises:
        NotPlanar: the triple is not at the feasibility boundary.
    """
    if spec.margin >= 1e-12:
        raise NotPlanar(f"triple is not coplanar (determinant margin {spec.margin:.3g})")
    base = construct_triple(spec)
    a0 = np.array(spec.overlaps)
    o0 = pairwise_overlaps(base)
    s0 = ensemble_entropy(base)
    rng = np.random.default_rng(seed)
    dirs = []
    while len(dirs) < directions:
        v = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        if np.all(np.abs(v[:, 2]) >= 0.1 * np.linalg.norm(v, axis=1)):
            dirs.append(v)
    rows = []
    for eps in eps_grid:
        ds, do = np.zeros(directions), np.zeros(directions)
        for j, v in enumerate(dirs):
            if eps == 0:
                continue
            moved = Ensemble.from_unnormalized(base.states + eps * v, base.probs)
            sp = triple_spec_of(moved)
            a1 = np.minimum(np.array(sp.overlaps), a0)
            probe = construct_triple(TripleSpec(*a1.tolist(), sp.xi, spec.probs))
            ds[j] = ensemble_entropy(probe) - s0
            do[j] = float(np.max(pairwise_overlaps(probe) - o0))
        rows.append(ProbeRow(float(eps), ds, do))
    return rows
