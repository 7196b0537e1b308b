"""Three-state ensembles parameterised by overlaps and the triple phase xi.

Conventions: ``<psi1|psi2> = a12``, ``<psi1|psi3> = a31`` are real and
non-negative, ``<psi2|psi3> = a23 e^{i xi}``, so that the triple product
``<1|2><2|3><3|1>`` equals ``a12 a23 a31 e^{i xi}``. State indices in this
module are 0-based.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .ensemble import Ensemble, inner_products, pairwise_overlaps
from .entropy import spectrum_entropy
from .errors import DegenerateBasis, IndexOutOfRange, Infeasible, UndefinedPhase
from .numerics import clamp_eigenvalues, eigvalsh, trace_power

FEASIBILITY_SLACK = 1e-12
EQUAL_THIRDS = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


def feasibility_margin(a12: float, a23: float, a31: float, xi: float) -> float:
    """``1 + 2 a12 a23 a31 cos xi - (a12^2 + a23^2 + a31^2)``; the determinant of the unit-diagonal Gram."""
    return 1.0 + 2.0 * a12 * a23 * a31 * math.cos(xi) - (a12 * a12 + a23 * a23 + a31 * a31)


@dataclass(frozen=True)
class TripleSpec:
    a12: float
    a23: float
    a31: float
    xi: float = 0.0
    probs: tuple[float, float, float] = field(default=EQUAL_THIRDS)

    def __post_init__(self):
        for name in ("a12", "a23", "a31"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise Infeasible(f"{name}={v} is not an overlap in [0, 1]")
        if len(self.probs) != 3:
            raise ValueError("a triple needs exactly three probabilities")
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @property
    def overlaps(self) -> tuple[float, float, float]:
        return (self.a12, self.a23, self.a31)

    @property
    def margin(self) -> float:
        return feasibility_margin(self.a12, self.a23, self.a31, self.xi)

    @property
    def feasible(self) -> bool:
        return self.margin >= -FEASIBILITY_SLACK

    def with_xi(self, xi: float) -> TripleSpec:
        return replace(self, xi=xi)


def xi_max(a12: float, a23: float, a31: float) -> float | None:
    """Largest ``xi`` in ``[0, pi]`` with a non-negative feasibility margin.

    Returns None when no phase makes the overlaps realisable.
    """
    prod = a12 * a23 * a31
    ssq = a12 * a12 + a23 * a23 + a31 * a31
    if prod == 0.0:
        return math.pi if 1.0 - ssq >= -FEASIBILITY_SLACK else None
    c = (ssq - 1.0) / (2.0 * prod)
    if c <= -1.0:
        return math.pi
    if c > 1.0:
        # best case cos xi = 1 still fails unless within slack
        if feasibility_margin(a12, a23, a31, 0.0) < -FEASIBILITY_SLACK:
            return None
        return 0.0
    return math.acos(c)


def _check_feasible(spec: TripleSpec) -> None:
    if not spec.feasible:
        xm = xi_max(*spec.overlaps)
        where = "no phase works" if xm is None else f"|xi| must be <= {xm:.12g}"
        raise Infeasible(
            f"overlaps {spec.overlaps} with xi={spec.xi:.12g} violate "
            f"1 + 2 a12 a23 a31 cos xi >= a12^2 + a23^2 + a31^2 "
            f"(lhs={1 + 2 * spec.a12 * spec.a23 * spec.a31 * math.cos(spec.xi):.12g}, "
            f"rhs={spec.a12**2 + spec.a23**2 + spec.a31**2:.12g}; {where})"
        )


def construct_triple(spec: TripleSpec) -> Ensemble:
    """Explicit states in a 3-dimensional space with the given overlaps and phase.

    ``|psi1> = |0>``, ``|psi2> = a12|0> + sqrt(1-a12^2)|1>`` and
    ``|psi3> = a31|0> + eta|1> + z|2>`` with
    ``eta = (a23 e^{i xi} - a31 a12)/sqrt(1 - a12^2)`` and ``z >= 0`` fixed by
    normalisation. The gauge ``z`` real is also used when ``a31 = 0``.

    When ``a12 = 1`` the first two states coincide, which is only consistent
    with ``a23 = a31``; the third state is then placed in the plane of
    ``|0>, |1>``.
    """
    _check_feasible(spec)
    a12, a23, a31, xi = spec.a12, spec.a23, spec.a31, spec.xi
    psi = np.zeros((3, 3), dtype=complex)
    psi[0, 0] = 1.0
    if a12 >= 1.0:
        if abs(a23 - a31) > 1e-12:
            raise DegenerateBasis(
                f"a12 = 1 makes states 1 and 2 identical, but a23={a23} != a31={a31}"
            )
        psi[1, 0] = 1.0
        psi[2, 0] = a31
        psi[2, 1] = math.sqrt(max(0.0, 1.0 - a31 * a31))
    else:
        s = math.sqrt(1.0 - a12 * a12)
        psi[1, 0] = a12
        psi[1, 1] = s
        eta = (a23 * complex(math.cos(xi), math.sin(xi)) - a31 * a12) / s
        z2 = 1.0 - abs(eta) ** 2 - a31 * a31
        psi[2, 0] = a31
        psi[2, 1] = eta
        psi[2, 2] = math.sqrt(max(0.0, z2))
    return Ensemble(psi, np.asarray(spec.probs), tol=1e-9)


@dataclass(frozen=True)
class ChainValue:
    indices: tuple[int, ...]
    value: complex


def chain_invariant(ens: Ensemble, indices) -> ChainValue:
    """Product of inner products around the closed chain ``i1 -> i2 -> ... -> i1``."""
    idx = tuple(int(i) for i in indices)
    if not idx:
        raise IndexOutOfRange("a chain needs at least one index")
    for i in idx:
        if not 0 <= i < ens.n:
            raise IndexOutOfRange(f"index {i} outside 0..{ens.n - 1}")
    ip = inner_products(ens)
    value = complex(1.0)
    for a, b in zip(idx, idx[1:] + idx[:1]):
        value *= ip[a, b]
    if len(idx) <= 2:
        value = complex(value.real, 0.0)
    return ChainValue(idx, value)


def triple_phase(ens: Ensemble, i: int = 0, j: int = 1, k: int = 2) -> float:
    """Phase of the triple product over states ``i, j, k``, in ``(-pi, pi]``."""
    o = pairwise_overlaps(ens)
    for a, b in ((i, j), (j, k), (k, i)):
        if o[a, b] < 1e-12:
            raise UndefinedPhase(f"states {a} and {b} are orthogonal; triple phase undefined")
    v = chain_invariant(ens, (i, j, k)).value
    xi = math.atan2(v.imag, v.real)
    return math.pi if xi == -math.pi else xi


def triple_spec_of(ens: Ensemble) -> TripleSpec:
    """Overlaps, phase and priors of a three-state ensemble.

    The phase is taken as 0 when some overlap vanishes (it is then undefined
    and the spectrum does not depend on it).
    """
    if ens.n != 3:
        raise IndexOutOfRange(f"expected 3 states, got {ens.n}")
    o = pairwise_overlaps(ens)
    try:
        xi = triple_phase(ens)
    except UndefinedPhase:
        xi = 0.0
    return TripleSpec(o[0, 1], o[1, 2], o[2, 0], xi, tuple(ens.probs))


def canonical_gram(spec: TripleSpec) -> np.ndarray:
    """Gram matrix with real non-negative (1,2), (1,3) entries and phase on (2,3)."""
    _check_feasible(spec)
    p = np.asarray(spec.probs, dtype=float)
    w = np.sqrt(p)
    g = np.diag(p).astype(complex)
    g[0, 1] = g[1, 0] = w[0] * w[1] * spec.a12
    g[0, 2] = g[2, 0] = w[0] * w[2] * spec.a31
    g[1, 2] = w[1] * w[2] * spec.a23 * complex(math.cos(spec.xi), math.sin(spec.xi))
    g[2, 1] = np.conj(g[1, 2])
    return g


@dataclass(frozen=True)
class SweepPoint:
    xi: float
    eigenvalues: np.ndarray
    entropy: float
    trace_g2: float
    trace_g3: float


def xi_sweep(a12: float, a23: float, a31: float, probs=EQUAL_THIRDS, steps: int = 100) -> list[SweepPoint]:
    """Entropy along the closed grid ``xi`` in ``[0, xi_max]`` at fixed overlaps.

    Entropies are in nats. ``steps`` is the number of grid points.
    """
    if steps < 2:
        raise ValueError("a sweep needs at least two grid points")
    xm = xi_max(a12, a23, a31)
    if xm is None:
        _check_feasible(TripleSpec(a12, a23, a31, 0.0, tuple(probs)))
    base = TripleSpec(a12, a23, a31, 0.0, tuple(probs))
    grid = np.linspace(0.0, xm, steps)
    grams = np.stack([canonical_gram(base.with_xi(min(float(x), xm))) for x in grid])
    w = clamp_eigenvalues(eigvalsh(grams))
    ent = spectrum_entropy(w)
    t2 = trace_power(grams, 2)
    t3 = trace_power(grams, 3)
    return [
        SweepPoint(float(grid[i]), w[i], float(ent[i]), float(t2[i]), float(t3[i]))
        for i in range(steps)
    ]


def sweep_csv(points: list[SweepPoint]) -> str:
    """CSV text: ``xi,lambda1,lambda2,lambda3,entropy_nats,trace_g3`` at 12 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["xi", "lambda1", "lambda2", "lambda3", "entropy_nats", "trace_g3"])
    for pt in points:
        vals = [pt.xi, *pt.eigenvalues.tolist(), pt.entropy, pt.trace_g3]
        writer.writerow([f"{v:.12g}" for v in vals])
    return buf.getvalue()
