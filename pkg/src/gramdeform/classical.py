"""Classical three-signal channels with equal pairwise overlaps but different information."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import shannon_entropy
from .errors import IndexOutOfRange, InvalidDistribution


@dataclass(frozen=True)
class DiscreteChannel:
    """Signals ``x`` sent with ``priors[x]``; row ``x`` of ``rows`` is ``p(y|x)``."""

    priors: np.ndarray
    rows: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float)
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or priors.shape != (rows.shape[0],):
            raise InvalidDistribution(
                f"priors {priors.shape} do not match channel rows {rows.shape}"
            )
        if np.any(rows < 0) or np.any(priors < 0):
            raise InvalidDistribution("probabilities must be non-negative")
        bad = np.nonzero(np.abs(rows.sum(axis=1) - 1.0) > 1e-12)[0]
        if bad.size:
            raise InvalidDistribution(f"row {int(bad[0])} of the channel does not sum to 1")
        if abs(priors.sum() - 1.0) > 1e-12:
            raise InvalidDistribution(f"priors sum to {priors.sum():.12g}, expected 1")
        labels = tuple(self.labels) or tuple(str(i) for i in range(rows.shape[0]))
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def output_distribution(self) -> np.ndarray:
        return self.priors @ self.rows


def mutual_information(ch: DiscreteChannel, base: str = "nats") -> float:
    """``I(X:Y) = H(Y) - H(Y|X)``."""
    h_y = shannon_entropy(ch.output_distribution / ch.output_distribution.sum(), base)
    h_y_given_x = sum(
        p * shannon_entropy(row, base) for p, row in zip(ch.priors, ch.rows) if p > 0
    )
    return h_y - h_y_given_x


def _row(ch: DiscreteChannel, i: int) -> np.ndarray:
    if not 0 <= i < ch.rows.shape[0]:
        raise IndexOutOfRange(f"signal index {i} outside 0..{ch.rows.shape[0] - 1}")
    return ch.rows[i]


def pairwise_distribution_overlap(ch: DiscreteChannel, i: int, j: int) -> float:
    """Bhattacharyya coefficient ``sum_y sqrt(p(y|i) p(y|j))``."""
    return float(np.sum(np.sqrt(_row(ch, i) * _row(ch, j))))


def total_variation_overlap(ch: DiscreteChannel, i: int, j: int) -> float:
    """``sum_y min(p(y|i), p(y|j))``, i.e. one minus the total-variation distance."""
    return float(np.sum(np.minimum(_row(ch, i), _row(ch, j))))


def overlap_table(ch: DiscreteChannel, measure=pairwise_distribution_overlap) -> np.ndarray:
    k = ch.rows.shape[0]
    return np.array([[measure(ch, i, j) for j in range(k)] for i in range(k)])


def abc_channel() -> DiscreteChannel:
    """A, B, C uniform on {1,2}, {2,3}, {1,3}."""
    rows = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    return DiscreteChannel(np.full(3, 1.0 / 3.0), rows, ("A", "B", "C"))


def abc_prime_channel() -> DiscreteChannel:
    """A', B', C' uniform on {1,4}, {2,4}, {3,4}."""
    rows = np.array(
        [[0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.0, 0.5], [0.0, 0.0, 0.5, 0.5]]
    )
    return DiscreteChannel(np.full(3, 1.0 / 3.0), rows, ("A'", "B'", "C'"))
