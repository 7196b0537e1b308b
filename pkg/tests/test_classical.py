from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gramdeform.classical import (
    DiscreteChannel,
    abc_channel,
    abc_prime_channel,
    mutual_information,
    overlap_table,
    pairwise_distribution_overlap,
    total_variation_overlap,
)
from gramdeform.entropy import shannon_entropy
from gramdeform.errors import IndexOutOfRange, InvalidDistribution

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def joint_oracle(ch):
    # I(X:Y) from the joint distribution, in bits
    joint = ch.priors[:, None] * ch.rows
    px, py = joint.sum(1), joint.sum(0)
    nz = joint > 0
    return float(np.sum(joint[nz] * np.log2(joint[nz] / np.outer(px, py)[nz])))


def test_closed_forms():
    assert abs(mutual_information(abc_channel(), "bits") - (math.log2(3) - 1)) < 1e-10
    expected = 0.5 * math.log2(6) - 0.5
    assert abs(mutual_information(abc_prime_channel(), "bits") - expected) < 1e-10
    assert abs(expected - 0.7925) < 1e-4


def test_equal_overlaps_different_information():
    for ch in (abc_channel(), abc_prime_channel()):
        t = overlap_table(ch)
        np.testing.assert_allclose(t[~np.eye(3, dtype=bool)], 0.5, atol=1e-15)
        np.testing.assert_allclose(overlap_table(ch, total_variation_overlap)[0, 1], 0.5)
    gap = mutual_information(abc_prime_channel(), "bits") - mutual_information(abc_channel(), "bits")
    assert gap > 0.2


@given(seeds, st.integers(1, 5), st.integers(1, 6))
def test_mutual_information_bounds(seed, nx, ny):
    rng = np.random.default_rng(seed)
    ch = DiscreteChannel(rng.dirichlet(np.ones(nx)), rng.dirichlet(np.ones(ny), size=nx))
    i = mutual_information(ch, "bits")
    hx = shannon_entropy(ch.priors, "bits")
    hy = shannon_entropy(ch.output_distribution / ch.output_distribution.sum(), "bits")
    assert -1e-9 <= i <= min(hx, hy) + 1e-9
    assert abs(i - joint_oracle(ch)) < 1e-10


def test_validation():
    with pytest.raises(InvalidDistribution, match="row 1"):
        DiscreteChannel([0.5, 0.5], [[1.0, 0.0], [0.6, 0.6]])
    with pytest.raises(InvalidDistribution):
        DiscreteChannel([0.5, 0.6], [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(IndexOutOfRange):
        pairwise_distribution_overlap(abc_channel(), 0, 3)
