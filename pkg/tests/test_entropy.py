from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gramdeform.ensemble import Ensemble, density_matrix
from gramdeform.entropy import (
    SQRT_2_3,
    ensemble_entropy,
    linearized_entropy,
    polar_lambdas,
    polar_to_simplex,
    shannon_entropy,
    simplex_to_polar,
    spectrum_entropy,
    theta_max,
    trace_cubed_polar,
    von_neumann_entropy,
)
from gramdeform.errors import InvalidDistribution, OutsideSimplex, TraceNotOne
from helpers import staircase, random_ensemble, two_state

seeds = st.integers(min_value=0, max_value=2**32 - 1)
sizes = st.integers(min_value=1, max_value=6)


def oracle_entropy(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log(w)))


def test_two_state_value():
    # eigenvalues cos^2(pi/8), sin^2(pi/8)
    c, s = math.cos(math.pi / 8) ** 2, math.sin(math.pi / 8) ** 2
    expected = -(c * math.log2(c) + s * math.log2(s))
    assert abs(ensemble_entropy(two_state(), "bits") - expected) < 1e-12
    assert abs(expected - 0.601) < 1e-3


def test_staircase_value():
    assert abs(ensemble_entropy(staircase()) - 0.6131214188) < 1e-9


@given(seeds, sizes, sizes)
def test_gram_route_matches_density_oracle(seed, n, d):
    ens = random_ensemble(np.random.default_rng(seed), n, d)
    assert abs(ensemble_entropy(ens) - oracle_entropy(density_matrix(ens))) < 1e-9


@given(seeds, sizes, sizes)
def test_entropy_bounded_by_shannon(seed, n, d):
    ens = random_ensemble(np.random.default_rng(seed), n, d)
    assert ensemble_entropy(ens) <= shannon_entropy(ens.probs) + 1e-9


@given(seeds, sizes, sizes)
def test_bits_are_nats_over_ln2(seed, n, d):
    ens = random_ensemble(np.random.default_rng(seed), n, d)
    assert ensemble_entropy(ens, "bits") == ensemble_entropy(ens) * (1.0 / math.log(2.0))


@given(seeds, sizes, sizes)
def test_linearized_entropy_routes_agree(seed, n, d):
    ens = random_ensemble(np.random.default_rng(seed), n, d)
    rho = density_matrix(ens)
    assert abs(linearized_entropy(ens) - (1 - np.trace(rho @ rho).real)) < 1e-10


def test_qubit_entropy_increasing_in_linearized_entropy():
    lam = np.linspace(0.0, 0.5, 10_001)[1:]
    w = np.stack([lam, 1 - lam], axis=-1)
    s = spectrum_entropy(w)
    s_lin = 2 * lam * (1 - lam)
    order = np.argsort(s_lin)
    assert np.all(np.diff(s[order]) > 0)


@pytest.mark.parametrize("r", np.linspace(0.01, SQRT_2_3 - 1e-6, 50))
def test_entropy_and_cubic_trace_fall_with_angle(r):
    th = np.linspace(0.0, theta_max(r), 60)
    lam = np.clip(polar_lambdas(r, th), 0.0, None)
    s = spectrum_entropy(lam)
    t3 = np.array([trace_cubed_polar(r, t) for t in th])
    assert np.all(np.diff(s) <= 1e-12)
    assert np.all(np.diff(t3) <= 1e-12)
    np.testing.assert_allclose(t3, np.sum(lam**3, axis=-1), atol=1e-12)


@given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=3).filter(lambda v: sum(v) > 1e-3))
def test_polar_roundtrip(values):
    lam = np.array(values) / sum(values)
    pt = simplex_to_polar(lam)
    assert 0.0 <= pt.theta <= math.pi / 3 + 1e-12
    back = polar_to_simplex(pt.r, pt.theta).canonical
    np.testing.assert_allclose(back, pt.canonical, atol=1e-9)
    assert pt.canonical[0] >= pt.canonical[2] >= pt.canonical[1]


def test_polar_points():
    centre = simplex_to_polar([1 / 3, 1 / 3, 1 / 3])
    assert centre.r == 0.0 and centre.theta == 0.0
    vertex = simplex_to_polar([0.0, 1.0, 0.0])
    assert abs(vertex.r - SQRT_2_3) < 1e-12
    assert vertex.canonical == (1.0, 0.0, 0.0)
    assert theta_max(0.1) == math.pi / 3


def test_errors():
    with pytest.raises(OutsideSimplex):
        simplex_to_polar([0.5, 0.6, -0.1])
    with pytest.raises(OutsideSimplex):
        theta_max(1.0)
    with pytest.raises(InvalidDistribution):
        shannon_entropy([0.5, 0.6])
    with pytest.raises(TraceNotOne):
        von_neumann_entropy(np.eye(2))
    with pytest.raises(ValueError):
        spectrum_entropy([1.0], base="hartleys")


def test_pure_and_maximally_mixed():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert abs(von_neumann_entropy(np.eye(4) / 4, "bits") - 2.0) < 1e-12
    ens = Ensemble(np.eye(3), [1 / 3, 1 / 3, 1 / 3])
    assert abs(ensemble_entropy(ens) - math.log(3)) < 1e-12
