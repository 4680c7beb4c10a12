import numpy as np
import pytest

import graphent as ge
from graphent.exceptions import LimitExceededError

from helpers import random_bipartition, random_density, random_pauli_product


def test_identity_channel_leaves_state_unchanged():
    rng = np.random.default_rng(109)
    rho = random_density(rng, 3)
    ch = ge.ProductChannel.uniform(ge.identity_channel(), 3)
    assert np.allclose(ge.evolve_density(rho, ch), rho, atol=1e-14)


def test_uniform_pauli_noise_gives_maximally_mixed():
    # probabilities (1/4, 1/4, 1/4, 1/4) are reached at p = 3/4
    g = ge.preset_graph("ring:3")
    ch = ge.ProductChannel.uniform(ge.depolarizing(0.75), 3)
    out = ge.evolve_density(ge.graph_state_density(g), ch)
    assert np.allclose(out, np.eye(8) / 8, atol=1e-12)


def test_endpoint_depolarization_is_separable():
    g = ge.preset_graph("ring:3")
    ch = ge.ProductChannel.uniform(ge.depolarizing(1.0), 3)
    out = ge.evolve_density(ge.graph_state_density(g), ch)
    ge.assert_density_matrix(out)
    for mask in (0b001, 0b011, 0b101):
        assert ge.negativity(out, mask) < 1e-12


def test_dephasing_scales_bell_coherences():
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    for p in (0.0, 0.4, 1.0):
        ch = ge.ProductChannel([ge.dephasing(p), ge.identity_channel()])
        out = ge.evolve_density(rho, ch)
        expect = rho.copy()
        expect[0, 3] *= 1 - p
        expect[3, 0] *= 1 - p
        assert np.allclose(out, expect, atol=1e-12)


def test_application_order_does_not_matter():
    rng = np.random.default_rng(113)
    rho = random_density(rng, 2)
    a = ge.PauliQubitChannel((0.6, 0.2, 0.1, 0.1))
    b = ge.amplitude_damping(0.3)
    joint = ge.evolve_density(rho, ge.ProductChannel([a, b]))
    first = ge.evolve_density(rho, ge.ProductChannel([a, ge.identity_channel()]))
    swapped = ge.evolve_density(first, ge.ProductChannel([ge.identity_channel(), b]))
    assert np.allclose(joint, swapped, atol=1e-12)
    other = ge.evolve_density(rho, ge.ProductChannel([ge.identity_channel(), b]))
    other = ge.evolve_density(other, ge.ProductChannel([a, ge.identity_channel()]))
    assert np.allclose(joint, other, atol=1e-12)


def test_output_is_a_density_matrix():
    rng = np.random.default_rng(127)
    for _ in range(6):
        n = int(rng.integers(2, 5))
        g = ge.random_connected_graph(n, rng)
        chans = [
            ge.gad(float(rng.random()), float(rng.random())) if rng.random() < 0.5
            else random_pauli_product(rng, 1).per_qubit[0]
            for _ in range(n)
        ]
        out = ge.evolve_density(ge.graph_state_density(g), ge.ProductChannel(chans))
        ge.assert_density_matrix(out)


def test_oracle_negativity_reference_points():
    g = ge.preset_graph("chain:4")
    part = ge.parse_partition("one-vs-rest:0", 4)
    assert np.isclose(
        ge.oracle_negativity(g, part, ge.ProductChannel.uniform(ge.identity_channel(), 4)), 0.5, atol=1e-12
    )
    assert ge.oracle_negativity(g, part, ge.ProductChannel.uniform(ge.depolarizing(1.0), 4)) < 1e-12


def test_oracle_size_limit():
    g = ge.preset_graph("chain:9")
    ch = ge.ProductChannel.uniform(ge.dephasing(0.1), 9)
    with pytest.raises(LimitExceededError):
        ge.oracle_negativity(g, ge.parse_partition("one-vs-rest:4", 9), ch)


def test_oracle_agrees_with_fast_path_on_random_cases():
    rng = np.random.default_rng(131)
    for _ in range(6):
        n = int(rng.integers(2, 7))
        g = ge.random_connected_graph(n, rng)
        part = random_bipartition(rng, n)
        ch = random_pauli_product(rng, n)
        assert abs(ge.oracle_negativity(g, part, ch) - ge.exact_entanglement_pauli(g, part, ch)) < 1e-9
