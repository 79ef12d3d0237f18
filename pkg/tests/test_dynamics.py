import itertools
import math

import numpy as np
import pytest
from scipy import stats as sps

import sampling
from pottsmix.dynamics import (
    RestrictedContext,
    heat_bath_step,
    modified_sw_step,
    restricted_hb_step,
    sw_bond_step,
    sw_color_step,
    sw_rc_step,
    sw_step,
)
from pottsmix.exact import build_hb_matrix, build_modified_sw_matrix, build_sw_matrix
from pottsmix.graph import (
    Graph,
    build_dual_square_lattice,
    build_square_lattice,
    build_tree_dual,
    path_graph,
    star_graph,
)
from pottsmix.model import ModelParams, exact_distribution, mono_edges, self_dual_p, spin_index
from pottsmix.rng import RngStream

K2 = path_graph(2)
G1 = build_square_lattice(1)
G2 = build_square_lattice(2)


def test_rng_is_reproducible_and_streams_differ():
    a, b = RngStream(7), RngStream(7)
    xs = [a.random() for _ in range(5000)]
    assert xs == [b.random() for _ in range(5000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    c = RngStream(7).spawn(1)
    assert [c.random() for _ in range(10)] != xs[:10]
    assert all(0 <= RngStream(3).randbelow(5) < 5 for _ in range(100))


def test_heat_bath_isolated_vertex_is_uniform():
    g = Graph(1, ())
    rng = RngStream(1)
    counts = np.bincount([heat_bath_step(g, ModelParams(3, 2.0), [0], rng)[0] for _ in range(30000)], minlength=3)
    assert np.all(np.abs(counts - 10000) < 4 * math.sqrt(30000 * (1 / 3) * (2 / 3)))


def test_heat_bath_k2_flip_probability():
    beta = 0.9
    rng = RngStream(2)
    n = 100000
    # choose vertex 1 with prob 1/2, then flip with prob 1/(1+e^beta)
    flips = sum(heat_bath_step(K2, ModelParams(2, beta), [0, 0], rng)[1] for _ in range(n))
    p = 0.5 / (1 + math.exp(beta))
    assert abs(flips - n * p) < 4 * math.sqrt(n * p * (1 - p))


def test_bond_step_examples():
    rng = RngStream(3)
    assert sw_bond_step(G2, ModelParams(2, 0.0), [0, 0, 0, 0], rng) == bytearray(4)
    assert sw_bond_step(G2, ModelParams(2, 3.0), [0, 1, 1, 0], rng) == bytearray(4)
    n = 100000
    params = ModelParams.from_p(2, 0.5)
    kept = sum(sw_bond_step(K2, params, [1, 1], rng)[0] for _ in range(n))
    assert abs(kept - n / 2) <= 3 * math.sqrt(n / 4)


def test_color_step_examples():
    rng = RngStream(4)
    params = ModelParams(3, 0.5)
    full = bytearray([1]) * G2.n_edges
    colors = [sw_color_step(G2, params, full, rng) for _ in range(3000)]
    assert all(len(set(c)) == 1 for c in colors)
    assert set(c[0] for c in colors) == {0, 1, 2}
    for _ in range(200):
        A = bytearray(int(rng.random() < 0.5) for _ in range(G2.n_edges))
        sigma = sw_color_step(G2, params, A, rng)
        E = mono_edges(G2, sigma)
        assert all(E[e] for e in range(G2.n_edges) if A[e])
    n = 81000
    counts = np.zeros(81, dtype=int)
    for _ in range(n):
        counts[spin_index(sw_color_step(G2, params, bytearray(4), rng), 3)] += 1
    assert sampling.band_violations(counts, np.full(81, 1 / 81)) == []


def test_single_vertex_sw_is_uniform():
    rng = RngStream(5)
    counts = np.bincount([sw_step(G1, ModelParams(3, 1.0), [2], rng)[0] for _ in range(30000)], minlength=3)
    assert sampling.band_violations(counts, np.full(3, 1 / 3)) == []


def test_rc_step_at_p_zero_returns_empty():
    rng = RngStream(6)
    A = bytearray([1]) * 4
    for _ in range(50):
        assert sw_rc_step(G2, ModelParams(2, 0.0), A, rng) == bytearray(4)


def test_rc_step_preserves_mu_chi_square():
    params = ModelParams(3, 0.8)
    mu = exact_distribution(G2, params, "rc")
    rng = RngStream(8)
    cdf = np.cumsum(mu)
    n = 100000
    counts = np.zeros(16, dtype=int)
    for _ in range(n):
        start = int(np.searchsorted(cdf, rng.random(), side="right"))
        start = min(start, 15)
        A = bytearray((start >> e) & 1 for e in range(4))
        B = sw_rc_step(G2, params, A, rng)
        counts[sum(b << e for e, b in enumerate(B))] += 1
    stat, pvalue = sps.chisquare(counts, n * mu)
    assert pvalue > 1e-4


def test_modified_sw_on_tree_is_one_step_exact():
    tree = star_graph(3)
    d = build_tree_dual(tree)
    params = ModelParams(2, 1.2)
    rng = RngStream(9)
    n = 80000
    counts = np.zeros(16, dtype=int)
    for _ in range(n):
        counts[spin_index(modified_sw_step(d, params, [0, 1, 1, 0], rng), 2)] += 1
    assert sampling.band_violations(counts, exact_distribution(tree, params)) == []


def test_modified_sw_self_dual_parameter():
    params = ModelParams.from_p(2, self_dual_p(2))
    assert params.dual().p == pytest.approx(params.p, abs=1e-14)
    with pytest.raises(ValueError):
        modified_sw_step(build_dual_square_lattice(2), ModelParams(2, 0.0), [0] * 4, RngStream(1))


def test_restricted_hb_keeps_pin():
    ctx = RestrictedContext(2, 1)
    rng = RngStream(10)
    s = [0, 0, 1, 0]
    for _ in range(100000):
        s = restricted_hb_step(G2, ModelParams(2, 0.7), ctx, s, rng)
        assert s[2] == 1
    with pytest.raises(ValueError):
        restricted_hb_step(G2, ModelParams(2, 0.7), ctx, [0, 0, 0, 0], rng)
    with pytest.raises(ValueError):
        restricted_hb_step(G1, ModelParams(2, 0.7), RestrictedContext(0, 0), [0], rng)


def test_restricted_hb_large_beta_does_not_overflow():
    rng = RngStream(11)
    s = restricted_hb_step(G2, ModelParams(2, 1000.0), RestrictedContext(0, 0), [0, 0, 0, 0], rng)
    assert s == [0, 0, 0, 0]


@pytest.mark.parametrize("dynamics", ["hb", "sw", "msw", "swrc", "rhb"])
def test_one_step_law_matches_exact_row(dynamics):
    params = ModelParams.from_p(2, 0.5)
    step, m, index, start = sampling.setup(dynamics, G2, params)
    if dynamics != "swrc":
        start = [0, 0, 1, 0]
    rng = RngStream(12)
    counts = sampling.one_step_counts(step, start, index, m.dim, 100000, rng)
    assert sampling.band_violations(counts, m.entries[index(start)]) == []


@pytest.mark.parametrize("g", [K2, path_graph(3), G2], ids=lambda g: g.name)
@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("beta", [0.3, 1.0])
def test_exact_matrices_satisfy_detailed_balance(g, q, beta):
    params = ModelParams(q, beta)
    for m in (build_hb_matrix(g, params), build_sw_matrix(g, params)):
        flow = m.stationary[:, None] * m.entries
        assert np.max(np.abs(flow - flow.T)) <= 1e-12
    if g.name in ("P2", "P3"):
        m = build_modified_sw_matrix(build_tree_dual(g), params)
        flow = m.stationary[:, None] * m.entries
        assert np.max(np.abs(flow - flow.T)) <= 1e-12


@pytest.mark.parametrize("q", [2, 3])
def test_sw_commutes_with_color_permutations(q):
    params = ModelParams(q, 0.9)
    P = build_sw_matrix(G2, params).entries
    n = q**4
    for perm in itertools.permutations(range(q)):
        idx = np.array([spin_index([perm[(i // q**v) % q] for v in range(4)], q) for i in range(n)])
        np.testing.assert_allclose(P[np.ix_(idx, idx)], P, atol=1e-15)


def test_sw_support_on_k2():
    params = ModelParams(3, 0.7)
    P = build_sw_matrix(K2, params).entries
    for i, j in itertools.product(range(9), repeat=2):
        s = (i % 3, i // 3)
        # A = empty is always a common subset, so every transition is possible
        assert P[i, j] > 0
        if s[0] != s[1]:
            assert P[i, j] == pytest.approx(1 / 9, abs=1e-15)


def test_samplers_do_not_mutate_inputs_and_are_deterministic():
    params = ModelParams(2, 0.6)
    d = build_dual_square_lattice(2)
    for f in (lambda s, r: heat_bath_step(G2, params, s, r), lambda s, r: sw_step(G2, params, s, r),
              lambda s, r: modified_sw_step(d, params, s, r)):
        runs = []
        for _ in range(2):
            rng, s = RngStream(13), [0, 1, 0, 1]
            traj = []
            for _ in range(500):
                before = list(s)
                nxt = f(s, rng)
                assert s == before
                traj.append(tuple(nxt))
                s = nxt
            runs.append(traj)
        assert runs[0] == runs[1]
    s = [0, 1, 0, 1]
    sw_step(G2, params, s, RngStream(1))
    assert s == [0, 1, 0, 1]
