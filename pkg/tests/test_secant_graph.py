import io
from itertools import combinations
from math import comb, log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermitian_ramsey.errors import EmptyX
from hermitian_ramsey.graphs import find_k4s, read_edges
from hermitian_ramsey.secant_graph import (clique_decomposition, graph_from_unital_dump, read_cliques,
                                           srg_check, srg_parameters, verify_base_properties)


@pytest.mark.parametrize("q,n,d,cliques,edges", [
    (2, 12, 9, 9, 54),
    (3, 63, 32, 28, 1008),
    (4, 208, 75, 65, 65 * comb(16, 2)),
])
def test_build_counts(built, q, n, d, cliques, edges):
    g = built(q)[3]
    assert g.n == n and g.n_cliques == cliques
    assert np.all(g.degrees() == d)
    assert g.edge_count == edges == n * d // 2


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_base_properties(built, q):
    rep = verify_base_properties(built(q)[3])
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("q", [2, 3])
def test_k4_census_three_in_clique(built, q):
    g = built(q)[3]
    rep = verify_base_properties(g)
    assert rep["iv_k4_three_in_clique"].detail["k4_count"] > 0
    for k4 in find_k4s(g.adj):
        owners = [set(g.vertex_cliques[v].tolist()) for v in k4]
        assert any(sum(c in o for o in owners) >= 3 for c in set().union(*owners))


def test_adjacency_matches_geometry_q3(built):
    _, plane, u, g = built(3)
    pts = [set(r) for r in u.secant_points.tolist()]
    for x, y in combinations(range(g.n), 2):
        assert g.has_edge(x, y) == bool(pts[x] & pts[y])


def test_edges_lie_in_one_clique(built):
    g = built(3)[3]
    for x, y in g.edges():
        shared = set(g.vertex_cliques[x].tolist()) & set(g.vertex_cliques[y].tolist())
        assert len(shared) == 1 and g.edge_clique(x, y) in shared
    assert sum(comb(int(s), 2) for s in g.clique_sizes) == g.edge_count


def test_deleted_clique_breaks_regularity(built):
    g = built(3)[3].without_clique_edges(0)
    rep = verify_base_properties(g)
    assert not rep["i_regular"].passed


@pytest.mark.parametrize("q,lam,mu,lhs", [(2, 6, 9, 18), (3, 16, 16, 480), (4, 30, 25, 3300)])
def test_srg_parameters(q, lam, mu, lhs):
    s = srg_parameters(q)
    assert (s["lambda"], s["mu"]) == (lam, mu)
    assert s["d"] * (s["d"] - lam - 1) == (s["n"] - s["d"] - 1) * mu == lhs


@pytest.mark.parametrize("q", [2, 3, 4])
def test_srg_exhaustive(built, q):
    rep = srg_check(built(q)[3])
    assert rep.passed, rep.summary()
    check = rep["common_neighbours"]
    assert check.detail["mode"] == "exhaustive"
    assert check.detail["adjacent"] + check.detail["non_adjacent"] == comb(built(q)[3].n, 2)


def test_srg_matrix_identity_q3(built):
    g = built(3)[3]
    A = np.zeros((g.n, g.n), dtype=np.int64)
    for x, y in g.edges():
        A[x, y] = A[y, x] = 1
    s = srg_parameters(3)
    I, J = np.eye(g.n, dtype=np.int64), np.ones((g.n, g.n), dtype=np.int64)
    assert np.array_equal(A @ A, s["d"] * I + s["lambda"] * A + s["mu"] * (J - I - A))


def test_srg_detects_broken_graph(built):
    rep = srg_check(built(3)[3].without_clique_edges(2))
    assert not rep.passed


def test_exports_round_trip(built):
    g = built(2)[3]
    buf = io.StringIO()
    g.write_edges(buf)
    n, edges = read_edges(io.StringIO(buf.getvalue()))
    assert n == g.n and edges == list(g.edges())
    buf2 = io.StringIO()
    g.write_cliques(buf2)
    assert buf2.getvalue().startswith("K 0 : ")
    cliques = read_cliques(io.StringIO(buf2.getvalue()))
    assert [sorted(c) for c in cliques] == [sorted(g.clique(c).tolist()) for c in range(g.n_cliques)]


def test_graph_from_unital_dump(built):
    u, g = built(3)[2], built(3)[3]
    buf = io.StringIO()
    u.dump(buf)
    h = graph_from_unital_dump(io.StringIO(buf.getvalue()))
    assert list(h.edges()) == list(g.edges())


def test_decomposition_full_clique_q4(built):
    g = built(4)[3]
    X = g.clique(0)
    dec = clique_decomposition(g, X)
    assert dec.k == 16
    assert dec.medium_max == pytest.approx(32 ** 0.5)
    assert dec.L == [tuple(sorted(X.tolist()))]
    assert dec.v_L == 16 <= 2 * dec.k
    # every other clique meets a fixed clique in one vertex: no further traces of size >= 2
    assert dec.S == [] and dec.M == []


def test_decomposition_two_nonadjacent(built):
    g = built(3)[3]
    x = 0
    y = next(v for v in range(1, g.n) if not g.has_edge(x, v))
    dec = clique_decomposition(g, [x, y])
    assert dec.S == dec.M == dec.L == []
    assert dec.v_T == 0
    assert dec.trace_bounds["v_SM_bound"] < 0 and dec.trace_bounds["v_SM_ok"]


def test_decomposition_empty_rejected(built):
    with pytest.raises(EmptyX):
        clique_decomposition(built(2)[3], [])


def test_decomposition_thresholds_natural_log(built):
    g = built(3)[3]
    dec = clique_decomposition(g, range(40))
    assert dec.small_max == pytest.approx((80 ** 0.5) / log(g.n))


def test_decomposition_q3_size40_seeded(built):
    g = built(3)[3]
    rng = np.random.default_rng(40)
    for _ in range(100):
        X = rng.choice(g.n, size=40, replace=False)
        dec = clique_decomposition(g, X)
        assert dec.v_L <= 80
        assert dec.v_S + dec.v_M >= 2 * 40 - 28


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.data())
def test_decomposition_partition_properties(built, q, data):
    g = built(q)[3]
    X = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n))
    dec = clique_decomposition(g, X)
    traces = dec.S + dec.M + dec.L
    assert all(len(t) >= 2 for t in traces)
    assert all(len(t) <= dec.small_max for t in dec.S)
    assert all(dec.small_max < len(t) <= dec.medium_max for t in dec.M)
    assert all(len(t) > dec.medium_max for t in dec.L)
    assert dec.v_T + dec.singletons == (q + 1) * len(X)
    assert dec.e_S + dec.e_M + dec.e_L == sum(comb(len(t), 2) for t in traces)
    # edges of H_q[X] are exactly the trace edges, since each edge lies in one clique
    xs = sorted(X)
    induced = sum(1 for a, b in combinations(xs, 2) if g.has_edge(a, b))
    assert induced == dec.e_S + dec.e_M + dec.e_L
    assert dec.trace_bounds["v_L_ok"] and dec.trace_bounds["v_SM_ok"]


def test_decomposition_dichotomy_reported_not_asserted(built):
    g = built(3)[3]
    dec = clique_decomposition(g, range(30), m_override=30)
    assert dec.edge_dichotomy["asserted"] is False
    assert {"e_S_target", "e_M_target", "dichotomy_holds"} <= set(dec.edge_dichotomy)
    dec = clique_decomposition(g, range(30), m_override=30, constants=(64.0, 16.0))
    assert dec.edge_dichotomy["asserted"] is True


def test_sampled_srg_q5(built):
    rep = srg_check(built(5)[3], pair_budget=1000, samples=20000)
    assert rep.passed, rep.summary()
