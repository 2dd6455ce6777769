import dataclasses
import io
from itertools import combinations
from math import comb

import numpy as np
import pytest

from hermitian_ramsey.errors import BudgetExceeded
from hermitian_ramsey.unital import find_onan_configurations, verify_design

from oracles import FANO, PolyField, brute_pasch, brute_unital, code_of, cyclic_sts13


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_counts(built, q):
    _, plane, u, _ = built(q)
    assert u.n_points == q**3 + 1
    assert len(u.tangents) == q**3 + 1
    assert u.n_secants == q**2 * (q**2 - q + 1)
    assert len(u.tangents) + u.n_secants == plane.size
    assert u.secant_points.shape == (u.n_secants, q + 1)


@pytest.mark.parametrize("q", [2, 3])
def test_points_match_brute_force(built, q):
    spec, plane, u, _ = built(q)
    oracle = PolyField(spec.p, spec.modulus)
    expected = {tuple(code_of(c, spec.p) for c in t) for t in brute_unital(oracle, q)}
    ours = {tuple(int(c) for c in plane.points[i]) for i in u.point_ids}
    assert ours == expected


def test_q2_points_have_one_zero_coordinate(built):
    spec, plane, u, _ = built(2)
    for i in u.point_ids:
        coords = [int(c) for c in plane.points[i]]
        assert coords.count(0) == 1
        assert all(spec.norm(c) == 1 for c in coords if c)
    assert plane.index_of((0, 1, 2)) in set(u.point_ids.tolist())   # <0, 1, w>


@pytest.mark.parametrize("q", [2, 3, 4])
def test_every_line_meets_in_one_or_q_plus_one(built, q):
    _, plane, u, _ = built(q)
    pts = set(u.point_ids.tolist())
    sizes = {sum(1 for p in row if p in pts) for row in plane.incidence.tolist()}
    assert sizes == {1, q + 1}


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_design_passes(built, q):
    rep = verify_design(built(q)[2])
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("q,blocks,per_block", [(2, 12, 3), (3, 63, 6)])
def test_pair_count_identity(built, q, blocks, per_block):
    u = built(q)[2]
    assert u.n_secants == blocks
    assert blocks * per_block == comb(u.n_points, 2)
    assert verify_design(u)["pair_coverage"].detail["pairs"] == comb(u.n_points, 2)


def test_dropped_secant_names_uncovered_pair(built):
    u = built(3)[2]
    broken = dataclasses.replace(u, secants=u.secants[1:], secant_points=u.secant_points[1:])
    rep = verify_design(broken)
    check = rep["pair_coverage"]
    assert not check.passed
    a, b = check.detail["uncovered_pair"]
    assert {a, b} <= set(u.secant_points[0].tolist())
    assert not rep["secants_per_point"].passed


def test_dump_header_and_rows(built):
    u = built(2)[2]
    buf = io.StringIO()
    u.dump(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "U 2 9 12"
    assert len(lines) == 13
    assert lines[1].startswith("S 0 : ") and len(lines[1].split(" : ")[1].split()) == 3


@pytest.mark.parametrize("q", [2, 3])
def test_no_onan_exhaustive(built, q):
    assert find_onan_configurations(built(q)[2], mode="exhaustive") == []


def test_no_onan_triangle_first_complete_q4(built):
    assert find_onan_configurations(built(4)[2], mode="pruned", frontier_cap=None) == []


@pytest.mark.parametrize("q", [5, 7])
def test_no_onan_capped(built, q):
    assert find_onan_configurations(built(q)[2], mode="pruned", frontier_cap=5000) == []


def test_exhaustive_refused_over_budget(built):
    with pytest.raises(BudgetExceeded):
        find_onan_configurations(built(4)[2], mode="exhaustive")


@pytest.mark.parametrize("blocks", [FANO, cyclic_sts13()], ids=["fano", "sts13"])
def test_planted_pasch_detected(blocks):
    expected = brute_pasch(blocks)
    assert expected
    for mode in ("exhaustive", "pruned"):
        found = find_onan_configurations(blocks, mode=mode)
        assert len(found) == len(expected)
        assert sorted(tuple(sorted(tuple(blocks[i]) for i in w.lines)) for w in found) == \
            sorted(tuple(sorted(q)) for q in expected)
        assert all(w.incidence_ok(blocks) for w in found)


def test_witness_incidence_pattern():
    w = find_onan_configurations(FANO, mode="pruned")[0]
    assert len(set(w.lines)) == 4 and len(set(w.points)) == 6
    for line in w.lines:
        assert sum(p in FANO[line] for p in w.points) == 3
    for p in w.points:
        assert sum(p in FANO[line] for line in w.lines) == 2


def test_search_order_deterministic(built):
    u = built(5)[2]
    a = find_onan_configurations(u, frontier_cap=1000)
    b = find_onan_configurations(u, frontier_cap=1000)
    assert a == b


def test_rejects_non_linear_space():
    with pytest.raises(ValueError):
        find_onan_configurations([(0, 1, 2), (0, 1, 3)])


def test_blocks_are_local_indices(built):
    u = built(3)[2]
    b = u.blocks
    assert b.min() == 0 and b.max() == u.n_points - 1
    assert np.array_equal(u.point_ids[b], u.secant_points)
    assert all(len(set(r)) == 4 for r in b.tolist())
    assert all(len(set(x) & set(y)) <= 1 for x, y in combinations(b.tolist()[:20], 2))
