"""The Hermitian unital in PG(2, q^2) and the O'Nan (Pasch) configuration search."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence, TextIO

import numpy as np

from .errors import BudgetExceeded, InvariantViolation
from .field import FieldSpec
from .plane import ProjectivePlane
from .reports import Report

log = logging.getLogger(__name__)

DEFAULT_ONAN_BUDGET = 10**6


@dataclass(frozen=True)
class Unital:
    """Absolute points of the unitary polarity plus the line classification.

    ``point_ids``, ``tangents`` and ``secants`` hold plane ids.  Row ``i`` of
    ``secant_points`` lists the q+1 unital points (plane ids, sorted) on
    secant ``secants[i]``; ``tangent_points[j]`` is the touching point of
    ``tangents[j]``.
    """

    q: int
    point_ids: np.ndarray
    tangents: np.ndarray
    secants: np.ndarray
    secant_points: np.ndarray
    tangent_points: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.point_ids)

    @property
    def n_secants(self) -> int:
        return len(self.secants)

    def local_index(self, plane_ids) -> np.ndarray:
        """Position of plane point ids within ``point_ids``."""
        return np.searchsorted(self.point_ids, plane_ids)

    @property
    def blocks(self) -> np.ndarray:
        """Secants as blocks over unital-local point indices ``0..q^3``."""
        return self.local_index(self.secant_points)

    def dump(self, fh: TextIO) -> None:
        fh.write(f"U {self.q} {self.n_points} {self.n_secants}\n")
        for i, row in enumerate(self.secant_points):
            fh.write(f"S {i} : {' '.join(map(str, row))}\n")


def absolute_points(spec: FieldSpec, plane: ProjectivePlane) -> np.ndarray:
    """Boolean mask of points with x^(q+1) + y^(q+1) + z^(q+1) = 0."""
    norm, add = spec.norm_table, spec.add_table
    x, y, z = plane.points[:, 0], plane.points[:, 1], plane.points[:, 2]
    return add[add[norm[x], norm[y]], norm[z]] == 0


def build_unital(spec: FieldSpec, plane: ProjectivePlane) -> Unital:
    q = spec.q
    is_abs = absolute_points(spec, plane)
    point_ids = np.flatnonzero(is_abs).astype(np.int32)
    on_line = is_abs[plane.incidence]
    meets = on_line.sum(axis=1)
    bad = np.flatnonzero((meets != 1) & (meets != q + 1))
    if len(bad):
        i = int(bad[0])
        raise InvariantViolation(f"line {i} meets the unital in {int(meets[i])} points")
    tangents = np.flatnonzero(meets == 1).astype(np.int32)
    secants = np.flatnonzero(meets == q + 1).astype(np.int32)
    secant_points = plane.incidence[secants][on_line[secants]].reshape(len(secants), q + 1)
    tangent_points = plane.incidence[tangents][on_line[tangents]]
    u = Unital(q, point_ids, tangents, secants, secant_points, tangent_points)

    expected = {
        "points": (len(point_ids), q**3 + 1),
        "tangents": (len(tangents), q**3 + 1),
        "secants": (len(secants), q**2 * (q**2 - q + 1)),
    }
    for name, (got, want) in expected.items():
        if got != want:
            raise InvariantViolation(f"unital has {got} {name}, expected {want}")
    sec_per_point = np.bincount(u.local_index(secant_points).ravel(), minlength=u.n_points)
    tan_per_point = np.bincount(u.local_index(tangent_points), minlength=u.n_points)
    if np.any(sec_per_point != q**2) or np.any(tan_per_point != 1):
        raise InvariantViolation("unital points must lie on q^2 secants and one tangent")
    return u


def verify_design(u: Unital) -> Report:
    """Every pair of unital points on exactly one secant; q^2 secants and one tangent per point."""
    q = u.q
    rep = Report(f"unital design q={q}")
    blocks = u.blocks
    v = u.n_points
    cover = np.zeros((v, v), dtype=np.int32)
    for i, j in combinations(range(blocks.shape[1]), 2):
        np.add.at(cover, (blocks[:, i], blocks[:, j]), 1)
    cover = cover + cover.T
    np.fill_diagonal(cover, 1)
    wrong = np.argwhere(cover != 1)
    detail = {"pairs": comb(v, 2), "block_pairs": len(blocks) * comb(blocks.shape[1], 2)}
    if len(wrong):
        a, b = (int(t) for t in wrong[0])
        key = "uncovered_pair" if cover[a, b] == 0 else "overcovered_pair"
        detail[key] = (int(u.point_ids[a]), int(u.point_ids[b]))
    rep.add("pair_coverage", not len(wrong), **detail)

    sec = np.bincount(blocks.ravel(), minlength=v)
    tan = np.bincount(u.local_index(u.tangent_points), minlength=v)
    bad = np.flatnonzero(sec != q**2)
    rep.add("secants_per_point", not len(bad), expected=q**2,
            **({"counterexample": int(u.point_ids[bad[0]]), "got": int(sec[bad[0]])} if len(bad) else {}))
    bad = np.flatnonzero(tan != 1)
    rep.add("tangents_per_point", not len(bad),
            **({"counterexample": int(u.point_ids[bad[0]]), "got": int(tan[bad[0]])} if len(bad) else {}))
    rep.add("tangent_count_equals_points", len(u.tangents) == v, tangents=len(u.tangents), points=v)
    return rep


# -- O'Nan configurations -----------------------------------------------------

@dataclass(frozen=True)
class OnanWitness:
    """Four blocks meeting pairwise in six distinct points."""

    lines: tuple[int, int, int, int]
    points: tuple[int, int, int, int, int, int]

    def incidence_ok(self, blocks) -> bool:
        sets = [set(map(int, blocks[l])) for l in self.lines]
        per_line = all(len(s & set(self.points)) == 3 for s in sets)
        per_point = all(sum(p in s for s in sets) == 2 for p in self.points)
        return per_line and per_point


class _LineSystem:
    """Blocks over points ``0..v-1`` with meet and join lookups."""

    def __init__(self, blocks):
        self.blocks = [tuple(sorted(int(x) for x in b)) for b in blocks]
        v = 1 + max(max(b) for b in self.blocks)
        L = len(self.blocks)
        self.v = v
        self.join = np.full((v, v), -1, dtype=np.int32)
        self.meet = np.full((L, L), -1, dtype=np.int32)
        through: list[list[int]] = [[] for _ in range(v)]
        for i, b in enumerate(self.blocks):
            for x in b:
                through[x].append(i)
            for x, y in combinations(b, 2):
                if self.join[x, y] != -1:
                    raise ValueError(f"points {x},{y} lie on two blocks; not a linear space")
                self.join[x, y] = self.join[y, x] = i
        for x, ls in enumerate(through):
            for i, j in combinations(ls, 2):
                self.meet[i, j] = self.meet[j, i] = x
        self.neighbors = [np.flatnonzero(self.meet[i] >= 0) for i in range(L)]


def _blocks_of(system) -> list:
    if isinstance(system, Unital):
        return system.blocks.tolist()
    return [list(b) for b in system]


def find_onan_configurations(
    system: Unital | Sequence[Sequence[int]],
    mode: str = "pruned",
    budget: int = DEFAULT_ONAN_BUDGET,
    frontier_cap: int | None = None,
) -> list[OnanWitness]:
    """Search a linear space (a unital's secants, or any block list) for Pasch configurations.

    ``mode="exhaustive"`` examines every 4-subset of blocks and is refused
    when there are more than ``budget`` of them.  ``mode="pruned"`` grows
    non-concurrent triangles of blocks in increasing id order and completes
    each one through the unique block joining a point of the first side to
    a point of the second; ``frontier_cap`` bounds the number of triangles
    examined (``None`` = complete search).  For a unital the ids in the
    witnesses are secant indices and unital-local point indices.
    """
    ls = _LineSystem(_blocks_of(system))
    if mode == "exhaustive":
        n_quads = comb(len(ls.blocks), 4)
        if n_quads > budget:
            raise BudgetExceeded(f"C({len(ls.blocks)},4) = {n_quads} quadruples exceed budget {budget}")
        found = _exhaustive(ls)
    elif mode == "pruned":
        found = _triangle_first(ls, frontier_cap)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return sorted(found, key=lambda w: (w.lines, w.points))


def _exhaustive(ls: _LineSystem) -> list[OnanWitness]:
    meet = ls.meet.tolist()
    L = len(ls.blocks)
    out = []
    for a in range(L):
        ma = meet[a]
        for b in range(a + 1, L):
            ab = ma[b]
            if ab < 0:
                continue
            mb = meet[b]
            for c in range(b + 1, L):
                ac, bc = ma[c], mb[c]
                if ac < 0 or bc < 0 or len({ab, ac, bc}) < 3:
                    continue
                mc = meet[c]
                for d in range(c + 1, L):
                    pts = (ab, ac, bc, ma[d], mb[d], mc[d])
                    if min(pts) >= 0 and len(set(pts)) == 6:
                        out.append(OnanWitness((a, b, c, d), tuple(sorted(pts))))
    return out


def _triangle_first(ls: _LineSystem, frontier_cap: int | None) -> list[OnanWitness]:
    meet, join = ls.meet, ls.join
    out = []
    triangles = 0
    for a in range(len(ls.blocks)):
        nb_a = ls.neighbors[a]
        for b in nb_a[nb_a > a]:
            ab = meet[a, b]
            for c in np.intersect1d(nb_a, ls.neighbors[b], assume_unique=True):
                if c <= b:
                    continue
                ac, bc = meet[a, c], meet[b, c]
                if ac == ab or bc == ab or bc == ac:
                    continue
                if frontier_cap is not None and triangles >= frontier_cap:
                    log.info("O'Nan frontier cap %d reached", frontier_cap)
                    return out
                triangles += 1
                xs = [x for x in ls.blocks[a] if x != ab and x != ac]
                ys = [y for y in ls.blocks[b] if y != ab and y != bc]
                for x in xs:
                    for y in ys:
                        d = join[x, y]
                        if d <= c:
                            continue
                        z = meet[c, d]
                        if z < 0 or z in (ac, bc, x, y):
                            continue
                        pts = (ab, ac, bc, x, y, z)
                        if len(set(pts)) == 6:
                            out.append(OnanWitness((a, int(b), int(c), int(d)), tuple(sorted(int(p) for p in pts))))
    log.info("O'Nan search examined %d triangles", triangles)
    return out
