"""The secant graph H_q, its clique family, and the structural checks on it.

Vertices are secant indices ``0..n-1`` (row order of ``Unital.secants``).
Clique ``c`` is the set of secants through unital point ``c`` (unital-local
index), so ``vertex_cliques[v]`` is simply the list of unital points on
secant ``v``.  Adjacency is never stored as an edge list: two secants are
adjacent iff their clique rows share an entry, and every edge lies in exactly
one clique because two secants meet in at most one point.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Iterator, TextIO

import numpy as np
from scipy import sparse

from .errors import EmptyX, InvariantViolation
from .graphs import Graph, bits, find_k4s
from .reports import Report
from .rng import substream
from .unital import Unital

BITSET_CAP = 8000
K4_CAP = 250
DEGREE_CHUNK = 1024


class SecantGraph:
    def __init__(self, q: int, vertex_cliques: np.ndarray, unital: Unital | None = None, plane=None):
        self.q = q
        self.vertex_cliques = np.asarray(vertex_cliques, dtype=np.int32)
        self.n = len(self.vertex_cliques)
        self.n_cliques = int(self.vertex_cliques.max()) + 1 if self.n else 0
        self.unital = unital
        self.plane = plane
        flat = self.vertex_cliques.ravel()
        order = np.argsort(flat, kind="stable")
        sizes = np.bincount(flat, minlength=self.n_cliques)
        owners = (order // self.vertex_cliques.shape[1]).astype(np.int32)
        self.clique_sizes = sizes
        bounds = np.concatenate([[0], np.cumsum(sizes)])
        if np.all(sizes == sizes[0]):
            self.cliques = owners.reshape(self.n_cliques, int(sizes[0]))
        else:
            self.cliques = [owners[bounds[c] : bounds[c + 1]] for c in range(self.n_cliques)]
        # index of each vertex inside each of its cliques, aligned with vertex_cliques
        pos = np.empty(len(flat), dtype=np.int32)
        pos[order] = np.arange(len(flat)) - bounds[flat[order]]
        self.vertex_positions = pos.reshape(self.vertex_cliques.shape)
        self._adj: list[int] | None = None

    @classmethod
    def from_unital(cls, u: Unital, plane=None) -> "SecantGraph":
        return cls(u.q, u.blocks, unital=u, plane=plane)

    # -- adjacency ------------------------------------------------------------

    @property
    def has_bitsets(self) -> bool:
        return self._adj is not None or self.n <= BITSET_CAP

    @property
    def adj(self) -> list[int]:
        """Bitset adjacency rows (built from the cliques on first use)."""
        if self._adj is None:
            if self.n > BITSET_CAP:
                raise MemoryError(f"bitset adjacency disabled above n={BITSET_CAP}")
            masks = []
            for c in range(self.n_cliques):
                m = 0
                for v in self.clique(c):
                    m |= 1 << int(v)
                masks.append(m)
            adj = []
            for v, row in enumerate(self.vertex_cliques.tolist()):
                m = 0
                for c in row:
                    m |= masks[c]
                adj.append(m & ~(1 << v))
            self._adj = adj
        return self._adj

    def clique(self, c: int) -> np.ndarray:
        return self.cliques[c]

    def neighbors(self, v: int) -> np.ndarray:
        if self._adj is not None:
            return np.fromiter(bits(self._adj[v]), dtype=np.int64)
        members = np.concatenate([self.clique(c) for c in self.vertex_cliques[v]])
        nb = np.unique(members)
        return nb[nb != v]

    def edge_clique(self, u: int, v: int) -> int | None:
        """The clique owning edge ``{u, v}``, or None if they are not adjacent."""
        if u == v:
            return None
        common = np.intersect1d(self.vertex_cliques[u], self.vertex_cliques[v])
        if len(common) > 1:
            raise InvariantViolation(f"secants {u},{v} share {len(common)} points")
        return int(common[0]) if len(common) else None

    def has_edge(self, u: int, v: int) -> bool:
        if self._adj is not None:
            return bool(self._adj[u] >> v & 1)
        return self.edge_clique(u, v) is not None

    def degrees(self) -> np.ndarray:
        """Exact degree of every vertex, by counting distinct neighbours."""
        if self.has_bitsets:
            return np.array([a.bit_count() for a in self.adj], dtype=np.int64)
        out = np.empty(self.n, dtype=np.int64)
        if isinstance(self.cliques, list):
            for v in range(self.n):
                out[v] = len(self.neighbors(v))
            return out
        for start in range(0, self.n, DEGREE_CHUNK):
            rows = self.vertex_cliques[start : start + DEGREE_CHUNK]
            members = self.cliques[rows].reshape(len(rows), -1)
            members.sort(axis=1)
            distinct = 1 + (np.diff(members, axis=1) != 0).sum(axis=1)
            out[start : start + len(rows)] = distinct - 1
        return out

    def clique_degrees(self) -> np.ndarray:
        """Degrees as sum of (|C| - 1) over cliques through each vertex.

        Exact whenever distinct cliques meet in at most one vertex, which
        :meth:`clique_intersections` checks.
        """
        return (self.clique_sizes[self.vertex_cliques] - 1).sum(axis=1)

    def incidence_matrix(self) -> sparse.csr_matrix:
        rows = np.repeat(np.arange(self.n), self.vertex_cliques.shape[1])
        cols = self.vertex_cliques.ravel()
        data = np.ones(len(rows), dtype=np.int32)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n_cliques))

    def clique_intersections(self) -> np.ndarray:
        """Dense matrix of |C_i ∩ C_j| for all pairs of cliques."""
        m = self.incidence_matrix()
        return (m.T @ m).toarray()

    @property
    def edge_count(self) -> int:
        if self._adj is not None:
            return sum(a.bit_count() for a in self._adj) // 2
        return int(sum(comb(int(s), 2) for s in self.clique_sizes))

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``u < v`` in lexicographic order."""
        for u in range(self.n):
            nb = self.neighbors(u)
            for v in nb[nb > u]:
                yield u, int(v)

    def to_graph(self) -> Graph:
        return Graph(self.n, list(self.adj))

    def without_clique_edges(self, c: int) -> "SecantGraph":
        """Copy whose adjacency lacks the edges of clique ``c`` (clique family unchanged)."""
        g = SecantGraph(self.q, self.vertex_cliques, self.unital, self.plane)
        adj = list(self.adj)
        members = [int(v) for v in self.clique(c)]
        mask = 0
        for v in members:
            mask |= 1 << v
        for v in members:
            adj[v] &= ~mask
        g._adj = adj
        return g

    # -- exports ----------------------------------------------------------------

    def write_edges(self, fh: TextIO) -> None:
        fh.write(f"p edge {self.n} {self.edge_count}\n")
        for u, v in self.edges():
            fh.write(f"{u} {v}\n")

    def write_cliques(self, fh: TextIO) -> None:
        for c in range(self.n_cliques):
            fh.write(f"K {c} : {' '.join(map(str, self.clique(c)))}\n")


def build_secant_graph(u: Unital, plane=None) -> SecantGraph:
    g = SecantGraph.from_unital(u, plane)
    q = u.q
    if g.n != q**2 * (q**2 - q + 1):
        raise InvariantViolation(f"secant graph has {g.n} vertices")
    if g.n_cliques != q**3 + 1 or np.any(g.clique_sizes != q**2):
        raise InvariantViolation("clique family must consist of q^3+1 cliques of size q^2")
    return g


def read_cliques(fh: TextIO) -> list[list[int]]:
    out = []
    for line in fh:
        if not line.strip():
            continue
        head, _, rest = line.partition(":")
        tag, cid = head.split()
        if tag != "K" or int(cid) != len(out):
            raise ValueError(f"bad clique line {line!r}")
        out.append([int(x) for x in rest.split()])
    return out


def read_unital_dump(fh: TextIO) -> tuple[int, int, np.ndarray]:
    """Parse a unital dump; returns ``(q, n_points, secant_points)``."""
    header = fh.readline().split()
    if len(header) != 4 or header[0] != "U":
        raise ValueError("unital dump must start with 'U <q> <n_points> <n_secants>'")
    q, n_points, n_sec = map(int, header[1:])
    rows = []
    for line in fh:
        if not line.strip():
            continue
        head, _, rest = line.partition(":")
        tag, sid = head.split()
        if tag != "S" or int(sid) != len(rows):
            raise ValueError(f"bad secant line {line!r}")
        rows.append([int(x) for x in rest.split()])
    if len(rows) != n_sec:
        raise ValueError(f"expected {n_sec} secants, read {len(rows)}")
    return q, n_points, np.array(rows, dtype=np.int64)


def graph_from_unital_dump(fh: TextIO) -> SecantGraph:
    q, _, secant_points = read_unital_dump(fh)
    ids = np.unique(secant_points)
    return SecantGraph(q, np.searchsorted(ids, secant_points))


# -- verification -------------------------------------------------------------

def _first(mask_idx) -> dict:
    return {"counterexample": int(mask_idx[0])} if len(mask_idx) else {}


def verify_base_properties(g: SecantGraph, k4_cap: int = K4_CAP, definition_pairs: int = 20000,
                           seed: int = 0, degree_method: str = "auto") -> Report:
    """Check the basic counts of H_q and, for small n, the K4 property via a full census.

    ``degree_method="clique"`` derives degrees from clique sizes (exact once
    pairwise clique intersections are verified); ``"auto"`` counts distinct
    neighbours directly unless that is too expensive.
    """
    q = g.q
    n_exp = q**2 * (q**2 - q + 1)
    d_exp = (q + 1) * (q**2 - 1)
    rep = Report(f"H_q base properties q={q}")

    inter = g.clique_intersections()
    off = inter[~np.eye(len(inter), dtype=bool)]
    sizes = np.diag(inter)
    bad_pair = np.argwhere((inter != 1) & ~np.eye(len(inter), dtype=bool))

    method = degree_method
    if method == "auto":
        method = "direct" if g.has_bitsets else "clique"
    if method == "clique" and g._adj is None:
        deg = g.clique_degrees()
        exact = bool(np.all(off <= 1))
    else:
        deg = g.degrees()
        exact = True
    bad = np.flatnonzero(deg != d_exp)
    rep.add("i_vertex_count", g.n == n_exp, n=g.n, expected=n_exp)
    rep.add("i_regular", exact and not len(bad), degree=d_exp, method=method,
            min_degree=int(deg.min()), max_degree=int(deg.max()), **_first(bad))

    rep.add("ii_clique_count", g.n_cliques == q**3 + 1, cliques=g.n_cliques, expected=q**3 + 1)
    bad = np.flatnonzero(sizes != q**2)
    rep.add("ii_clique_sizes", not len(bad), expected=q**2, **_first(bad))
    rep.add("ii_pairwise_intersection_one", not len(bad_pair),
            **({"counterexample": bad_pair[0].tolist(), "size": int(inter[tuple(bad_pair[0])])} if len(bad_pair) else {}))
    per_vertex = np.bincount(np.repeat(np.arange(g.n), g.vertex_cliques.shape[1]), minlength=g.n)
    distinct = np.array([len(set(r)) for r in g.vertex_cliques.tolist()]) if g.n <= 20_000 else per_vertex
    bad = np.flatnonzero((per_vertex != q + 1) | (distinct != q + 1))
    rep.add("iii_cliques_per_vertex", not len(bad), expected=q + 1, **_first(bad))

    e_cliques = int(sum(comb(int(s), 2) for s in g.clique_sizes))
    e_deg = int(deg.sum()) // 2
    rep.add("edge_count", e_deg == n_exp * d_exp // 2 and e_cliques == e_deg,
            edges=e_deg, clique_edge_sum=e_cliques, expected=n_exp * d_exp // 2)

    if g.unital is not None and g.plane is not None and definition_pairs:
        rep.add(**_definition_check(g, definition_pairs, seed))

    if g.n <= k4_cap:
        k4s = find_k4s(g.adj)
        offenders = [k for k in k4s if not _has_three_in_clique(g, k)]
        rep.add("iv_k4_three_in_clique", not offenders, k4_count=len(k4s),
                **({"counterexample": offenders[0]} if offenders else {}))
    else:
        rep.info["iv_skipped"] = f"n={g.n} exceeds K4 census cap {k4_cap}"
    return rep


def _has_three_in_clique(g: SecantGraph, k4) -> bool:
    counts = Counter(int(c) for v in k4 for c in g.vertex_cliques[v])
    return max(counts.values()) >= 3


def _definition_check(g: SecantGraph, pairs: int, seed: int) -> dict:
    """Adjacency versus the geometric definition: secants meet in a unital point."""
    u, plane = g.unital, g.plane
    is_unital = np.zeros(plane.size, dtype=bool)
    is_unital[u.point_ids] = True
    total = comb(g.n, 2)
    if total <= pairs:
        cand = combinations(range(g.n), 2)
        mode = "exhaustive"
    else:
        rng = substream(seed, "secant_graph.definition")
        a = rng.integers(0, g.n, size=pairs)
        b = rng.integers(0, g.n - 1, size=pairs)
        b = b + (b >= a)
        cand = zip(a.tolist(), b.tolist())
        mode = "sampled"
    checked = 0
    for x, y in cand:
        p = plane.meet(int(u.secants[x]), int(u.secants[y]))
        if bool(is_unital[p]) != g.has_edge(x, y):
            return dict(name="adjacency_definition", passed=False, mode=mode, counterexample=(x, y))
        checked += 1
    return dict(name="adjacency_definition", passed=True, mode=mode, pairs=checked)


def srg_parameters(q: int) -> dict:
    return {
        "n": q**2 * (q**2 - q + 1),
        "d": (q + 1) * (q**2 - 1),
        "lambda": 2 * q**2 - 2,
        "mu": (q + 1) ** 2,
    }


def srg_check(g: SecantGraph, pair_budget: int = 10**6, samples: int = 10**5, seed: int = 0) -> Report:
    """Common-neighbour counts for all pairs, or a deterministic sample of pairs."""
    q = g.q
    par = srg_parameters(q)
    lam, mu, d, n = par["lambda"], par["mu"], par["d"], par["n"]
    rep = Report(f"strongly regular check q={q}", info=dict(par))
    rep.add("feasibility_identity", d * (d - lam - 1) == (n - d - 1) * mu,
            lhs=d * (d - lam - 1), rhs=(n - d - 1) * mu)

    adj = g.adj
    total = comb(g.n, 2)
    if total <= pair_budget:
        mode = "exhaustive"
        pairs: Iterator = combinations(range(g.n), 2)
    else:
        mode = "sampled"
        rng = substream(seed, "secant_graph.srg")
        a = rng.integers(0, g.n, size=samples)
        b = rng.integers(0, g.n - 1, size=samples)
        b = b + (b >= a)
        # add as many adjacent pairs: a random neighbour of a random vertex
        # each neighbour lies in exactly one clique through c, all cliques of equal size
        c = rng.integers(0, g.n, size=samples)
        which = g.vertex_cliques[c, rng.integers(0, q + 1, size=samples)]
        slot = rng.integers(0, q**2 - 1, size=samples)
        members = g.cliques[which]
        own = np.argmax(members == c[:, None], axis=1)
        slot = slot + (slot >= own)
        nb = members[np.arange(samples), slot]
        pairs = iter(list(zip(a.tolist(), b.tolist())) + list(zip(c.tolist(), nb.tolist())))

    counts = {"adjacent": 0, "non_adjacent": 0}
    violation = None
    for x, y in pairs:
        common = (adj[x] & adj[y]).bit_count()
        if adj[x] >> y & 1:
            counts["adjacent"] += 1
            if common != lam:
                violation = (x, y, common, "adjacent")
                break
        else:
            counts["non_adjacent"] += 1
            if common != mu:
                violation = (x, y, common, "non_adjacent")
                break
    rep.add("common_neighbours", violation is None, mode=mode, **counts,
            **({"counterexample": violation} if violation else {}))
    return rep


# -- clique decomposition -----------------------------------------------------------

@dataclass
class CliqueDecomposition:
    X: np.ndarray
    S: list[tuple[int, ...]]
    M: list[tuple[int, ...]]
    L: list[tuple[int, ...]]
    small_max: float
    medium_max: float
    v_S: int
    v_M: int
    v_L: int
    e_S: int
    e_M: int
    e_L: int
    v_T: int
    singletons: int
    trace_bounds: dict = field(default_factory=dict)
    edge_dichotomy: dict | None = None

    @property
    def k(self) -> int:
        return len(self.X)


def clique_decomposition(g: SecantGraph, X, m_override: float | None = None,
                         log: Callable[[float], float] = math.log,
                         constants: tuple[float, float] | None = None) -> CliqueDecomposition:
    """Split the traces ``X ∩ C`` (size >= 2) into small, medium and large cliques.

    Thresholds use ``k = |X|``: small traces have size at most
    ``sqrt(2k)/log(n)``, medium at most ``sqrt(2k)``.  The two inequalities
    ``v(L) <= 2k`` and ``v(S ⊔ M) >= (q-1)k - q^3 - 1`` are always
    evaluated.  With ``m_override`` the two edge quantities of the
    small/medium dichotomy are reported against ``m^2/(64q)`` and
    ``q m^(3/2) / (16 log^2 n)``; ``constants`` replaces those two divisors
    (64, 16).
    """
    X = np.unique(np.asarray(list(X), dtype=np.int64))
    k = len(X)
    if k == 0:
        raise EmptyX("X must be non-empty")
    q, n = g.q, g.n
    in_x = np.zeros(n, dtype=bool)
    in_x[X] = True
    small_max = math.sqrt(2 * k) / log(n)
    medium_max = math.sqrt(2 * k)
    S, M, L = [], [], []
    singletons = 0
    for c in range(g.n_cliques):
        members = g.clique(c)
        trace = members[in_x[members]]
        size = len(trace)
        if size < 2:
            singletons += size
            continue
        t = tuple(int(v) for v in trace)
        if size <= small_max:
            S.append(t)
        elif size <= medium_max:
            M.append(t)
        else:
            L.append(t)

    def v(U):
        return sum(len(t) for t in U)

    def e(U):
        return sum(comb(len(t), 2) for t in U)

    v_S, v_M, v_L = v(S), v(M), v(L)
    dec = CliqueDecomposition(
        X=X, S=S, M=M, L=L, small_max=small_max, medium_max=medium_max,
        v_S=v_S, v_M=v_M, v_L=v_L, e_S=e(S), e_M=e(M), e_L=e(L),
        v_T=v_S + v_M + v_L, singletons=singletons,
    )
    sm_bound = (q - 1) * k - q**3 - 1
    dec.trace_bounds = {
        "v_L": v_L, "v_L_bound": 2 * k, "v_L_ok": v_L <= 2 * k,
        "v_SM": v_S + v_M, "v_SM_bound": sm_bound, "v_SM_ok": v_S + v_M >= sm_bound,
        "v_T_bound": (q + 1) * k - q**3 - 1, "v_T_ok": dec.v_T >= (q + 1) * k - q**3 - 1,
    }
    if m_override is not None:
        m = float(m_override)
        c_small, c_medium = constants if constants is not None else (64.0, 16.0)
        small_target = m * m / (c_small * q)
        medium_target = q * m**1.5 / (c_medium * log(n) ** 2)
        dec.edge_dichotomy = {
            "m": m, "e_S": dec.e_S, "e_S_target": small_target, "small_case": dec.e_S >= small_target,
            "e_M": dec.e_M, "e_M_target": medium_target, "medium_case": dec.e_M >= medium_target,
            "dichotomy_holds": dec.e_S >= small_target or dec.e_M >= medium_target,
            "asserted": constants is not None,
        }
    return dec
