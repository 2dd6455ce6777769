"""Independent reference implementations used only by the tests.

Nothing here imports the arithmetic or search code under test: the field is
plain polynomial arithmetic on coefficient tuples, and independent sets are
found by scanning all 2^n vertex subsets.
"""
from __future__ import annotations

import random
from itertools import combinations, product
from pathlib import Path

import networkx as nx
import numpy as np

from hermitian_ramsey.graphs import Graph

DATA = Path(__file__).parent / "data"


# -- GF(p^d) as coefficient tuples ------------------------------------------------

class PolyField:
    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.mod = list(modulus)
        self.d = len(modulus) - 1
        self.elements = list(product(range(p), repeat=self.d))

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def mul(self, x, y):
        prod = [0] * (2 * self.d - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] = (prod[i + j] + a * b) % self.p
        for k in range(len(prod) - 1, self.d - 1, -1):
            c = prod[k]
            if c:
                for j in range(self.d + 1):
                    prod[k - self.d + j] = (prod[k - self.d + j] - c * self.mod[j]) % self.p
        return tuple(prod[: self.d])

    def zero(self):
        return (0,) * self.d

    def one(self):
        return (1,) + (0,) * (self.d - 1)

    def pow(self, x, e):
        r = self.one()
        for _ in range(e):
            r = self.mul(r, x)
        return r


def code_of(coeffs, p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


def has_root_free_factorisation(f, p: int) -> bool:
    """Irreducibility by brute force: no monic factor of degree 1..deg/2 divides f."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for tail in product(range(p), repeat=k):
            g = list(tail) + [1]
            r = list(f)
            for i in range(len(r) - 1, k - 1, -1):
                c = r[i]
                if c:
                    for j in range(k + 1):
                        r[i - k + j] = (r[i - k + j] - c * g[j]) % p
            if not any(r[:k]):
                return False
    return True


# -- projective plane by brute force -------------------------------------------------

def brute_points(F: PolyField):
    """Canonical representatives: scale so the leftmost non-zero coordinate is 1."""
    pts = set()
    nonzero = [x for x in F.elements if any(x)]
    inverse = {x: next(y for y in nonzero if F.mul(x, y) == F.one()) for x in nonzero}
    for t in product(F.elements, repeat=3):
        lead = next((c for c in t if any(c)), None)
        if lead is None:
            continue
        s = inverse[lead]
        pts.add(tuple(F.mul(s, c) for c in t))
    return pts, inverse


def brute_unital(F: PolyField, q: int):
    pts, _ = brute_points(F)
    out = set()
    for t in pts:
        s = F.zero()
        for c in t:
            s = F.add(s, F.pow(c, q + 1))
        if not any(s):
            out.add(t)
    return out


# -- independent sets by subset scan -------------------------------------------------

def independent_table(g: Graph) -> np.ndarray:
    """Boolean array over all 2^n masks: is the subset independent?"""
    n = g.n
    ok = np.ones(1 << n, dtype=bool)
    for v in range(n):
        lo = 1 << v
        rest = np.arange(lo, dtype=np.int64)
        ok[lo : 2 * lo] = ok[:lo] & ((rest & (g.adj[v] & (lo - 1))) == 0)
    return ok


def popcounts(n: int) -> np.ndarray:
    c = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        lo = 1 << v
        c[lo : 2 * lo] = c[:lo] + 1
    return c


def brute_alpha(g: Graph) -> int:
    if g.n == 0:
        return 0
    ok = independent_table(g)
    return int(popcounts(g.n)[ok].max())


def brute_count(g: Graph, t: int) -> int:
    ok = independent_table(g)
    return int(np.count_nonzero(ok & (popcounts(g.n) == t)))


def independent_sets(g: Graph):
    ok = independent_table(g)
    for m in np.flatnonzero(ok).tolist():
        yield [v for v in range(g.n) if m >> v & 1]


def brute_k4_free(g: Graph) -> bool:
    return not any(all(g.has_edge(a, b) for a, b in combinations(quad, 2))
                   for quad in combinations(range(g.n), 4))


# -- graph families ------------------------------------------------------------------

def gnp(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def seeded_family(count: int = 200, max_n: int = 20, seed: int = 2024) -> list[Graph]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        p = rng.choice([0.1, 0.2, 0.3, 0.5, 0.7, 0.9])
        out.append(gnp(n, p, seed * 1000 + i))
    return out


def from_networkx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes()))}
    return Graph.from_edges(len(idx), [(idx[u], idx[v]) for u, v in h.edges()])


def connected_graphs_le8() -> list[Graph]:
    with open(DATA / "connected_le8.g6", "rb") as fh:
        return [from_networkx(nx.from_graph6_bytes(line.strip())) for line in fh if line.strip()]


# -- Steiner triple systems with Pasch configurations ---------------------------------

FANO = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


def cyclic_sts13() -> list[tuple[int, ...]]:
    blocks = set()
    for base in ((0, 1, 4), (0, 2, 7)):
        for s in range(13):
            blocks.add(tuple(sorted((b + s) % 13 for b in base)))
    return sorted(blocks)


def brute_pasch(blocks) -> list[tuple]:
    """All 4-sets of blocks covering exactly 6 points, each point twice."""
    out = []
    for quad in combinations(sorted(map(tuple, blocks)), 4):
        pts = [p for b in quad for p in b]
        if len(set(pts)) == 6 and all(pts.count(p) == 2 for p in set(pts)):
            out.append(quad)
    return out
