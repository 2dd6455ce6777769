"""Small simple graphs as Python-int bitsets, plus the edge-list file format.

Edge files are DIMACS-like: a header ``p edge <n> <m>`` followed by one
``u v`` line per edge, 0-based, ``u < v``, sorted lexicographically.  The
canonical bytes of that file define the edge digest used in certificates.
"""
from __future__ import annotations

import hashlib
import io
from typing import Iterable, Iterator, TextIO


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: list[int] | None = None):
        self.n = n
        self.adj = adj if adj is not None else [0] * n

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loops are not allowed")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                yield u, u + 1 + v

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [(full ^ a) & ~(1 << v) for v, a in enumerate(self.adj)])

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph relabelled ``0..k-1`` in the given order."""
        vs = list(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        g = Graph(len(vs))
        for i, v in enumerate(vs):
            m = 0
            for w in bits(self.adj[v]):
                j = pos.get(w)
                if j is not None:
                    m |= 1 << j
            g.adj[i] = m
        return g

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = 0
        for v in vs:
            mask |= 1 << v
        return all(not (self.adj[v] & mask) for v in vs)

    def copy(self) -> "Graph":
        return Graph(self.n, list(self.adj))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def find_k4s(adj: list[int], limit: int | None = None) -> list[tuple[int, int, int, int]]:
    """All K4s with increasing vertex ids, by extending triangles through common neighbours."""
    out = []
    for a, na in enumerate(adj):
        higher_a = na >> (a + 1) << (a + 1)
        for b in bits(higher_a):
            cab = higher_a & adj[b] & ~((1 << (b + 1)) - 1)
            for c in bits(cab):
                for d in bits(cab & adj[c] & ~((1 << (c + 1)) - 1)):
                    out.append((a, b, c, d))
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def count_triangles(adj: list[int]) -> int:
    total = 0
    for a, na in enumerate(adj):
        higher = na >> (a + 1) << (a + 1)
        for b in bits(higher):
            total += (higher & adj[b] & ~((1 << (b + 1)) - 1)).bit_count()
    return total


# -- edge files -----------------------------------------------------------------

def write_edges(fh: TextIO, n: int, edges: Iterable[tuple[int, int]], m: int | None = None) -> None:
    edges = sorted((min(u, v), max(u, v)) for u, v in edges) if m is None else edges
    if m is None:
        m = len(edges)
    fh.write(f"p edge {n} {m}\n")
    for u, v in edges:
        fh.write(f"{u} {v}\n")


def read_edges(fh: TextIO) -> tuple[int, list[tuple[int, int]]]:
    n = m = None
    edges = []
    for lineno, line in enumerate(fh, 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise ValueError(f"line {lineno}: bad header {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise ValueError("edge file lacks a 'p edge n m' header")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"line {lineno}: bad edge {u} {v}")
        edges.append((u, v))
    if n is None:
        raise ValueError("empty edge file")
    if m != len(edges):
        raise ValueError(f"header announces {m} edges, file has {len(edges)}")
    return n, edges


def edges_text(n: int, edges: Iterable[tuple[int, int]]) -> str:
    buf = io.StringIO()
    write_edges(buf, n, edges)
    return buf.getvalue()


def edge_digest(n: int, edges: Iterable[tuple[int, int]]) -> str:
    return hashlib.sha256(edges_text(n, edges).encode()).hexdigest()


def graph_digest(g: Graph) -> str:
    return edge_digest(g.n, g.edges())


def write_graph(path, g: Graph) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_edges(fh, g.n, list(g.edges()))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        n, edges = read_edges(fh)
    return Graph.from_edges(n, edges)
