"""H_q*: every clique of H_q replaced by a random complete bipartite graph.

The graph is held as the base secant graph plus one side mask per clique.
Because each edge of H_q lies in exactly one clique, edge membership is a
single mask comparison; an explicit edge set is only built for export or
when a graph is imported from an edge file for re-verification.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import SizeExceedsN
from .graphs import Graph, bits, find_k4s
from .reports import Report
from .rng import substream
from .secant_graph import SecantGraph

K4_CAP = 250
STRUCTURAL_CHUNK = 256
RANDOMIZE_LABEL = "k4free.randomize"


class K4FreeGraph:
    def __init__(self, base: SecantGraph, seed: int, masks: np.ndarray,
                 edge_set: Iterable[tuple[int, int]] | None = None):
        self.base = base
        self.seed = seed
        self.masks = np.asarray(masks, dtype=np.uint8)
        self.edge_set = None if edge_set is None else frozenset((min(u, v), max(u, v)) for u, v in edge_set)
        self.n = base.n
        self._adj: list[int] | None = None
        # side of each vertex in each of its cliques, aligned with base.vertex_cliques
        self.vertex_sides = self.masks[base.vertex_cliques, base.vertex_positions]

    @property
    def q(self) -> int:
        return self.base.q

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "K4FreeGraph":
        """Same masks, but adjacency taken from an explicit edge list."""
        return K4FreeGraph(self.base, self.seed, self.masks, edge_set=edges)

    # -- adjacency ------------------------------------------------------------------

    def side_counts(self) -> np.ndarray:
        """``|B_T|`` for every clique (``|A_T| = q^2 - |B_T|``)."""
        return self.masks.sum(axis=1, dtype=np.int64)

    @property
    def edge_count(self) -> int:
        if self.edge_set is not None:
            return len(self.edge_set)
        b = self.side_counts()
        return int((b * (self.masks.shape[1] - b)).sum())

    def has_edge(self, u: int, v: int) -> bool:
        u, v = min(u, v), max(u, v)
        if self.edge_set is not None:
            return (u, v) in self.edge_set
        vc = self.base.vertex_cliques
        common = np.intersect1d(vc[u], vc[v])
        if not len(common):
            return False
        c = common[0]
        iu = int(np.flatnonzero(vc[u] == c)[0])
        iv = int(np.flatnonzero(vc[v] == c)[0])
        return bool(self.vertex_sides[u, iu] != self.vertex_sides[v, iv])

    @property
    def adj(self) -> list[int]:
        if self._adj is None:
            if self.edge_set is not None:
                adj = [0] * self.n
                for u, v in self.edge_set:
                    adj[u] |= 1 << v
                    adj[v] |= 1 << u
            else:
                sides = []
                for c in range(self.base.n_cliques):
                    a = b = 0
                    for v, s in zip(self.base.clique(c).tolist(), self.masks[c].tolist()):
                        if s:
                            b |= 1 << v
                        else:
                            a |= 1 << v
                    sides.append((a, b))
                adj = []
                for v in range(self.n):
                    m = 0
                    for c, s in zip(self.base.vertex_cliques[v].tolist(), self.vertex_sides[v].tolist()):
                        m |= sides[c][0] if s else sides[c][1]
                    adj.append(m)
            self._adj = adj
        return self._adj

    def neighbors(self, v: int) -> np.ndarray:
        if self._adj is not None or self.edge_set is not None:
            return np.fromiter(bits(self.adj[v]), dtype=np.int64)
        parts = []
        for c, s in zip(self.base.vertex_cliques[v], self.vertex_sides[v]):
            parts.append(self.base.clique(c)[self.masks[c] != s])
        return np.sort(np.concatenate(parts))

    def edges(self) -> Iterator[tuple[int, int]]:
        if self.edge_set is not None:
            yield from sorted(self.edge_set)
            return
        for u in range(self.n):
            nb = self.neighbors(u)
            for v in nb[nb > u]:
                yield u, int(v)

    def to_graph(self) -> Graph:
        return Graph(self.n, list(self.adj))

    def clique_block(self, c: int) -> np.ndarray:
        """Adjacency among the members of clique ``c`` as a boolean matrix."""
        members = self.base.clique(c)
        if self.edge_set is None:
            m = self.masks[c].astype(bool)
            return m[:, None] != m[None, :]
        k = len(members)
        block = np.zeros((k, k), dtype=bool)
        idx = {int(v): i for i, v in enumerate(members)}
        for i, u in enumerate(members.tolist()):
            for w in bits(self.adj[u]):
                j = idx.get(w)
                if j is not None:
                    block[i, j] = True
        return block

    # -- export -------------------------------------------------------------------------

    def masks_digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.masks).tobytes()).hexdigest()

    def sidecar(self, modulus: Sequence[int] | None = None) -> dict:
        q = self.q
        return {
            "q": q,
            "seed": self.seed,
            "modulus": list(modulus) if modulus is not None else None,
            "counts": {
                "n": self.n,
                "edges": self.edge_count,
                "cliques": int(self.base.n_cliques),
                "base_edges": int(self.base.edge_count),
            },
            "masks_digest": self.masks_digest(),
        }

    def write_edges(self, fh) -> None:
        fh.write(f"p edge {self.n} {self.edge_count}\n")
        for u, v in self.edges():
            fh.write(f"{u} {v}\n")


def randomize(g: SecantGraph, seed: int) -> K4FreeGraph:
    """Independent fair side bits for every clique member, one substream per clique."""
    masks = np.empty((g.n_cliques, int(g.clique_sizes.max())), dtype=np.uint8)
    for c in range(g.n_cliques):
        k = len(g.clique(c))
        masks[c, :k] = substream(seed, RANDOMIZE_LABEL, c).integers(0, 2, size=k, dtype=np.uint8)
    return K4FreeGraph(g, seed, masks)


def verify_k4_free(h: K4FreeGraph, mode: str = "structural", cap: int = K4_CAP) -> Report:
    """``structural``: each clique induces the complete bipartite graph of its mask and
    no edge leaves the clique structure.  ``exhaustive``: direct K4 census (n <= cap)."""
    q = h.q
    rep = Report(f"H_q* K4-freeness q={q} seed={h.seed} mode={mode}")
    if mode == "structural":
        _structural(h, rep)
    elif mode == "exhaustive":
        if h.n > cap:
            rep.add("exhaustive_k4", False, reason=f"n={h.n} exceeds cap {cap}")
            return rep
        k4s = find_k4s(h.adj, limit=1)
        detail = {}
        if k4s:
            k = k4s[0]
            owners = {f"{a}-{b}": h.base.edge_clique(a, b) for i, a in enumerate(k) for b in k[i + 1:]}
            detail = {"k4": k, "owning_cliques": owners}
        rep.add("exhaustive_k4", not k4s, **detail)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return rep


def _structural(h: K4FreeGraph, rep: Report) -> None:
    base = h.base
    sizes_ok = all(h.masks.shape[1] >= len(base.clique(c)) for c in range(base.n_cliques))
    rep.add("mask_lengths", sizes_ok and h.masks.shape[0] == base.n_cliques)
    bad = None
    if h.edge_set is None and not isinstance(base.cliques, list):
        # mask-derived adjacency is complete bipartite per clique; check it blockwise
        for start in range(0, base.n_cliques, STRUCTURAL_CHUNK):
            m = h.masks[start : start + STRUCTURAL_CHUNK].astype(bool)
            block = m[:, :, None] != m[:, None, :]
            col = block[:, 0, :]
            expected = col[:, :, None] != col[:, None, :]
            diff = np.flatnonzero(np.any(block != expected, axis=(1, 2)))
            if len(diff):
                bad = start + int(diff[0])
                break
    else:
        for c in range(base.n_cliques):
            block = h.clique_block(c)
            col = block[0].copy()
            col[0] = False
            expected = col[:, None] != col[None, :]
            mask = h.masks[c, : len(block)].astype(bool)
            if not np.array_equal(block, expected) or not np.array_equal(col, mask != mask[0]):
                bad = c
                break
    rep.add("cliques_complete_bipartite", bad is None, **({"clique": bad} if bad is not None else {}))
    if h.edge_set is not None:
        stray = next(((u, v) for u, v in sorted(h.edge_set) if base.edge_clique(u, v) is None), None)
        rep.add("subgraph_of_base", stray is None, **({"edge": stray} if stray else {}))
        inside = sum(int(h.clique_block(c).sum()) // 2 for c in range(base.n_cliques))
        rep.add("edges_within_cliques", inside == len(h.edge_set), within=inside, total=len(h.edge_set))


# -- density audit ---------------------------------------------------------------------

def induced_edge_counts(h: K4FreeGraph, members: np.ndarray) -> np.ndarray:
    """e(X) for each row of a boolean membership matrix (trials x n)."""
    members = np.atleast_2d(members)
    if h.edge_set is not None:
        out = []
        for row in members:
            xs = np.flatnonzero(row)
            mask = 0
            for v in xs.tolist():
                mask |= 1 << v
            out.append(sum((h.adj[v] & mask).bit_count() for v in xs.tolist()) // 2)
        return np.array(out, dtype=np.int64)
    cliques = np.asarray(h.base.cliques)
    side = h.masks.astype(bool)
    out = np.empty(len(members), dtype=np.int64)
    for i, row in enumerate(members):
        inx = row[cliques]
        b = (inx & side).sum(axis=1, dtype=np.int64)
        a = (inx & ~side).sum(axis=1, dtype=np.int64)
        out[i] = int((a * b).sum())
    return out


def edge_density_audit(h: K4FreeGraph, sizes: Sequence[int], trials: int, seed: int,
                       m_prime: float | None = None, floor: float | None = None,
                       assert_scaled: bool = True) -> Report:
    """Sample uniform vertex subsets and summarise their induced edge counts.

    Reports, per size s, the distribution of ``e(X) * 256q / s^2`` (1 means
    exactly the ``s^2/(256q)`` level), of ``e(X) * q / s^2`` and of the
    deviation ``e(X) - p * C(s, 2)`` with ``p`` the expected density of H_q*.
    When ``assert_scaled`` is set and ``m_prime``/``floor`` are given, sizes
    ``s >= m_prime`` must have every sampled ``e(X) > 0`` and
    ``e(X) * q / s^2 >= floor``.
    """
    q, n = h.q, h.n
    for s in sizes:
        if not 0 < s <= n:
            raise SizeExceedsN(f"size {s} not in 1..{n}")
    p = h.base.edge_count / 2 / comb(n, 2)
    rep = Report(f"edge density audit q={q} seed={h.seed}",
                 info={"expected_density": p, "trials": trials, "m_prime": m_prime, "floor": floor,
                       # a floor met by sampled subsets says nothing about every subset of that size
                       "scope": "sampled_subsets_only"})
    rows = {}
    for s in sizes:
        rng = substream(seed, f"k4free.audit.{s}")
        members = np.zeros((trials, n), dtype=bool)
        for t in range(trials):
            members[t, rng.choice(n, size=s, replace=False)] = True
        e = induced_edge_counts(h, members).astype(float)
        ratio256 = e * 256 * q / s**2
        ratio = e * q / s**2
        dev = e - p * comb(s, 2)
        rows[s] = {
            "e_min": float(e.min()), "e_mean": float(e.mean()), "e_max": float(e.max()),
            "ratio256_min": float(ratio256.min()), "ratio256_mean": float(ratio256.mean()),
            "ratio_min": float(ratio.min()), "ratio_mean": float(ratio.mean()),
            "ratio_quantiles": {str(k): float(np.quantile(ratio, k)) for k in (0.01, 0.05, 0.5, 0.95)},
            "deviation_min": float(dev.min()), "deviation_mean": float(dev.mean()),
        }
        if assert_scaled and m_prime is not None and floor is not None and s >= m_prime:
            rep.add(f"size_{s}_scaled_floor", e.min() > 0 and ratio.min() >= floor,
                    min_edges=float(e.min()), min_ratio=float(ratio.min()), floor=floor)
    rep.info["sizes"] = rows
    if not rep.checks:
        rep.info["asserted"] = False
    return rep


def side_count_summary(h: K4FreeGraph) -> dict:
    b = h.side_counts()
    return {"mean_B": float(b.mean()), "hist": dict(sorted(Counter(b.tolist()).items()))}

