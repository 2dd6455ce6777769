"""Container bounds for independent sets, with exact oracles for small graphs.

All routines take a :class:`~hermitian_ramsey.graphs.Graph` (bitset rows).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

import numpy as np

from .errors import ConditionViolated, NotIndependent, Timeout, TooLarge
from .graphs import Graph, bits
from .rng import substream

ALPHA_CAP = 400
COUNT_CAP = 30


@dataclass(frozen=True)
class ContainerParams:
    r: int
    R: int
    alpha: float

    def __post_init__(self):
        if self.r < 0 or self.R < 0:
            raise ValueError("r and R must be non-negative")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")

    def condition_holds(self, n: int) -> bool:
        """``exp(-alpha r) n <= R``."""
        return math.exp(-self.alpha * self.r) * n <= self.R


@dataclass(frozen=True)
class ContainerPair:
    fingerprint: frozenset[int]
    container: frozenset[int]
    transcript: tuple = field(default=(), compare=False)


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _replay(g: Graph, in_fingerprint: Callable[[int], bool], params: ContainerParams):
    X = (1 << g.n) - 1
    S: list[int] = []
    steps = []
    while X and len(S) < params.r and X.bit_count() > params.R:
        best_v, best_d = -1, -1
        for v in bits(X):
            d = (g.adj[v] & X).bit_count()
            if d > best_d:
                best_v, best_d = v, d
        chosen = in_fingerprint(best_v)
        steps.append((best_v, X.bit_count(), best_d, chosen))
        if chosen:
            S.append(best_v)
            X &= ~(g.adj[best_v] | (1 << best_v))
        else:
            X &= ~(1 << best_v)
    return S, X, steps


def kw_trace(g: Graph, I: Iterable[int], params: ContainerParams) -> ContainerPair:
    """Deterministic fingerprint/container for the independent set ``I``.

    While ``|S| < r`` and ``|X| > R``: take the vertex of maximum degree in
    ``g[X]`` (lowest id on ties); if it is in ``I`` it joins the fingerprint
    and its closed neighbourhood leaves ``X``, otherwise only it leaves.
    ``I`` is always contained in ``S ∪ X``.
    """
    I = set(I)
    if not g.is_independent(I):
        raise NotIndependent(f"{sorted(I)} is not independent")
    S, X, steps = _replay(g, I.__contains__, params)
    return ContainerPair(frozenset(S), frozenset(bits(X)), tuple(steps))


def container_for_fingerprint(g: Graph, S: Iterable[int], params: ContainerParams) -> ContainerPair:
    """Replay the trace from the fingerprint alone (it determines every decision)."""
    S = set(S)
    fp, X, steps = _replay(g, S.__contains__, params)
    return ContainerPair(frozenset(fp), frozenset(bits(X)), tuple(steps))


def count_bound(n_or_graph: int | Graph, params: ContainerParams, t: int,
                density_check: Callable[[ContainerParams], bool] | None = None) -> int:
    """``C(n, r) * C(R, t - r)`` bounding the independent sets of size ``t >= r``.

    Raises :class:`ConditionViolated` unless ``exp(-alpha r) n <= R``, or if
    a supplied ``density_check`` rejects the parameters.
    """
    n = n_or_graph.n if isinstance(n_or_graph, Graph) else int(n_or_graph)
    if t < params.r:
        raise ValueError(f"t={t} must be at least r={params.r}")
    if not params.condition_holds(n):
        raise ConditionViolated(
            f"exp(-alpha*r)*n = {math.exp(-params.alpha * params.r) * n:.6g} exceeds R = {params.R}")
    if density_check is not None and not density_check(params):
        raise ConditionViolated("density hypothesis 2e(X) >= alpha |X|^2 rejected")
    return comb(n, params.r) * comb(params.R, t - params.r)


def subset_edge_counts(g: Graph) -> np.ndarray:
    """e(X) for every subset X (bitmask index); n <= 22."""
    if g.n > 22:
        raise TooLarge("subset tables need n <= 22")
    e = np.zeros(1 << g.n, dtype=np.int32)
    for v in range(g.n):
        lo = 1 << v
        rest = np.arange(lo, dtype=np.int64)
        e[lo : 2 * lo] = e[:lo] + _popcount(rest & g.adj[v])
    return e


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    c = np.zeros(x.shape, dtype=np.int32)
    while np.any(x):
        c += (x & np.uint64(1)).astype(np.int32)
        x >>= np.uint64(1)
    return c


def min_density(g: Graph, R: int) -> float:
    """Largest alpha with ``2e(X) >= alpha |X|^2`` for every ``|X| >= max(R, 1)`` (exact)."""
    e = subset_edge_counts(g)
    size = _popcount(np.arange(1 << g.n, dtype=np.int64))
    sel = size >= max(R, 1)
    if not np.any(sel):
        return 1.0
    return float(min(1.0, np.min(2 * e[sel] / size[sel].astype(float) ** 2)))


def density_hypothesis_exact(g: Graph) -> Callable[[ContainerParams], bool]:
    e = subset_edge_counts(g)
    size = _popcount(np.arange(1 << g.n, dtype=np.int64))

    def check(params: ContainerParams) -> bool:
        sel = size >= max(params.R, 1)
        return bool(np.all(2 * e[sel] >= params.alpha * size[sel].astype(float) ** 2 - 1e-12))
    return check


def density_hypothesis_sampled(g: Graph, samples: int, seed: int) -> Callable[[ContainerParams], bool]:
    """Check the density hypothesis on random subsets of every size >= R (not a proof)."""
    def check(params: ContainerParams) -> bool:
        rng = substream(seed, "independent_sets.density")
        for _ in range(samples):
            k = int(rng.integers(max(params.R, 1), g.n + 1))
            xs = rng.choice(g.n, size=k, replace=False).tolist()
            m = _mask(xs)
            e = sum((g.adj[v] & m).bit_count() for v in xs) // 2
            if 2 * e < params.alpha * k * k:
                return False
        return True
    return check


# -- exact oracles --------------------------------------------------------------------

def independence_number(g: Graph, cap: int = ALPHA_CAP, timeout: float | None = None,
                        node_budget: int | None = None) -> tuple[int, list[int]]:
    """Exact alpha(g) and a maximum independent set.

    Branch and bound for a maximum clique of the complement, with greedy
    colouring bounds; vertices are relabelled by decreasing complement degree.
    """
    if g.n > cap and timeout is None and node_budget is None:
        raise TooLarge(f"n={g.n} exceeds cap {cap}; pass a timeout or node budget")
    if g.n == 0:
        return 0, []
    comp = g.complement()
    order = sorted(range(g.n), key=lambda v: (-comp.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    cadj = [0] * g.n
    for v in range(g.n):
        cadj[pos[v]] = _mask(pos[w] for w in bits(comp.adj[v]))

    best: list[int] = []
    nodes = 0
    deadline = None if timeout is None else time.monotonic() + timeout

    def colour(P: int):
        seq = []
        U, c = P, 0
        while U:
            c += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~cadj[v] & ~low
                U &= ~low
                seq.append((v, c))
        return seq

    def expand(R: list[int], P: int):
        nonlocal best, nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise Timeout(f"node budget {node_budget} exhausted (best so far {len(best)})")
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise Timeout(f"timeout after {timeout}s (best so far {len(best)})")
        for v, c in reversed(colour(P)):
            if len(R) + c <= len(best):
                return
            R.append(v)
            P2 = P & cadj[v]
            if P2:
                expand(R, P2)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return len(best), sorted(order[i] for i in best)


def greedy_independent_set(g: Graph, seed: int = 0, restarts: int = 32) -> list[int]:
    """Best of min-degree greedy runs with random tie-breaking plus 1-swap improvement."""
    best: list[int] = []
    for k in range(restarts):
        rng = substream(seed, "independent_sets.greedy", k)
        noise = rng.random(g.n)
        P = (1 << g.n) - 1
        chosen = []
        while P:
            v = min(bits(P), key=lambda x: ((g.adj[x] & P).bit_count(), noise[x]))
            chosen.append(v)
            P &= ~(g.adj[v] | (1 << v))
        chosen = _improve(g, chosen)
        if len(chosen) > len(best):
            best = chosen
    return sorted(best)


def _improve(g: Graph, ind: list[int]) -> list[int]:
    """(1,2)-swaps: drop one vertex, add two non-adjacent free ones."""
    S = _mask(ind)
    improved = True
    while improved:
        improved = False
        for v in bits(S):
            rest = S & ~(1 << v)
            free = [w for w in range(g.n) if not (rest >> w & 1) and not (g.adj[w] & rest) and w != v]
            for i, a in enumerate(free):
                b = next((b for b in free[i + 1:] if not g.has_edge(a, b)), None)
                if b is not None:
                    S = rest | (1 << a) | (1 << b)
                    improved = True
                    break
            if improved:
                break
    return sorted(bits(S))


def count_independent_sets(g: Graph, t: int, cap: int = COUNT_CAP) -> int:
    """Exact number of independent sets of size ``t`` (n <= 30)."""
    if g.n > cap:
        raise TooLarge(f"n={g.n} exceeds {cap}")
    if t < 0:
        return 0
    memo: dict[tuple[int, int], int] = {}

    def f(P: int, k: int) -> int:
        if k == 0:
            return 1
        if P.bit_count() < k:
            return 0
        key = (P, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        low = P & -P
        v = low.bit_length() - 1
        r = f(P & ~low, k) + f(P & ~low & ~g.adj[v], k - 1)
        memo[key] = r
        return r

    return f((1 << g.n) - 1, t)
