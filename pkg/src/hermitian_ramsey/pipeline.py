"""Sampled K4-free witnesses with certificates, and multicolour blowups.

A witness is the subgraph of H_q* induced by a random vertex sample.  Its
certificate records two independent K4 checks (a direct census on the edge
list, and a rebuild of the edges from the inherited clique masks) and a
bound on the independence number, so that the exported graph can be
re-verified later without trusting the code that produced it.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import Timeout, TooLarge
from .graphs import Graph, bits, find_k4s, graph_digest
from .independent_sets import ALPHA_CAP, greedy_independent_set, independence_number
from .k4free import K4_CAP, RANDOMIZE_LABEL, K4FreeGraph, verify_k4_free
from .reports import Report, to_plain
from .rng import substream

log = logging.getLogger(__name__)

SAMPLE_LABEL = "pipeline.sample"
PERMUTATION_LABEL = "pipeline.permutation"
REGIME_P = 0.25
CERTIFICATE_VERSION = 1


@dataclass
class SampledGraph:
    graph: Graph
    vertex_map: list[int]
    p_requested: float
    p: float
    seed: int
    flags: list[str] = field(default_factory=list)
    source: K4FreeGraph | None = None


def sample_vertices(h: K4FreeGraph, p: float, seed: int) -> SampledGraph:
    """Keep each vertex independently with probability ``p``.

    ``p > 1`` is clamped to 1 and ``p > 0.25`` is flagged as far from the
    asymptotic regime; both are logged rather than refused.
    """
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    flags = []
    used = float(p)
    if used > 1:
        log.warning("p=%g clamped to 1", p)
        flags.append("p_clamped_to_1")
        used = 1.0
    if used > REGIME_P:
        log.warning("p=%g is above %g, outside the asymptotic regime", used, REGIME_P)
        flags.append("p_outside_asymptotic_regime")
    keep = substream(seed, SAMPLE_LABEL).random(h.n) < used
    ids = np.flatnonzero(keep).tolist()
    g = Graph(h.n, h.adj).induced(ids)
    return SampledGraph(g, ids, float(p), used, seed, flags, h)


def masked_edges(h: K4FreeGraph, vertex_map: list[int]) -> set[tuple[int, int]]:
    """Edges of the sampled graph rebuilt from the clique masks alone."""
    pos = {v: i for i, v in enumerate(vertex_map)}
    out = set()
    for c in range(h.base.n_cliques):
        members = h.base.clique(c).tolist()
        side = h.masks[c].tolist()
        kept = [(pos[v], s) for v, s in zip(members, side) if v in pos]
        for i, (a, sa) in enumerate(kept):
            for b, sb in kept[i + 1:]:
                if sa != sb:
                    out.add((min(a, b), max(a, b)))
    return out


def _clique_cover(g: Graph) -> list[list[int]]:
    """Greedy partition of V into cliques; its size bounds alpha from above."""
    left = (1 << g.n) - 1
    cover = []
    while left:
        v = (left & -left).bit_length() - 1
        clique, cand = [v], left & g.adj[v]
        while cand:
            w = max(bits(cand), key=lambda x: (g.adj[x] & cand).bit_count())
            clique.append(w)
            cand &= g.adj[w]
        cover.append(sorted(clique))
        for x in clique:
            left &= ~(1 << x)
    return cover


def _alpha_bound(g: Graph, t: int, cap: int, seed: int, timeout: float | None) -> dict:
    if g.n <= cap:
        try:
            value, witness = independence_number(g, cap=cap, timeout=timeout)
            return {"mode": "exact", "value": value, "t": t, "passed": value < t,
                    "witness": witness, "transcript": {"solver": "branch_and_bound"}}
        except Timeout as exc:
            log.warning("exact independence number gave up: %s", exc)
    lower = greedy_independent_set(g, seed=seed)
    cover = _clique_cover(g)
    upper = len(cover)
    if len(lower) >= t:
        passed = False
    elif upper < t:
        passed = True
    else:
        passed = None
    return {"mode": "sampled", "value": len(lower), "t": t, "passed": passed, "witness": lower,
            "transcript": {"lower_bound": len(lower), "lower_method": "greedy_restarts_with_swaps",
                           "greedy_seed": seed, "upper_bound": upper, "upper_method": "greedy_clique_cover"}}


def _k4_section(g: Graph, sample: SampledGraph | None, cap: int) -> dict:
    out: dict = {}
    if g.n <= cap:
        k4 = find_k4s(g.adj, limit=1)
        out["edge_list"] = {"mode": "exhaustive", "k4_free": not k4, "witness": list(k4[0]) if k4 else None}
    if sample is not None and sample.source is not None:
        h = sample.source
        structural = verify_k4_free(h, mode="structural").passed
        rebuilt = masked_edges(h, sample.vertex_map)
        agree = rebuilt == set(g.edges())
        out["masks"] = {"mode": "structural", "k4_free": structural and agree,
                        "host_structural": structural, "edges_match_masks": agree}
    results = [sec["k4_free"] for sec in out.values()]
    out["mode"] = "exhaustive" if "edge_list" in out else ("structural" if out else "none")
    out["result"] = bool(results) and all(results)
    out["paths_agree"] = len(set(results)) <= 1
    return out


@dataclass
class Certificate:
    data: dict

    @property
    def status(self) -> str:
        return self.data["status"]

    def to_json(self) -> str:
        return json.dumps(to_plain(self.data), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        data = json.loads(text)
        if data.get("version") != CERTIFICATE_VERSION:
            raise ValueError(f"unsupported certificate version {data.get('version')!r}")
        return cls(data)

    def comparable(self) -> dict:
        """Everything except the timestamp."""
        return {k: v for k, v in json.loads(self.to_json()).items() if k != "timestamp"}


def _status(k4: dict, alpha: dict) -> str:
    if not k4["result"] or alpha["passed"] is False:
        return "FAIL"
    return "PASS" if alpha["passed"] else "UNPROVEN"


def certify_witness(g: SampledGraph | Graph, t: int, k4_cap: int = K4_CAP, alpha_cap: int = ALPHA_CAP,
                    modulus=None, timeout: float | None = None, timestamp: str | None = None) -> Certificate:
    """Certify that ``g`` is K4-free with no independent set of size ``t``.

    Failures are recorded in the certificate rather than raised.
    """
    from . import __version__

    sample = g if isinstance(g, SampledGraph) else None
    graph = sample.graph if sample else g
    seed = sample.seed if sample else 0
    k4 = _k4_section(graph, sample, k4_cap)
    alpha = _alpha_bound(graph, t, alpha_cap, seed, timeout)
    data = {
        "version": CERTIFICATE_VERSION,
        "tool_version": __version__,
        "q": sample.source.q if sample and sample.source else None,
        "seeds": {"randomize": sample.source.seed if sample.source else None, "sample": seed,
                  "labels": [RANDOMIZE_LABEL, SAMPLE_LABEL]} if sample else None,
        "field_modulus": list(modulus) if modulus is not None else None,
        "sampling": {"p_requested": sample.p_requested, "p": sample.p, "flags": sample.flags,
                     "vertex_map": sample.vertex_map} if sample else None,
        "graph": {"vertex_count": graph.n, "edge_count": graph.edge_count, "edge_digest": graph_digest(graph)},
        "k4_free": k4,
        "alpha_bound": alpha,
        "status": _status(k4, alpha),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return Certificate(to_plain(data))


def reverify(cert: Certificate, g: Graph, h: K4FreeGraph | None = None,
             alpha_cap: int = ALPHA_CAP, timeout: float | None = None) -> Report:
    """Recompute every recorded result from the exported graph (and, if given, the host H_q*)."""
    d = cert.data
    rep = Report("certificate re-verification")
    rec = d["graph"]
    digest = graph_digest(g)
    rep.add("vertex_count", g.n == rec["vertex_count"], expected=rec["vertex_count"], found=g.n)
    rep.add("edge_count", g.edge_count == rec["edge_count"], expected=rec["edge_count"], found=g.edge_count)
    rep.add("edge_digest", digest == rec["edge_digest"], expected=rec["edge_digest"], found=digest)

    k4 = d["k4_free"]
    if "edge_list" in k4:
        found = find_k4s(g.adj, limit=1)
        rep.add("k4_edge_list", (not found) == k4["edge_list"]["k4_free"],
                recorded=k4["edge_list"]["k4_free"], witness=list(found[0]) if found else None)
    if "masks" in k4:
        if h is None:
            rep.add("k4_masks", False, reason="host graph needed to rebuild masked edges")
        else:
            vmap = d["sampling"]["vertex_map"]
            agree = masked_edges(h, vmap) == set(g.edges())
            structural = verify_k4_free(h, mode="structural").passed
            rep.add("k4_masks", (structural and agree) == k4["masks"]["k4_free"],
                    host_structural=structural, edges_match_masks=agree)

    a = d["alpha_bound"]
    witness = a["witness"]
    ok_witness = all(0 <= v < g.n for v in witness) and g.is_independent(witness)
    rep.add("alpha_witness_independent", ok_witness, size=len(witness))
    if a["mode"] == "exact":
        try:
            value, _ = independence_number(g, cap=alpha_cap, timeout=timeout)
            rep.add("alpha_exact", value == a["value"] and len(witness) == value,
                    expected=a["value"], found=value)
        except (Timeout, TooLarge) as exc:
            rep.add("alpha_exact", False, reason=str(exc))
    else:
        upper = len(_clique_cover(g))
        rep.add("alpha_upper_bound", upper == a["transcript"]["upper_bound"],
                expected=a["transcript"]["upper_bound"], found=upper)
    rep.add("status", _status(k4, a) == d["status"], recorded=d["status"])
    return rep


# -- blowups ---------------------------------------------------------------------------

def blowup(g: Graph, r: int) -> Graph:
    """Replace each vertex ``x`` by the independent set ``x*r .. x*r + r - 1``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    block = (1 << r) - 1
    adj = []
    for x in range(g.n):
        m = 0
        for y in bits(g.adj[x]):
            m |= block << (y * r)
        adj.extend([m] * r)
    return Graph(g.n * r, adj)


@dataclass
class ColoredGraph:
    n: int
    k: int
    colors: np.ndarray  # n x n, symmetric, 0 on the diagonal, else 1..k
    permutations: list[np.ndarray]
    base_n: int
    r: int

    def color_graph(self, i: int) -> Graph:
        adj = []
        for row in self.colors == i:
            m = 0
            for v in np.flatnonzero(row).tolist():
                m |= 1 << v
            adj.append(m)
        return Graph(self.n, adj)

    def color_counts(self) -> dict[int, int]:
        iu = np.triu_indices(self.n, 1)
        vals = self.colors[iu]
        return {i: int((vals == i).sum()) for i in range(1, self.k + 1)}


def blowup_multicolor(g_t: Graph, r: int, k: int, seed: int,
                      color_seeds: list[int] | None = None) -> ColoredGraph:
    """Colours ``1..k-1`` are randomly relabelled copies of the ``r``-blowup of
    ``g_t``; a pair already coloured keeps its lowest colour; colour ``k``
    takes every remaining pair.

    Permutation ``i`` comes from ``(seed, i)`` unless ``color_seeds`` gives
    an explicit seed per colour.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if color_seeds is not None and len(color_seeds) != k - 1:
        raise ValueError(f"need {k - 1} colour seeds, got {len(color_seeds)}")
    base = blowup(g_t, r)
    n = base.n
    edges = np.array(list(base.edges()), dtype=np.int64).reshape(-1, 2)
    colors = np.zeros((n, n), dtype=np.int16)
    perms = []
    for i in range(1, k):
        rng = (substream(color_seeds[i - 1], PERMUTATION_LABEL) if color_seeds is not None
               else substream(seed, PERMUTATION_LABEL, i))
        sigma = rng.permutation(n)
        perms.append(sigma)
        u, v = sigma[edges[:, 0]], sigma[edges[:, 1]]
        free = colors[u, v] == 0
        colors[u[free], v[free]] = i
        colors[v[free], u[free]] = i
    off = ~np.eye(n, dtype=bool)
    colors[(colors == 0) & off] = k
    return ColoredGraph(n, k, colors, perms, g_t.n, r)


def verify_coloring(c: ColoredGraph, t: int, k4_cap: int = K4_CAP, alpha_cap: int = ALPHA_CAP,
                    timeout: float | None = None) -> Report:
    """No K4 in colours ``1..k-1`` and no K_t in colour ``k``."""
    rep = Report(f"coloring k={c.k} n={c.n} t={t}")
    off = ~np.eye(c.n, dtype=bool)
    symmetric = np.array_equal(c.colors, c.colors.T)
    in_range = bool(np.all((c.colors[off] >= 1) & (c.colors[off] <= c.k))) and not np.any(np.diag(c.colors))
    total = sum(c.color_counts().values())
    rep.add("partition", symmetric and in_range and total == comb(c.n, 2),
            colored_pairs=total, pairs=comb(c.n, 2), counts=c.color_counts())
    for i in range(1, c.k):
        if c.n > k4_cap:
            rep.add(f"color_{i}_k4_free", False, reason=f"n={c.n} exceeds cap {k4_cap}")
            continue
        k4 = find_k4s(c.color_graph(i).adj, limit=1)
        rep.add(f"color_{i}_k4_free", not k4, **({"k4": list(k4[0])} if k4 else {}))
    name = f"color_{c.k}_no_k{t}"
    if t > c.n:
        rep.add(name, True, reason="t exceeds the vertex count")
        return rep
    union = Graph(c.n, [a ^ b for a, b in zip(Graph.complete(c.n).adj, c.color_graph(c.k).adj)])
    try:
        value, witness = independence_number(union, cap=alpha_cap, timeout=timeout)
    except (Timeout, TooLarge) as exc:
        rep.add(name, False, reason=str(exc))
        return rep
    rep.add(name, value < t, alpha=value, **({"k_t": witness[:t]} if value >= t else {}))
    return rep


def expected_count(T: int, s: int, r: int, t: int, k: int) -> Fraction:
    """``(C(T,s) (s r)^t / t!)^(k-1) * C(rT, t)^-(k-2)`` as an exact rational."""
    per_color = Fraction(comb(T, s) * (s * r) ** t, factorial(t))
    return per_color ** (k - 1) / Fraction(comb(r * T, t)) ** (k - 2)


def expected_count_report(T: int, s: int, r: int, t: int, k: int) -> dict:
    value = expected_count(T, s, r, t, k)
    return {"T": T, "s": s, "r": r, "t": t, "k": k,
            "numerator": str(value.numerator), "denominator": str(value.denominator),
            "approx": float(value) if value < 10**300 else float("inf"), "less_than_one": value < 1}


def multicolor_r(t: int, k: int, delta: float = 1.0) -> int:
    """Blowup factor ``ceil(delta t^(2(k-2)) / ln(t)^(6k-13))``; delta is a free input."""
    return max(1, math.ceil(delta * t ** (2 * (k - 2)) / math.log(t) ** (6 * k - 13)))


def multicolor_s(t: int) -> int:
    return max(1, math.floor(t / math.log(t)))
