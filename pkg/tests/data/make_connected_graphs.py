"""Regenerate connected_le8.g6: every connected graph on 1..8 vertices, one per isomorphism class.

Graphs up to 7 vertices come from the networkx atlas.  Every connected graph
on 8 vertices has a non-cut vertex, so it arises from a connected 7-vertex
graph by adding one vertex with a non-empty neighbourhood; candidates are
bucketed by an invariant and deduplicated with VF2.
"""
from collections import defaultdict
from itertools import combinations
from pathlib import Path

import networkx as nx

EXPECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def invariant(g):
    tri = nx.triangles(g)
    return tuple(sorted((d, tri[v]) for v, d in g.degree()))


def main():
    small = [g for g in nx.graph_atlas_g()[1:] if nx.is_connected(g)]
    seven = [g for g in small if g.number_of_nodes() == 7]
    buckets = defaultdict(list)
    for g in seven:
        for k in range(1, 8):
            for nb in combinations(range(7), k):
                h = g.copy()
                h.add_edges_from((7, v) for v in nb)
                bucket = buckets[invariant(h)]
                if not any(nx.is_isomorphic(h, o) for o in bucket):
                    bucket.append(h)
    eight = [h for b in buckets.values() for h in b]
    graphs = small + eight
    counts = {}
    for g in graphs:
        counts[g.number_of_nodes()] = counts.get(g.number_of_nodes(), 0) + 1
    assert counts == EXPECTED, counts
    out = Path(__file__).with_name("connected_le8.g6")
    with open(out, "w", encoding="ascii", newline="\n") as fh:
        for g in graphs:
            fh.write(nx.to_graph6_bytes(g, header=False).decode().strip() + "\n")


if __name__ == "__main__":
    main()
