#!/usr/bin/env python3
"""Writes every connected graph on 1..8 nodes, one per isomorphism class, as graph6.

Classes come from pynauty canonical labels; the counts are checked against the
known totals 1, 1, 2, 6, 21, 112, 853, 11117.
"""

import itertools
import os

import networkx as nx
from pynauty import Graph, certificate

EXPECTED = [1, 1, 2, 6, 21, 112, 853, 11117]
OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures", "connected_graphs_upto8.g6")


def cert(n, edges):
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return certificate(Graph(n, adjacency_dict=adj))


def main():
    # All graphs on n nodes grow from all graphs on n-1 nodes plus one vertex.
    layers = {1: {cert(1, []): []}}
    for n in range(2, 9):
        layer = {}
        for edges in layers[n - 1].values():
            for k in range(n):
                for nbrs in itertools.combinations(range(n - 1), k):
                    e = edges + [(u, n - 1) for u in nbrs]
                    c = cert(n, e)
                    if c not in layer:
                        layer[c] = e
        layers[n] = layer
    lines = []
    for n in range(1, 9):
        connected = []
        for edges in layers[n].values():
            g = nx.Graph()
            g.add_nodes_from(range(n))
            g.add_edges_from(edges)
            if nx.is_connected(g):
                connected.append(nx.to_graph6_bytes(g, header=False).decode().strip())
        assert len(connected) == EXPECTED[n - 1], (n, len(connected))
        lines.extend(sorted(connected))
    with open(OUT, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
