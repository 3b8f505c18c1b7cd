"""
General minimum cut through networkx, used to cross-check the closed-form
cut of the shallow client flow graph.
"""
import math
from collections.abc import Hashable, Iterable

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

Capacity = tuple[Hashable, Hashable, float]


def build_network(capacities: Iterable[Capacity]) -> nx.DiGraph:
    """Directed graph with ``capacity`` attributes; infinite edges carry none."""
    network = nx.DiGraph()
    for v, w, c in capacities:
        if math.isinf(c):
            network.add_edge(v, w)
        else:
            network.add_edge(v, w, capacity=c)
    return network


def minimum_cut(capacities: list[Capacity], source: Hashable, sink: Hashable) -> tuple[float, list[Capacity]]:
    """
    Maximum flow value and the edges (v, w, capacity) leaving the source
    side of a minimum cut. An infinite-capacity path gives ``(inf, [])``.
    """
    network = build_network(capacities)
    if source not in network or sink not in network:
        return 0.0, []
    try:
        value, (reachable, _rest) = nx.minimum_cut(network, source, sink, flow_func=edmonds_karp)
    except nx.NetworkXUnbounded:
        return math.inf, []
    cut = [(v, w, c) for v, w, c in capacities if v in reachable and w not in reachable]
    return float(value), cut
