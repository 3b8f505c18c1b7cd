"""
The rooted flow graph of online multi-facility location.

A root node r has an edge to every facility j (cost: opening cost of j) and
every arrived client i has an edge from each allowed facility (cost:
connection cost). Every r-i path is r -> j -> i, so k facility-disjoint
purchased paths connect i to k open facilities.

Each edge carries a fraction that never decreases and a purchase flag that
never reverts. The residual view G' of a client is G minus the purchased
edges between the client and the facilities already serving it.
"""
import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import NamedTuple

from mfl.core import numeric
from mfl.core.exceptions import (
    DuplicateClient,
    EdgeNotPurchased,
    InvariantViolation,
    NoResidualPath,
    SaturatedCut,
    UnknownClient,
)
from mfl.core.instance import Facility

from .network import minimum_cut

logger = logging.getLogger(__name__)

TraceSink = Callable[..., None]


class EdgeKind(StrEnum):
    ROOT = "root"
    CLIENT = "client"


class EdgeId(NamedTuple):
    """(j, None) is the root edge of facility j, (j, i) the edge from j to client i."""
    facility: str
    client: str | None = None

    @property
    def kind(self) -> EdgeKind:
        return EdgeKind.ROOT if self.client is None else EdgeKind.CLIENT

    def __str__(self):
        if self.client is None:
            return f"r->{self.facility}"
        return f"{self.facility}->{self.client}"


@dataclass
class EdgeState:
    id: EdgeId
    cost: float
    fraction: float = 0.0
    purchased: bool = False

    @property
    def kind(self) -> EdgeKind:
        return self.id.kind

    @property
    def is_free(self) -> bool:
        return self.cost == 0

    @property
    def cut_weight(self) -> float:
        """Free edges are never cut: they are bought on sight and have no fraction update."""
        return math.inf if self.cost == 0 else self.fraction


@dataclass(frozen=True)
class Cut:
    client: str
    edges: tuple[EdgeId, ...]
    weight: float

    @property
    def size(self) -> int:
        return len(self.edges)


class FlowGraph:
    def __init__(self, facilities: Iterable[Facility], sink: TraceSink | None = None):
        self.facility_ids: list[str] = []
        self.edges: dict[EdgeId, EdgeState] = {}
        self._client_edges: dict[str, list[EdgeId]] = {}
        # (root edge, client edge) per allowed facility, in declaration order
        self._paths: dict[str, list[tuple[EdgeState, EdgeState]]] = {}
        self._removed: dict[str, set[str]] = {}
        self._cuts = 0
        self._sink = sink
        for facility in facilities:
            self.facility_ids.append(facility.id)
            edge_id = EdgeId(facility.id)
            self.edges[edge_id] = EdgeState(edge_id, facility.opening_cost)

    def _emit(self, event: str, **payload):
        if self._sink is not None:
            self._sink(event, **payload)

    def _require_client(self, client_id: str) -> list[EdgeId]:
        try:
            return self._client_edges[client_id]
        except KeyError:
            raise UnknownClient(client=client_id) from None

    def edge(self, edge_id: EdgeId) -> EdgeState:
        return self.edges[edge_id]

    def has_client(self, client_id: str) -> bool:
        return client_id in self._client_edges

    def add_client(self, client_id: str, costs: Mapping[str, float]) -> list[EdgeId]:
        """Add a client node with one unpurchased, zero-fraction edge per allowed facility."""
        if client_id in self._client_edges:
            raise DuplicateClient(client=client_id)
        new_edges, paths = [], []
        for j in self.facility_ids:
            if j in costs:
                edge_id = EdgeId(j, client_id)
                link = self.edges[edge_id] = EdgeState(edge_id, costs[j])
                new_edges.append(edge_id)
                paths.append((self.edges[EdgeId(j)], link))
        self._client_edges[client_id] = new_edges
        self._paths[client_id] = paths
        self._removed[client_id] = set()
        logger.debug("Client %s added with %d edges", client_id, len(new_edges))
        return new_edges

    def _live_paths(self, client_id: str) -> list[tuple[EdgeState, EdgeState]]:
        self._require_client(client_id)
        removed = self._removed[client_id]
        if not removed:
            return self._paths[client_id]
        return [(root, link) for root, link in self._paths[client_id] if root.id.facility not in removed]

    def live_facilities(self, client_id: str) -> list[str]:
        """Facilities still connected to the client in its residual view G', in declaration order."""
        return [root.id.facility for root, _link in self._live_paths(client_id)]

    def min_cut(self, client_id: str, method: str = "structural") -> Cut:
        """
        Minimum-weight r-i cut of G' under fraction weights.

        ``structural`` takes, per live facility, the lighter of its root edge
        and its client edge (ties go to the root edge). ``augmenting`` solves
        the same network with networkx (Edmonds-Karp).
        """
        paths = self._live_paths(client_id)
        if not paths:
            raise NoResidualPath(client=client_id)

        if method == "structural":
            edges, weights = self._structural_cut(paths)
        elif method == "augmenting":
            edges, weights = self._augmenting_cut(client_id, paths)
        else:
            raise ValueError(f"Unknown min cut method `{method}`.")
        return Cut(client_id, tuple(edges), math.fsum(weights))

    @staticmethod
    def _structural_cut(paths) -> tuple[list[EdgeId], list[float]]:
        edges, weights = [], []
        for root, link in paths:
            root_weight = math.inf if root.cost == 0 else root.fraction
            link_weight = math.inf if link.cost == 0 else link.fraction
            if root_weight <= link_weight:
                chosen, weight = root, root_weight
            else:
                chosen, weight = link, link_weight
            if weight == math.inf:
                # both edges free: this path alone carries unbounded flow
                weights.append(math.inf)
                continue
            edges.append(chosen.id)
            weights.append(weight)
        return edges, weights

    def _augmenting_cut(self, client_id: str, paths) -> tuple[list[EdgeId], list[float]]:
        capacities = []
        for root, link in paths:
            j = root.id.facility
            capacities.append(("r", ("facility", j), root.cut_weight))
            capacities.append((("facility", j), ("client", client_id), link.cut_weight))
        flow, cut = minimum_cut(capacities, "r", ("client", client_id))
        if math.isinf(flow):
            return [], [math.inf]
        edges = []
        for v, w, _c in cut:
            if v == "r":
                edges.append(EdgeId(w[1]))
            else:
                edges.append(EdgeId(v[1], client_id))
        edges.sort(key=lambda e: self.facility_ids.index(e.facility))
        return edges, [self.edges[e].cut_weight for e in edges]

    def max_flow_value(self, client_id: str) -> float:
        """Max r-i flow in G', which by duality is the weight of a minimum cut."""
        return self.min_cut(client_id).weight

    def fraction_increase(self, cut: Cut) -> dict[EdgeId, float]:
        """
        Raise every cut edge to f * (1 + 1/c) + 1 / (|Q| * c) and return the
        per-edge deltas. The cost of one increase, sum of c * delta, equals
        the cut weight plus one and so stays below 2.
        """
        if cut.weight >= 1:
            raise SaturatedCut(weight=cut.weight)
        self._cuts += 1
        cut_id = self._cuts
        tracing = self._sink is not None
        size = cut.size
        if tracing:
            self._emit(
                "cut",
                client=cut.client,
                cut_id=cut_id,
                edges=[list(e) for e in cut.edges],
                weight=cut.weight,
                size=size,
            )

        tol = numeric.tolerance()
        deltas = {}
        charged = []
        for edge_id in cut.edges:
            edge = self.edges[edge_id]
            cost = edge.cost
            if cost == 0:
                raise InvariantViolation(invariant=f"free edge {edge_id} in a cut")
            old = edge.fraction
            new = old * (1 + 1 / cost) + 1 / (size * cost)
            edge.fraction = new
            delta = new - old
            deltas[edge_id] = delta
            increase_cost = cost * delta
            if not math.isclose(increase_cost, old + 1 / size, rel_tol=tol, abs_tol=tol):
                raise InvariantViolation(
                    invariant=f"increase cost of {edge_id} is {increase_cost}, expected {old + 1 / size}"
                )
            charged.append(increase_cost)
            if tracing:
                self._emit(
                    "increase",
                    cut_id=cut_id,
                    edge=list(edge_id),
                    cost=cost,
                    old=old,
                    new=new,
                    delta=delta,
                    size=size,
                )

        total = math.fsum(charged)
        if not total < 2 * (1 + tol):
            raise InvariantViolation(invariant=f"fraction increase cost {total} is not below 2")
        return deltas

    def purchase_edge(self, edge_id: EdgeId, reason: str) -> bool:
        """Mark an edge purchased. Returns False if it already was, so each edge is charged once."""
        edge = self.edges[edge_id]
        if edge.purchased:
            return False
        edge.purchased = True
        self._emit(f"{reason}_purchase", edge=list(edge_id), cost=edge.cost, fraction=edge.fraction)
        return True

    def is_path_purchased(self, facility_id: str, client_id: str) -> bool:
        link = self.edges.get(EdgeId(facility_id, client_id))
        return link is not None and link.purchased and self.edges[EdgeId(facility_id)].purchased

    def remove_served_edge(self, client_id: str, facility_id: str) -> None:
        """Delete the purchased edge (j, i) from the client's G'; G keeps it."""
        self._require_client(client_id)
        if not self.is_path_purchased(facility_id, client_id):
            raise EdgeNotPurchased(edge=EdgeId(facility_id, client_id))
        self._removed[client_id].add(facility_id)
        self._emit("remove", client=client_id, facility=facility_id)

    def residual_purchased_paths(self, client_id: str) -> list[str]:
        """Live facilities whose whole path to the client is purchased."""
        return [
            root.id.facility
            for root, link in self._live_paths(client_id)
            if root.purchased and link.purchased
        ]

    def purchased_disjoint_path_count(self, client_id: str) -> int:
        """Facilities j with both (r, j) and (j, i) purchased, counted over G."""
        self._require_client(client_id)
        return sum(1 for root, link in self._paths[client_id] if root.purchased and link.purchased)

    def purchased_cost(self) -> float:
        return math.fsum(edge.cost for edge in self.edges.values() if edge.purchased)
