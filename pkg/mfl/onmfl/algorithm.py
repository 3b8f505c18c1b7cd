"""
Randomized online algorithm for non-metric multi-facility location.

Every arriving client is served by buying k_i facility-disjoint r-i paths in
the flow graph. Fractions are raised along minimum cuts until the client can
receive a unit of flow, edges whose fraction exceeds a random threshold
alpha are bought, and a cheapest residual path is bought whenever rounding
left the client without a purchased path.
"""
import logging
import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from mfl.core import numeric
from mfl.core.exceptions import (
    DuplicateClient,
    InfeasibleClient,
    InfeasibleRequirement,
    InvariantViolation,
    NoResidualPath,
)
from mfl.core.instance import Facility, Instance, Solution
from mfl.flowgraph.graph import EdgeId, FlowGraph, TraceSink

logger = logging.getLogger(__name__)


class PurchaseReason(StrEnum):
    ROUNDING = "rounding"
    FALLBACK = "fallback"
    FREE = "free"


@dataclass(frozen=True)
class AlphaThreshold:
    """alpha is the minimum of ``draw_count`` uniform draws on [0, 1]."""
    draw_count: int
    alpha: float
    seed: int | None = None

    @staticmethod
    def draw_count_for(n: int, k_max: int) -> int:
        # 2 * ceil(log2(k*n + 1)), computed on integers
        return 2 * (k_max * n).bit_length()

    @classmethod
    def draw(cls, n: int, k_max: int, seed: int | None) -> "AlphaThreshold":
        draw_count = cls.draw_count_for(n, k_max)
        rng = np.random.default_rng(seed)
        alpha = float(rng.random(draw_count).min())
        return cls(draw_count=draw_count, alpha=alpha, seed=seed)


@dataclass
class ArrivalResult:
    client: str
    purchased: list[tuple[EdgeId, PurchaseReason]] = field(default_factory=list)
    served_by: list[str] = field(default_factory=list)
    iterations: int = 0


class OnmflState:
    def __init__(
        self,
        n: int,
        k: int | Mapping[str, int],
        facilities: Iterable[Facility],
        alpha: AlphaThreshold,
        sink: TraceSink | None = None,
    ):
        facilities = list(facilities)
        k_max = k if isinstance(k, int) else max(k.values(), default=1)
        if n < 1 or k_max < 1:
            raise ValueError(f"Need n >= 1 and k >= 1, got n={n}, k={k_max}.")
        if len(facilities) < k_max:
            raise InfeasibleRequirement(k_max=k_max, m=len(facilities))

        self.n = n
        self.k = k
        self.k_max = k_max
        self.alpha = alpha
        self.opening_costs = {f.id: f.opening_cost for f in facilities}
        self.graph = FlowGraph(facilities, sink=sink)
        self.solution = Solution()
        self.arrived: list[str] = []
        self.reasons: dict[EdgeId, PurchaseReason] = {}
        self.path_acquisitions: Counter[PurchaseReason] = Counter()
        self._sink = sink

        for j, cost in self.opening_costs.items():
            if cost == 0:
                self._purchase(EdgeId(j), PurchaseReason.FREE)

    @classmethod
    def init(
        cls,
        n: int,
        k: int | Mapping[str, int],
        facilities: Iterable[Facility],
        seed: int | None,
        sink: TraceSink | None = None,
    ) -> "OnmflState":
        """Draw alpha once for the whole run and set up the root and facility nodes."""
        k_max = k if isinstance(k, int) else max(k.values(), default=1)
        alpha = AlphaThreshold.draw(n, k_max, seed)
        logger.debug("alpha=%.6f from %d draws (seed %s)", alpha.alpha, alpha.draw_count, seed)
        return cls(n, k, facilities, alpha, sink=sink)

    @classmethod
    def for_instance(cls, inst: Instance, seed: int | None, sink: TraceSink | None = None) -> "OnmflState":
        k = inst.scalar_k or dict(zip(inst.client_ids, inst.requirement))
        return cls.init(inst.n, k, inst.facilities, seed, sink=sink)

    def _emit(self, event: str, **payload):
        if self._sink is not None:
            self._sink(event, **payload)

    def k_of(self, client_id: str) -> int:
        if isinstance(self.k, int):
            return self.k
        return self.k[client_id]

    def _purchase(self, edge_id: EdgeId, reason: PurchaseReason) -> bool:
        if self.graph.purchase_edge(edge_id, reason):
            self.reasons[edge_id] = reason
            return True
        return False

    def on_arrival(self, client_id: str, costs: Mapping[str, float]) -> ArrivalResult:
        k_i = self.k_of(client_id)
        if self.graph.has_client(client_id):
            raise DuplicateClient(client=client_id)
        allowed = sum(1 for j in self.opening_costs if j in costs)
        if allowed < k_i:
            raise InfeasibleClient(client=client_id, allowed=allowed, required=k_i)

        self._emit("arrival", client=client_id, k=k_i)
        result = ArrivalResult(client_id)
        for edge_id in self.graph.add_client(client_id, costs):
            if self.graph.edge(edge_id).is_free and self._purchase(edge_id, PurchaseReason.FREE):
                result.purchased.append((edge_id, PurchaseReason.FREE))
        if self.graph.residual_purchased_paths(client_id):
            result.served_by += self._serve(client_id, None)

        tol = numeric.tolerance()
        while self.graph.purchased_disjoint_path_count(client_id) < k_i:
            result.iterations += 1
            if result.iterations > k_i:
                raise InvariantViolation(invariant=f"more than k={k_i} rounds for client {client_id}")

            self._check_residual_path(client_id, k_i)
            cut = self.graph.min_cut(client_id)
            while cut.weight < 1 - tol:
                self.graph.fraction_increase(cut)
                cut = self.graph.min_cut(client_id)
            self._emit("flow", client=client_id, value=cut.weight)

            result.purchased += self._round()

            fallback = None
            if not self.graph.residual_purchased_paths(client_id):
                fallback = self.min_cost_residual_path(client_id)
                for edge_id in (EdgeId(fallback), EdgeId(fallback, client_id)):
                    if self._purchase(edge_id, PurchaseReason.FALLBACK):
                        result.purchased.append((edge_id, PurchaseReason.FALLBACK))

            result.served_by += self._serve(client_id, fallback)

        self.arrived.append(client_id)
        if len(self.solution.facilities_of(client_id)) < k_i:
            raise InvariantViolation(invariant=f"client {client_id} connected to fewer than {k_i} facilities")
        logger.debug(
            "Client %s served by %s after %d rounds", client_id, result.served_by, result.iterations,
        )
        return result

    def _check_residual_path(self, client_id: str, k_i: int) -> None:
        """A fraction increase only happens while paths are missing and G' still reaches the client."""
        if self.graph.purchased_disjoint_path_count(client_id) >= k_i:
            raise InvariantViolation(invariant=f"increase for client {client_id} with all paths purchased")
        if not self.graph.live_facilities(client_id):
            raise InvariantViolation(invariant=f"increase for client {client_id} on an empty residual graph")

    def _round(self) -> list[tuple[EdgeId, PurchaseReason]]:
        """Buy every edge whose fraction exceeds alpha."""
        bought = []
        for edge in self.graph.edges.values():
            if not edge.purchased and edge.fraction > self.alpha.alpha:
                self._purchase(edge.id, PurchaseReason.ROUNDING)
                bought.append((edge.id, PurchaseReason.ROUNDING))
        return bought

    def min_cost_residual_path(self, client_id: str) -> str:
        """
        Facility of the cheapest live r-i path, where already purchased
        edges cost nothing. Ties go to the facility declared first.
        """
        live = self.graph.live_facilities(client_id)
        if not live:
            raise NoResidualPath(client=client_id)

        def residual_cost(j):
            root = self.graph.edge(EdgeId(j))
            link = self.graph.edge(EdgeId(j, client_id))
            return (0.0 if root.purchased else root.cost) + (0.0 if link.purchased else link.cost)

        return min(live, key=residual_cost)

    def _serve(self, client_id: str, fallback: str | None) -> list[str]:
        for j in self.graph.facility_ids:
            if self.graph.edge(EdgeId(j)).purchased and self.solution.open(j):
                self._emit("open", facility=j)

        served = []
        for j in self.graph.residual_purchased_paths(client_id):
            self.graph.remove_served_edge(client_id, j)
            self.solution.assign(client_id, j)
            via = self._acquisition_reason(client_id, j, fallback)
            self.path_acquisitions[via] += 1
            self._emit("serve", client=client_id, facility=j, via=via)
            served.append(j)
        return served

    def _acquisition_reason(self, client_id: str, facility_id: str, fallback: str | None) -> PurchaseReason:
        if facility_id == fallback:
            return PurchaseReason.FALLBACK
        path = (EdgeId(facility_id), EdgeId(facility_id, client_id))
        if all(self.reasons.get(e) == PurchaseReason.FREE for e in path):
            return PurchaseReason.FREE
        return PurchaseReason.ROUNDING

    def cost_by_reason(self) -> dict[PurchaseReason, float]:
        costs = {reason: [] for reason in PurchaseReason}
        for edge_id, reason in self.reasons.items():
            costs[reason].append(self.graph.edge(edge_id).cost)
        return {reason: math.fsum(values) for reason, values in costs.items()}

    def paid_cost(self) -> float:
        return self.graph.purchased_cost()
