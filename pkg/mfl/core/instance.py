"""
Instance and solution model of online multi-facility location.

An instance holds facilities with opening costs, clients with per-facility
connection costs and a connection requirement k_i per client. An absent
connection cost means the connection is forbidden; there is no numeric
sentinel for it anywhere in the package.
"""
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType


@dataclass(frozen=True)
class Facility:
    id: str
    opening_cost: float


@dataclass(frozen=True)
class Client:
    id: str
    costs: Mapping[str, float]

    def cost(self, facility_id: str) -> float | None:
        return self.costs.get(facility_id)

    def allows(self, facility_id: str) -> bool:
        return facility_id in self.costs


@dataclass(frozen=True)
class Instance:
    facilities: tuple[Facility, ...]
    clients: tuple[Client, ...]
    requirement: tuple[int, ...]
    metric: bool = False
    arrival_order: tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        facilities: Iterable[tuple[str, float]] | Mapping[str, float],
        clients: Iterable[tuple[str, Mapping[str, float]]] | Mapping[str, Mapping[str, float]],
        k: int | Sequence[int],
        metric: bool = False,
        arrival_order: Iterable[str] | None = None,
    ) -> "Instance":
        """
        Build an instance from plain data. A scalar ``k`` is stored as a
        constant per-client vector. Nothing is validated here, see
        ``mfl.core.validators.validate_instance``.
        """
        if isinstance(facilities, Mapping):
            facilities = facilities.items()
        if isinstance(clients, Mapping):
            clients = clients.items()
        facility_objs = tuple(Facility(str(j), float(cost)) for j, cost in facilities)
        client_objs = tuple(
            Client(str(i), MappingProxyType({str(j): float(c) for j, c in costs.items()}))
            for i, costs in clients
        )
        if isinstance(k, int):
            requirement = (k,) * len(client_objs)
        else:
            requirement = tuple(int(k_i) for k_i in k)
        if arrival_order is None:
            arrival_order = [client.id for client in client_objs]
        return cls(
            facilities=facility_objs,
            clients=client_objs,
            requirement=requirement,
            metric=bool(metric),
            arrival_order=tuple(str(i) for i in arrival_order),
        )

    @property
    def m(self) -> int:
        return len(self.facilities)

    @property
    def n(self) -> int:
        return len(self.clients)

    @cached_property
    def facility_ids(self) -> tuple[str, ...]:
        return tuple(facility.id for facility in self.facilities)

    @cached_property
    def client_ids(self) -> tuple[str, ...]:
        return tuple(client.id for client in self.clients)

    @cached_property
    def facility_index(self) -> dict[str, int]:
        """Declaration order; every tie-break in the package uses it."""
        return {j: idx for idx, j in enumerate(self.facility_ids)}

    @cached_property
    def opening_costs(self) -> dict[str, float]:
        return {facility.id: facility.opening_cost for facility in self.facilities}

    @cached_property
    def _clients_by_id(self) -> dict[str, Client]:
        return {client.id: client for client in self.clients}

    @cached_property
    def _requirement_by_id(self) -> dict[str, int]:
        return dict(zip(self.client_ids, self.requirement))

    def client(self, client_id: str) -> Client:
        return self._clients_by_id[client_id]

    def has_client(self, client_id: str) -> bool:
        return client_id in self._clients_by_id

    def k_of(self, client_id: str) -> int:
        return self._requirement_by_id[client_id]

    @property
    def k_max(self) -> int:
        return max(self.requirement, default=1)

    @property
    def scalar_k(self) -> int | None:
        """The common requirement if all clients share one, else None."""
        values = set(self.requirement)
        if len(values) == 1:
            return values.pop()
        return None

    @property
    def f_max(self) -> float:
        return max(self.opening_costs.values(), default=0.0)

    @property
    def f_min(self) -> float:
        return min(self.opening_costs.values(), default=0.0)

    def connection_cost_extremes(self, client_ids: Iterable[str] | None = None) -> tuple[float, float]:
        """(c_max, c_min) over the allowed connections of the given clients (all by default)."""
        if client_ids is None:
            client_ids = self.client_ids
        costs = [c for i in client_ids for c in self.client(i).costs.values()]
        if not costs:
            return 0.0, 0.0
        return max(costs), min(costs)

    @property
    def c_max(self) -> float:
        return self.connection_cost_extremes()[0]

    @property
    def c_min(self) -> float:
        return self.connection_cost_extremes()[1]

    def with_arrival_order(self, arrival_order: Iterable[str]) -> "Instance":
        """Same instance, different arrival order."""
        return Instance(
            facilities=self.facilities,
            clients=self.clients,
            requirement=self.requirement,
            metric=self.metric,
            arrival_order=tuple(arrival_order),
        )

    @property
    def content_hash(self) -> str:
        from .serialization import instance_hash
        return instance_hash(self)


@dataclass(frozen=True)
class CostBreakdown:
    facility_cost: float = 0.0
    connection_cost: float = 0.0

    @property
    def total(self) -> float:
        return self.facility_cost + self.connection_cost

    def as_dict(self) -> dict[str, float]:
        return {
            "facility_cost": self.facility_cost,
            "connection_cost": self.connection_cost,
            "total": self.total,
        }


@dataclass
class Solution:
    open_facilities: set[str] = field(default_factory=set)
    assignments: dict[str, set[str]] = field(default_factory=dict)
    cost_breakdown: CostBreakdown = field(default_factory=CostBreakdown)

    def open(self, facility_id: str) -> bool:
        """Open a facility; True if it was closed before."""
        if facility_id in self.open_facilities:
            return False
        self.open_facilities.add(facility_id)
        return True

    def assign(self, client_id: str, facility_id: str) -> bool:
        assigned = self.assignments.setdefault(client_id, set())
        if facility_id in assigned:
            return False
        assigned.add(facility_id)
        return True

    def facilities_of(self, client_id: str) -> set[str]:
        return self.assignments.get(client_id, set())

    def copy(self) -> "Solution":
        return Solution(
            open_facilities=set(self.open_facilities),
            assignments={i: set(js) for i, js in self.assignments.items()},
            cost_breakdown=self.cost_breakdown,
        )

    def as_dict(self) -> dict:
        return {
            "open_facilities": sorted(self.open_facilities),
            "assignments": {i: sorted(js) for i, js in sorted(self.assignments.items())},
            "cost": self.cost_breakdown.as_dict(),
        }


@dataclass(frozen=True)
class Subset:
    id: str
    cost: float
    members: frozenset[int]


@dataclass(frozen=True)
class OsmcInstance:
    """Online set k-multicover: elements 0..n-1 must each lie in k chosen subsets."""
    universe_size: int
    subsets: tuple[Subset, ...]
    k: int
    arrivals: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"Coverage requirement must be at least 1, got {self.k}.")
        for subset in self.subsets:
            if not math.isfinite(subset.cost) or subset.cost < 0:
                raise ValueError(f"Subset {subset.id} has invalid cost {subset.cost}.")
            if any(e < 0 or e >= self.universe_size for e in subset.members):
                raise ValueError(f"Subset {subset.id} references elements outside 0..{self.universe_size - 1}.")
        if len(set(self.arrivals)) != len(self.arrivals):
            raise ValueError("Arriving elements must be distinct.")
        if any(e < 0 or e >= self.universe_size for e in self.arrivals):
            raise ValueError(f"Arrivals reference elements outside 0..{self.universe_size - 1}.")
