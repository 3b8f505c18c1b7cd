import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from mfl.core.exceptions import InfeasibleClient
from mfl.core.instance import Facility, Solution


@dataclass(frozen=True)
class OflDecision:
    opened: tuple[str, ...]
    connected_to: str
    coin: float | None = None


class OflAlgorithm(ABC):
    """
    Online facility location with one connection per client (k=1).

    Implementations keep their own open set, never close a facility and
    never reconnect a client. ``competitive_ratio`` is informational.
    """
    name: ClassVar[str]
    competitive_ratio: ClassVar[str | None] = None

    def __init__(self, facilities: Iterable[Facility], rng: np.random.Generator | None = None):
        facilities = list(facilities)
        self.facility_ids = [f.id for f in facilities]
        self.opening_costs = {f.id: f.opening_cost for f in facilities}
        self.rng = rng if rng is not None else np.random.default_rng()
        self.open_facilities: set[str] = set()
        self.assignments: dict[str, str] = {}

    def on_arrival(self, client_id: str, costs: Mapping[str, float]) -> OflDecision:
        allowed = [j for j in self.facility_ids if j in costs]
        if not allowed:
            raise InfeasibleClient(client=client_id, allowed=0, required=1)
        decision = self.decide(client_id, costs, allowed)
        self.open_facilities.update(decision.opened)
        self.assignments[client_id] = decision.connected_to
        return decision

    @abstractmethod
    def decide(self, client_id: str, costs: Mapping[str, float], allowed: list[str]) -> OflDecision:
        ...

    def nearest_open(self, costs: Mapping[str, float], allowed: list[str], also_open=()) -> tuple[float, str | None]:
        """Cheapest connection to an open facility, ``(inf, None)`` if none is open."""
        candidates = [j for j in allowed if j in self.open_facilities or j in also_open]
        if not candidates:
            return math.inf, None
        j = min(candidates, key=lambda j: costs[j])
        return costs[j], j

    def best_closed(self, costs: Mapping[str, float], allowed: list[str]) -> tuple[float, str | None]:
        """Closed facility minimizing opening plus connection cost."""
        candidates = [j for j in allowed if j not in self.open_facilities]
        if not candidates:
            return math.inf, None
        j = min(candidates, key=lambda j: self.opening_costs[j] + costs[j])
        return self.opening_costs[j] + costs[j], j

    def solution(self) -> Solution:
        return Solution(
            open_facilities=set(self.open_facilities),
            assignments={i: {j} for i, j in self.assignments.items()},
        )
