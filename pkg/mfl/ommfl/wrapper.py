"""
Transformation of an online facility location algorithm (one connection per
client) into an online multi-facility location algorithm.

The plug-in runs on the instance as if k were 1. On the first arrival the
wrapper additionally opens the cheapest k_max - 1 facilities other than the
plug-in's choice; these stay closed as far as the plug-in knows. Every client
is then connected to k_i - 1 further open facilities, the cheapest first.

Two ledgers are kept: C (everything the combined algorithm pays, opening
costs charged once) and C' (what the plug-in alone would have paid).
"""
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from mfl.core import numeric
from mfl.core.exceptions import (
    DuplicateClient,
    InfeasibleClient,
    InfeasibleRequirement,
    InvariantViolation,
)
from mfl.core.instance import CostBreakdown, Facility, Instance, Solution
from mfl.flowgraph.graph import TraceSink
from mfl.ofl.base import OflAlgorithm
from mfl.ofl.registry import get_ofl_algorithm

logger = logging.getLogger(__name__)


@dataclass
class Ledger:
    facility_costs: list[float] = field(default_factory=list)
    connection_costs: list[float] = field(default_factory=list)

    def breakdown(self) -> CostBreakdown:
        return CostBreakdown(
            facility_cost=math.fsum(self.facility_costs),
            connection_cost=math.fsum(self.connection_costs),
        )


class OmmflState:
    def __init__(
        self,
        ofl: OflAlgorithm,
        facilities: Iterable[Facility],
        k: int | Mapping[str, int],
        instance: Instance | None = None,
        sink: TraceSink | None = None,
    ):
        facilities = list(facilities)
        k_max = k if isinstance(k, int) else max(k.values(), default=1)
        if k_max < 1:
            raise ValueError(f"Need k >= 1, got k={k_max}.")
        if len(facilities) < k_max:
            raise InfeasibleRequirement(k_max=k_max, m=len(facilities))

        self.ofl = ofl
        self.k = k
        self.k_max = k_max
        self.instance = instance
        self.facility_ids = [f.id for f in facilities]
        self.facility_index = {j: idx for idx, j in enumerate(self.facility_ids)}
        self.opening_costs = {f.id: f.opening_cost for f in facilities}
        self.solution = Solution()
        self.wrapper_open: set[str] = set()
        self.make_up_open: set[str] = set()
        self.combined = Ledger()
        self.plugin = Ledger()
        self.arrived: list[str] = []
        self.seen_costs: list[float] = []
        self._sink = sink

    @classmethod
    def for_instance(
        cls,
        inst: Instance,
        ofl_name: str,
        seed: int | None,
        sink: TraceSink | None = None,
    ) -> "OmmflState":
        ofl = get_ofl_algorithm(ofl_name, inst.facilities, seed=seed)
        k = inst.scalar_k or dict(zip(inst.client_ids, inst.requirement))
        return cls(ofl, inst.facilities, k, instance=inst, sink=sink)

    @property
    def plugin_open(self) -> set[str]:
        return self.ofl.open_facilities

    def k_of(self, client_id: str) -> int:
        if isinstance(self.k, int):
            return self.k
        return self.k[client_id]

    def _emit(self, event: str, **payload):
        if self._sink is not None:
            self._sink(event, **payload)

    def _open(self, facility_id: str, by: str) -> None:
        if self.solution.open(facility_id):
            self.combined.facility_costs.append(self.opening_costs[facility_id])
            self._emit("open", facility=facility_id, by=by)
            if by == "wrapper":
                self.wrapper_open.add(facility_id)

    def _connect(self, client_id: str, facility_id: str, cost: float, via: str) -> None:
        self.solution.assign(client_id, facility_id)
        self.combined.connection_costs.append(cost)
        self._emit("serve", client=client_id, facility=facility_id, via=via)

    def _cheapest(self, candidates, key) -> list[str]:
        return sorted(candidates, key=lambda j: (key(j), self.facility_index[j]))

    def on_arrival(self, client_id: str, costs: Mapping[str, float]) -> set[str]:
        """Serve one client; returns the facilities it is connected to."""
        k_i = self.k_of(client_id)
        if client_id in self.solution.assignments:
            raise DuplicateClient(client=client_id)
        allowed = [j for j in self.facility_ids if j in costs]
        if len(allowed) < k_i:
            raise InfeasibleClient(client=client_id, allowed=len(allowed), required=k_i)
        self._emit("arrival", client=client_id, k=k_i)
        self.seen_costs.extend(costs[j] for j in allowed)

        # step 1: the plug-in alone
        decision = self.ofl.on_arrival(client_id, costs)
        for j in decision.opened:
            self.plugin.facility_costs.append(self.opening_costs[j])
            self._open(j, by="plugin")
        primary = decision.connected_to
        self.plugin.connection_costs.append(costs[primary])
        self._connect(client_id, primary, costs[primary], via="plugin")

        # step 2: first client only
        if not self.arrived:
            closed = [j for j in self.facility_ids if j not in self.solution.open_facilities and j != primary]
            for j in self._cheapest(closed, self.opening_costs.get)[:self.k_max - 1]:
                self._open(j, by="wrapper")

        # step 3
        extras_needed = k_i - 1
        if extras_needed:
            open_allowed = [j for j in allowed if j in self.solution.open_facilities and j != primary]
            extras = self._cheapest(open_allowed, costs.get)[:extras_needed]
            deficit = extras_needed - len(extras)
            if deficit > 0:
                closed_allowed = [j for j in allowed if j not in self.solution.open_facilities]
                make_up = self._cheapest(closed_allowed, lambda j: self.opening_costs[j] + costs[j])[:deficit]
                logger.warning(
                    "Client %s reaches only %d open facilities, opening %s on top",
                    client_id, len(extras) + 1, make_up,
                )
                for j in make_up:
                    self._open(j, by="wrapper")
                    self.make_up_open.add(j)
                extras += make_up
            for j in extras:
                self._connect(client_id, j, costs[j], via="wrapper")

        served = self.solution.facilities_of(client_id)
        if len(served) != k_i:
            raise InvariantViolation(invariant=f"client {client_id} connected to {len(served)} facilities, not {k_i}")
        self.arrived.append(client_id)
        logger.debug("Client %s connected to %s", client_id, sorted(served))
        return set(served)

    def paid_cost(self) -> float:
        return self.combined.breakdown().total


def _spread(extreme_ratio: float, k: int) -> float:
    """(k - 1) * ratio, where k = 1 contributes nothing even for an unbounded ratio."""
    if k == 1:
        return 0.0
    return extreme_ratio * (k - 1)


def cost_multiplier(f_max: float, f_min: float, c_max: float, c_min: float, k: int) -> float:
    """2 + (f_max/f_min)(k-1) + (c_max/c_min)(k-1), the factor over the plug-in cost."""
    return 2 + _spread(numeric.ratio(f_max, f_min), k) + _spread(numeric.ratio(c_max, c_min), k)


@dataclass(frozen=True)
class DecompositionReport:
    combined: CostBreakdown
    plugin: CostBreakdown
    f_max: float
    f_min: float
    c_max: float
    c_min: float
    k: int
    prefix_c_max: float
    prefix_c_min: float
    make_up_openings: int = 0

    def facility_cost_bound(self) -> float:
        return self.plugin.facility_cost + self.f_max * (self.k - 1)

    def connection_cost_bound(self) -> float:
        multiplier = 1 + _spread(numeric.ratio(self.c_max, self.c_min), self.k)
        return numeric.scaled(self.plugin.connection_cost, multiplier)

    def total_cost_bound(self) -> float:
        multiplier = cost_multiplier(self.f_max, self.f_min, self.c_max, self.c_min, self.k)
        return numeric.scaled(self.plugin.total, multiplier)

    def violations(self) -> list[str]:
        checks = {
            "facility_cost": (self.combined.facility_cost, self.facility_cost_bound()),
            "connection_cost": (self.combined.connection_cost, self.connection_cost_bound()),
            "total_cost": (self.combined.total, self.total_cost_bound()),
        }
        if self.make_up_openings:
            # make-up openings are not covered by the opening cost bounds
            del checks["facility_cost"], checks["total_cost"]
        return [name for name, (value, bound) in checks.items() if not numeric.leq(value, bound)]

    def check(self) -> "DecompositionReport":
        violated = self.violations()
        if violated:
            raise InvariantViolation(invariant=f"cost decomposition bounds violated: {', '.join(violated)}")
        return self

    def as_dict(self) -> dict:
        return {
            "combined": self.combined.as_dict(),
            "plugin": self.plugin.as_dict(),
            "f_max": self.f_max,
            "f_min": self.f_min,
            "c_max": self.c_max,
            "c_min": self.c_min,
            "prefix_c_max": self.prefix_c_max,
            "prefix_c_min": self.prefix_c_min,
            "k": self.k,
            "make_up_openings": self.make_up_openings,
            "bounds": {
                "facility_cost": self.facility_cost_bound(),
                "connection_cost": self.connection_cost_bound(),
                "total_cost": self.total_cost_bound(),
            },
        }


def decomposition_report(state: OmmflState) -> DecompositionReport:
    """
    Both ledgers with the cost extremes the bounds are stated in. c_max and
    c_min come from the whole instance when the state knows it, otherwise
    from the arrived clients; the arrived-client extremes are always reported.
    """
    if not state.arrived:
        raise ValueError("No client has arrived yet.")
    prefix_c_max, prefix_c_min = max(state.seen_costs), min(state.seen_costs)
    if state.instance is not None:
        c_max, c_min = state.instance.connection_cost_extremes()
    else:
        c_max, c_min = prefix_c_max, prefix_c_min
    opening_costs = state.opening_costs.values()
    return DecompositionReport(
        combined=state.combined.breakdown(),
        plugin=state.plugin.breakdown(),
        f_max=max(opening_costs),
        f_min=min(opening_costs),
        c_max=c_max,
        c_min=c_min,
        k=state.k_max,
        prefix_c_max=prefix_c_max,
        prefix_c_min=prefix_c_min,
        make_up_openings=len(state.make_up_open),
    )
