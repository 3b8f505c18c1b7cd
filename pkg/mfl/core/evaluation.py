import math
from collections.abc import Iterable

from .exceptions import ForbiddenConnection, UnknownClient
from .instance import CostBreakdown, Instance, Solution


def evaluate(inst: Instance, sol: Solution) -> CostBreakdown:
    """
    Opening costs of the open facilities plus connection costs of every
    client-facility assignment pair.

    Sums are exactly rounded (``math.fsum``), so the result does not depend
    on the order facilities were opened or clients assigned.
    """
    opening_costs = inst.opening_costs
    facility_cost = math.fsum(opening_costs[j] for j in sol.open_facilities)

    connection_costs = []
    for i, facilities in sol.assignments.items():
        if not inst.has_client(i):
            raise UnknownClient(client=i)
        client = inst.client(i)
        for j in facilities:
            c = client.cost(j)
            if c is None:
                raise ForbiddenConnection(client=i, facility=j)
            connection_costs.append(c)

    return CostBreakdown(
        facility_cost=facility_cost,
        connection_cost=math.fsum(connection_costs),
    )


def priced(inst: Instance, sol: Solution) -> Solution:
    """Attach the evaluated cost breakdown to ``sol`` and return it."""
    sol.cost_breakdown = evaluate(inst, sol)
    return sol


def is_feasible(inst: Instance, arrived: Iterable[str], sol: Solution) -> bool:
    """Every arrived client is connected to at least k_i distinct open, allowed facilities."""
    for i in arrived:
        facilities = sol.facilities_of(i)
        if len(facilities) < inst.k_of(i):
            return False
        client = inst.client(i)
        for j in facilities:
            if j not in sol.open_facilities or not client.allows(j):
                return False
    return True
