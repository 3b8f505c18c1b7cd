"""
Exact offline optimum by enumerating every facility subset.

Bit j of a subset mask is the j-th declared facility. For each mask the
cost is the opening cost of the subset plus, per client, the sum of its k_i
cheapest allowed connections into the subset (infinite when fewer than k_i
are allowed). Among costs equal within the tolerance the lowest mask wins.
"""
import logging
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from mfl.core import numeric
from mfl.core.evaluation import evaluate
from mfl.core.exceptions import InfeasibleClient, InstanceTooLarge, InvariantViolation
from mfl.core.instance import Instance, Solution

logger = logging.getLogger(__name__)

# cells of the (masks x clients x facilities) block evaluated at once
CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class OracleResult:
    cost: float
    mask: int
    open_facilities: tuple[str, ...]
    assignments: dict[str, tuple[str, ...]]
    subsets_examined: int

    def solution(self) -> Solution:
        return Solution(
            open_facilities=set(self.open_facilities),
            assignments={i: set(js) for i, js in self.assignments.items()},
        )

    def as_dict(self) -> dict:
        return {
            "cost": self.cost,
            "mask": self.mask,
            "open_facilities": list(self.open_facilities),
            "assignments": {i: list(js) for i, js in self.assignments.items()},
            "subsets_examined": self.subsets_examined,
        }


def _arrived_clients(inst: Instance, arrived: Iterable[str] | None) -> list[str]:
    if arrived is None:
        return list(inst.client_ids)
    arrived = set(arrived)
    return [i for i in inst.client_ids if i in arrived]


def _check_oracle_input(inst: Instance, clients: list[str], cap: int) -> None:
    if inst.m > cap:
        raise InstanceTooLarge(m=inst.m, cap=cap)
    for i in clients:
        allowed = len(inst.client(i).costs)
        if allowed < inst.k_of(i):
            raise InfeasibleClient(client=i, allowed=allowed, required=inst.k_of(i))


def _cost_matrix(inst: Instance, clients: list[str]) -> np.ndarray:
    costs = np.full((len(clients), inst.m), np.inf)
    for row, i in enumerate(clients):
        for j, c in inst.client(i).costs.items():
            costs[row, inst.facility_index[j]] = c
    return costs


def _enumerate(opening: np.ndarray, costs: np.ndarray, k: np.ndarray) -> tuple[int, float]:
    """Lowest mask whose cost is within tolerance of the minimum, and that cost."""
    m = opening.size
    n = costs.shape[0]
    k_max = int(k.max(initial=0))
    bit_values = np.arange(m)
    chunk = max(1, CHUNK_CELLS // max(1, n * m))
    picks = bit_values[:k_max] < k[:, None] if n else None

    tol = numeric.tolerance()
    best_mask, best_cost = 0, np.inf
    for start in range(0, 1 << m, chunk):
        masks = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        bits = ((masks[:, None] >> bit_values) & 1).astype(bool)
        total = bits.astype(float) @ opening
        if n:
            reachable = np.where(bits[:, None, :], costs[None, :, :], np.inf)
            cheapest = np.sort(reachable, axis=2)[:, :, :k_max]
            total = total + np.where(picks[None, :, :], cheapest, 0.0).sum(axis=(1, 2))
        chunk_min = float(total.min())
        if not np.isfinite(chunk_min):
            continue
        # masks ascend across chunks: a later chunk wins only if clearly cheaper
        if chunk_min >= best_cost - tol * max(1.0, abs(best_cost)):
            continue
        idx = int(np.flatnonzero(total <= chunk_min + tol * max(1.0, abs(chunk_min)))[0])
        best_mask, best_cost = int(masks[idx]), float(total[idx])
    return best_mask, best_cost


def optimal_offline(inst: Instance, arrived: Iterable[str] | None = None, cap: int | None = None) -> OracleResult:
    """
    Minimum-cost solution serving the ``arrived`` clients (all clients by
    default). The reported cost is ``evaluate`` of the reconstructed
    solution and is cross-checked against the enumerated minimum.
    """
    if cap is None:
        cap = settings.MFL_ORACLE_CAP
    clients = _arrived_clients(inst, arrived)
    _check_oracle_input(inst, clients, cap)

    opening = np.array([facility.opening_cost for facility in inst.facilities], dtype=float)
    k = np.array([inst.k_of(i) for i in clients], dtype=np.int64)
    mask, enumerated = _enumerate(opening, _cost_matrix(inst, clients), k)

    open_facilities = tuple(j for idx, j in enumerate(inst.facility_ids) if mask >> idx & 1)
    assignments = {}
    for i in clients:
        client = inst.client(i)
        reachable = [j for j in open_facilities if client.allows(j)]
        reachable.sort(key=lambda j: (client.cost(j), inst.facility_index[j]))
        assignments[i] = tuple(reachable[:inst.k_of(i)])

    reconstructed = Solution(
        open_facilities=set(open_facilities),
        assignments={i: set(js) for i, js in assignments.items()},
    )
    cost = evaluate(inst, reconstructed).total
    if not numeric.close(cost, enumerated):
        raise InvariantViolation(invariant=f"oracle enumeration {enumerated} disagrees with evaluation {cost}")
    logger.debug("Opt=%s over %d clients via mask %#x", cost, len(clients), mask)
    return OracleResult(
        cost=cost,
        mask=mask,
        open_facilities=open_facilities,
        assignments=assignments,
        subsets_examined=1 << inst.m,
    )


def prefix_opts(inst: Instance, arrival_order: Iterable[str] | None = None, cap: int | None = None) -> list[float]:
    """Opt of every arrival prefix, starting with the empty prefix."""
    if arrival_order is None:
        arrival_order = inst.arrival_order
    arrival_order = list(arrival_order)
    opts = [0.0]
    for p in range(1, len(arrival_order) + 1):
        opts.append(optimal_offline(inst, arrival_order[:p], cap=cap).cost)
        if not numeric.leq(opts[-2], opts[-1]):
            raise InvariantViolation(invariant=f"Opt decreased from {opts[-2]} to {opts[-1]} at prefix {p}")
    return opts
