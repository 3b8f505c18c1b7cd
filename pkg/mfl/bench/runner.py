"""
Seeded trials, seed batches and the worst arrival order search.

Every trial checks feasibility after each arrival and, when the exact
oracle covers the instance, that the paid cost is at least Opt.
"""
import itertools
import logging
import math
import multiprocessing as mpp
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import django
import numpy as np
from django.apps import apps
from django.conf import settings

from mfl.core import numeric
from mfl.core.evaluation import evaluate, is_feasible, priced
from mfl.core.exceptions import DuplicateClient, InstanceTooLarge, InvariantViolation
from mfl.core.instance import Instance, Solution
from mfl.core.serialization import instance_from_dict, instance_to_dict
from mfl.flowgraph.graph import TraceSink
from mfl.ofl.registry import get_ofl_algorithm
from mfl.ommfl.wrapper import DecompositionReport, OmmflState, decomposition_report
from mfl.onmfl.algorithm import OnmflState, PurchaseReason
from mfl.oracle.exhaustive import optimal_offline

from .reports import TrialReport
from .trace import RunTrace

logger = logging.getLogger(__name__)

EXHAUSTIVE_ORDER_LIMIT = 8


class Algorithm(StrEnum):
    ONMFL = "onmfl"
    OMMFL = "ommfl"
    OFL = "ofl"


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: Algorithm = Algorithm.ONMFL
    ofl: str = "greedy"
    oracle_cap: int | None = None

    @property
    def label(self) -> str:
        if self.algorithm == Algorithm.ONMFL:
            return str(self.algorithm)
        return f"{self.algorithm}:{self.ofl}"


class BareOflState:
    """The OFL plug-in on its own, for instances where every client needs one facility."""

    def __init__(self, inst: Instance, ofl_name: str, seed: int | None, sink: TraceSink | None = None):
        if inst.k_max != 1:
            raise ValueError(f"A bare OFL plug-in serves k=1 only, the instance asks for k_max={inst.k_max}.")
        self.instance = inst
        self.ofl = get_ofl_algorithm(ofl_name, inst.facilities, seed=seed)
        self.solution = Solution()
        self._sink = sink

    def _emit(self, event: str, **payload):
        if self._sink is not None:
            self._sink(event, **payload)

    def on_arrival(self, client_id: str, costs: Mapping[str, float]) -> str:
        if client_id in self.solution.assignments:
            raise DuplicateClient(client=client_id)
        self._emit("arrival", client=client_id, k=1)
        decision = self.ofl.on_arrival(client_id, costs)
        for j in decision.opened:
            if self.solution.open(j):
                self._emit("open", facility=j, by="plugin")
        self.solution.assign(client_id, decision.connected_to)
        self._emit("serve", client=client_id, facility=decision.connected_to, via="plugin")
        return decision.connected_to

    def paid_cost(self) -> float:
        return evaluate(self.instance, self.solution).total


@dataclass
class TrialOutcome:
    solution: Solution
    trace: RunTrace
    row: dict
    decomposition: DecompositionReport | None = None


def _build_state(inst: Instance, config: AlgorithmConfig, seed: int | None, sink: TraceSink):
    match config.algorithm:
        case Algorithm.ONMFL:
            return OnmflState.for_instance(inst, seed, sink=sink)
        case Algorithm.OMMFL:
            return OmmflState.for_instance(inst, config.ofl, seed, sink=sink)
        case Algorithm.OFL:
            return BareOflState(inst, config.ofl, seed, sink=sink)
    raise ValueError(f"Unknown algorithm `{config.algorithm}`.")


def oracle_cost(inst: Instance, arrived: Iterable[str], cap: int | None = None) -> float | None:
    """Opt of the arrived clients, or None when the instance is beyond the oracle cap."""
    try:
        return optimal_offline(inst, arrived, cap=cap).cost
    except InstanceTooLarge as exc:
        logger.warning("No exact Opt: %s", exc)
        return None


def run_trial(
    inst: Instance,
    arrival_order: Sequence[str] | None = None,
    config: AlgorithmConfig = AlgorithmConfig(),
    seed: int | None = 0,
    opt: float | None = None,
    record: bool = True,
) -> TrialOutcome:
    """
    Run one algorithm over one arrival order. ``opt`` skips the oracle call
    when the caller already knows Opt of the arrived set. With ``record``
    off the trace keeps its header and final record but no events.
    """
    if arrival_order is None:
        arrival_order = inst.arrival_order
    arrival_order = list(arrival_order)

    trace = RunTrace.start(inst, config.label, seed, arrival_order, ofl=config.ofl)
    state = _build_state(inst, config, seed, trace.emit if record else None)
    if isinstance(state, OnmflState):
        trace.header.update(alpha=state.alpha.alpha, draw_count=state.alpha.draw_count)

    arrived = []
    for i in arrival_order:
        state.on_arrival(i, inst.client(i).costs)
        arrived.append(i)
        if not is_feasible(inst, arrived, state.solution):
            raise InvariantViolation(invariant=f"infeasible solution after client {i} arrived")

    solution = priced(inst, state.solution)
    paid = state.paid_cost()
    row = {
        "seed": seed,
        "algorithm": str(config.algorithm),
        "ofl": config.ofl if config.algorithm != Algorithm.ONMFL else None,
        "instance_hash": inst.content_hash,
        "n": len(arrival_order),
        "m": inst.m,
        "k_max": inst.k_max,
        "facility_cost": solution.cost_breakdown.facility_cost,
        "connection_cost": solution.cost_breakdown.connection_cost,
        "cost": solution.cost_breakdown.total,
        "paid": paid,
    }

    decomposition = None
    if isinstance(state, OnmflState):
        by_reason = state.cost_by_reason()
        if not numeric.close(math.fsum(by_reason.values()), paid):
            raise InvariantViolation(invariant=f"purchases by reason do not add up to the paid cost {paid}")
        row.update(
            alpha=state.alpha.alpha,
            rounding_cost=by_reason[PurchaseReason.ROUNDING],
            fallback_cost=by_reason[PurchaseReason.FALLBACK],
            free_cost=by_reason[PurchaseReason.FREE],
            rounding_paths=state.path_acquisitions[PurchaseReason.ROUNDING],
            fallback_paths=state.path_acquisitions[PurchaseReason.FALLBACK],
            free_paths=state.path_acquisitions[PurchaseReason.FREE],
        )
    elif isinstance(state, OmmflState) and arrival_order:
        decomposition = decomposition_report(state).check()
        row["plugin_cost"] = decomposition.plugin.total

    if opt is None:
        opt = oracle_cost(inst, arrival_order, cap=config.oracle_cap)
    row["opt"] = opt
    row["ratio"] = numeric.ratio(paid, opt) if opt is not None else None
    if row["ratio"] is not None and row["ratio"] < 1 - numeric.tolerance():
        raise InvariantViolation(invariant=f"online cost {paid} below the offline optimum {opt}")

    trace.finish(solution, paid, opt=opt)
    logger.debug("Trial %s seed=%s paid=%s opt=%s", config.label, seed, paid, opt)
    return TrialOutcome(solution=solution, trace=trace, row=row, decomposition=decomposition)


_batch = {}


def init_batch_worker(data: dict, config: AlgorithmConfig, opt: float | None) -> None:
    if not apps.ready:
        django.setup()
    _batch.update(inst=instance_from_dict(data), config=config, opt=opt)


def run_batch_trial(task: tuple[int, Sequence[str], int]) -> dict:
    order_idx, order, seed = task
    outcome = run_trial(_batch["inst"], order, _batch["config"], seed, opt=_batch["opt"], record=False)
    return {"order": order_idx, **outcome.row}


def run_batch(
    inst: Instance,
    config: AlgorithmConfig,
    seeds: Iterable[int],
    orders: Sequence[Sequence[str]] | None = None,
    workers: int | None = None,
) -> TrialReport:
    """
    Every seed on every arrival order; Opt is computed once since all
    orders cover the same clients. Trials are not traced. ``workers`` 0
    runs them in this process, a negative value uses every CPU.
    """
    if orders is None:
        orders = [inst.arrival_order]
    if workers is None:
        workers = settings.MFL_WORKERS
    seeds = list(seeds)
    opt = oracle_cost(inst, orders[0], cap=config.oracle_cap) if orders else None
    tasks = [(order_idx, tuple(order), seed) for order_idx, order in enumerate(orders) for seed in seeds]

    if workers != 0 and len(tasks) > 1:
        n_proc = mpp.cpu_count() if workers < 0 else workers
        with mpp.Pool(
            processes=n_proc,
            initializer=init_batch_worker,
            initargs=(instance_to_dict(inst), config, opt),
        ) as pool:
            rows = pool.map(run_batch_trial, tasks, chunksize=max(1, len(tasks) // (4 * n_proc)))
    else:
        rows = [
            {"order": order_idx, **run_trial(inst, order, config, seed, opt=opt, record=False).row}
            for order_idx, order, seed in tasks
        ]

    report = TrialReport.from_rows(rows, inst)
    logger.info(
        "%s: %d trials, mean ratio %s, max ratio %s",
        config.label, len(rows), report.mean_ratio, report.max_ratio,
    )
    return report


def sample_orders(inst: Instance, count: int, seed: int | None) -> list[tuple[str, ...]]:
    rng = np.random.default_rng(seed)
    client_ids = np.array(inst.client_ids, dtype=object)
    return [tuple(client_ids[rng.permutation(inst.n)]) for _ in range(count)]


@dataclass(frozen=True)
class WorstOrder:
    order: tuple[str, ...]
    ratio: float
    mean_ratio: float
    orders_evaluated: int
    exhaustive: bool
    order_ratios: list[float] = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {
            "order": list(self.order),
            "ratio": self.ratio,
            "mean_ratio": self.mean_ratio,
            "orders_evaluated": self.orders_evaluated,
            "exhaustive": self.exhaustive,
        }


def worst_order_search(
    inst: Instance,
    config: AlgorithmConfig,
    seeds: Iterable[int],
    samples: int | None = None,
    sample_seed: int | None = 0,
) -> WorstOrder:
    """
    Arrival order with the highest mean ratio over ``seeds``. All n!
    orders are tried for n <= 8, otherwise ``samples`` random ones.
    """
    seeds = list(seeds)
    exhaustive = inst.n <= EXHAUSTIVE_ORDER_LIMIT
    if exhaustive:
        orders = itertools.permutations(inst.client_ids)
    else:
        orders = sample_orders(inst, samples or settings.MFL_WORST_ORDER_SAMPLES, sample_seed)

    opt = optimal_offline(inst, cap=config.oracle_cap).cost
    worst, worst_ratio, order_ratios = None, -math.inf, []
    for order in orders:
        ratios = [run_trial(inst, order, config, seed, opt=opt, record=False).row["ratio"] for seed in seeds]
        ratio = float(np.mean(ratios))
        order_ratios.append(ratio)
        if ratio > worst_ratio:
            worst, worst_ratio = tuple(order), ratio

    logger.info("Worst of %d orders: %s with ratio %.4f", len(order_ratios), worst, worst_ratio)
    return WorstOrder(
        order=worst,
        ratio=worst_ratio,
        mean_ratio=float(np.mean(order_ratios)),
        orders_evaluated=len(order_ratios),
        exhaustive=exhaustive,
        order_ratios=order_ratios,
    )
