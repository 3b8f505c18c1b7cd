"""
Seeded instance generators.

Facilities are named ``f0..f{m-1}``, clients ``c0..c{n-1}`` and subsets
``s0..``; costs are rounded to 1e-6 so instance files stay readable.
The same arguments always produce the same instance.
"""
import logging

import numpy as np
from django.conf import settings

from mfl.core.exceptions import InfeasibleRequirement
from mfl.core.instance import Instance, OsmcInstance, Subset

logger = logging.getLogger(__name__)

DECIMALS = 6


def _check_sizes(n: int, m: int, k: int) -> None:
    if n < 1 or m < 1:
        raise ValueError(f"Need at least one client and one facility, got n={n}, m={m}.")
    if k < 1:
        raise ValueError(f"Connection requirement must be at least 1, got {k}.")
    if m < k:
        raise InfeasibleRequirement(k_max=k, m=m)


def _requirement(rng: np.random.Generator, n: int, k: int, k_vector: bool) -> int | list[int]:
    if not k_vector:
        return k
    return [int(k_i) for k_i in rng.integers(1, k + 1, size=n)]


def _opening_costs(rng: np.random.Generator, m: int, cost_range) -> np.ndarray:
    low, high = cost_range or settings.MFL_OPENING_COST_RANGE
    return np.round(rng.uniform(low, high, size=m), DECIMALS)


def gen_euclidean(
    n: int,
    m: int,
    k: int,
    seed: int,
    box_size: float | None = None,
    opening_cost_range: tuple[float, float] | None = None,
    k_vector: bool = False,
) -> Instance:
    """Clients and facilities uniform in a square, connection cost = distance."""
    _check_sizes(n, m, k)
    box_size = box_size or settings.MFL_EUCLIDEAN_BOX_SIZE
    rng = np.random.default_rng(seed)

    facility_points = rng.uniform(0, box_size, size=(m, 2))
    client_points = rng.uniform(0, box_size, size=(n, 2))
    opening = _opening_costs(rng, m, opening_cost_range)
    distances = np.round(
        np.linalg.norm(client_points[:, None, :] - facility_points[None, :, :], axis=2),
        DECIMALS,
    )
    requirement = _requirement(rng, n, k, k_vector)

    facility_ids = [f"f{j}" for j in range(m)]
    return Instance.build(
        facilities=zip(facility_ids, opening.tolist()),
        clients=[(f"c{i}", dict(zip(facility_ids, row.tolist()))) for i, row in enumerate(distances)],
        k=requirement,
        metric=True,
    )


def gen_nonmetric(
    n: int,
    m: int,
    k: int,
    seed: int,
    cost_range: tuple[float, float] | None = None,
    density: float = 1.0,
    opening_cost_range: tuple[float, float] | None = None,
    k_vector: bool = False,
) -> Instance:
    """
    Independent uniform connection costs; each edge is kept with probability
    ``density``. A client row left with fewer than k_i edges is redrawn.
    """
    _check_sizes(n, m, k)
    if not 0 < density <= 1:
        raise ValueError(f"Density must lie in (0, 1], got {density}.")
    low, high = cost_range or settings.MFL_CONNECTION_COST_RANGE
    rng = np.random.default_rng(seed)

    opening = _opening_costs(rng, m, opening_cost_range)
    costs = np.round(rng.uniform(low, high, size=(n, m)), DECIMALS)
    requirement = _requirement(rng, n, k, k_vector)
    k_per_client = np.full(n, k) if isinstance(requirement, int) else np.array(requirement)

    kept = rng.random((n, m)) < density
    redrawn = 0
    for i in range(n):
        while kept[i].sum() < k_per_client[i]:
            kept[i] = rng.random(m) < density
            redrawn += 1
    if redrawn:
        logger.warning("Redrew %d client rows to keep at least k allowed facilities", redrawn)

    facility_ids = [f"f{j}" for j in range(m)]
    clients = [
        (f"c{i}", {facility_ids[j]: float(costs[i, j]) for j in np.flatnonzero(kept[i])})
        for i in range(n)
    ]
    return Instance.build(
        facilities=zip(facility_ids, opening.tolist()),
        clients=clients,
        k=requirement,
        metric=False,
    )


def gen_osmc(
    universe_size: int,
    subset_count: int,
    k: int,
    seed: int,
    density: float = 0.5,
    cost_range: tuple[float, float] | None = None,
) -> OsmcInstance:
    """Random set k-multicover instance; every element lies in at least k subsets, all elements arrive."""
    _check_sizes(universe_size, subset_count, k)
    if not 0 < density <= 1:
        raise ValueError(f"Density must lie in (0, 1], got {density}.")
    rng = np.random.default_rng(seed)

    costs = _opening_costs(rng, subset_count, cost_range)
    members = rng.random((subset_count, universe_size)) < density
    for e in range(universe_size):
        while members[:, e].sum() < k:
            members[:, e] = rng.random(subset_count) < density

    subsets = tuple(
        Subset(id=f"s{s}", cost=float(costs[s]), members=frozenset(int(e) for e in np.flatnonzero(members[s])))
        for s in range(subset_count)
    )
    arrivals = tuple(int(e) for e in rng.permutation(universe_size))
    return OsmcInstance(universe_size=universe_size, subsets=subsets, k=k, arrivals=arrivals)
