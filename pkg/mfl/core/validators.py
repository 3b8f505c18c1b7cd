import logging
import math
from collections import Counter

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from .instance import Instance

logger = logging.getLogger(__name__)

# Euclidean costs are rounded to 1e-6, so a detour may undercut a direct
# connection by a few rounding steps.
METRIC_SLACK = 1e-5

MAX_REPORTED_METRIC_VIOLATIONS = 20


def _validate_ids(inst: Instance) -> list[ValidationError]:
    errors = []
    for kind, ids in (("facility", inst.facility_ids), ("client", inst.client_ids)):
        for duplicate, count in Counter(ids).items():
            if count > 1:
                errors.append(ValidationError(
                    f"Duplicate {kind} id `{duplicate}` ({count} times).",
                    code="duplicate_id",
                ))
    return errors


def _validate_requirement(inst: Instance) -> list[ValidationError]:
    if len(inst.requirement) != inst.n:
        return [ValidationError(
            f"Requirement vector has {len(inst.requirement)} entries for {inst.n} clients.",
            code="requirement_length",
        )]
    return [
        ValidationError(f"Client `{i}` requires k={k_i}, must be at least 1.", code="invalid_requirement")
        for i, k_i in zip(inst.client_ids, inst.requirement)
        if k_i < 1
    ]


def _validate_cost(value: float, what: str) -> list[ValidationError]:
    if not math.isfinite(value):
        return [ValidationError(f"Non-finite cost {value} for {what}.", code="non_finite_cost")]
    if value < 0:
        return [ValidationError(f"Negative cost {value} for {what}.", code="negative_cost")]
    return []


def _validate_costs(inst: Instance) -> list[ValidationError]:
    errors = []
    declared = set(inst.facility_ids)
    for facility in inst.facilities:
        errors += _validate_cost(facility.opening_cost, f"opening facility `{facility.id}`")
    for client in inst.clients:
        for j, c in client.costs.items():
            if j not in declared:
                errors.append(ValidationError(
                    f"Client `{client.id}` references unknown facility `{j}`.",
                    code="unknown_facility",
                ))
            errors += _validate_cost(c, f"connecting client `{client.id}` to facility `{j}`")
    return errors


def _validate_coverage(inst: Instance) -> list[ValidationError]:
    if len(inst.requirement) != inst.n:
        return []
    declared = set(inst.facility_ids)
    errors = []
    for client, k_i in zip(inst.clients, inst.requirement):
        allowed = sum(1 for j in client.costs if j in declared)
        if allowed < k_i:
            errors.append(ValidationError(
                f"Client `{client.id}` has insufficient allowed facilities: {allowed} allowed, {k_i} required.",
                code="insufficient_allowed_facilities",
            ))
    return errors


def _validate_arrivals(inst: Instance) -> list[ValidationError]:
    errors = []
    known = set(inst.client_ids)
    for i in inst.arrival_order:
        if i not in known:
            errors.append(ValidationError(f"Arrival of unknown client `{i}`.", code="unknown_arrival"))
    for i, count in Counter(inst.arrival_order).items():
        if count > 1:
            errors.append(ValidationError(f"Client `{i}` arrives {count} times.", code="unknown_arrival"))
    return errors


def cost_matrix(inst: Instance) -> np.ndarray:
    """n x m connection costs in declaration order, ``inf`` where forbidden."""
    matrix = np.full((inst.n, inst.m), np.inf)
    index = inst.facility_index
    for row, client in enumerate(inst.clients):
        for j, c in client.costs.items():
            if j in index:
                matrix[row, index[j]] = c
    return matrix


def cheapest_detours(costs: np.ndarray) -> np.ndarray:
    """
    For every pair (i, j) the cheapest three-hop detour
    c(i, j') + c(i', j') + c(i', j). Bipartite costs extend to a metric iff
    no direct connection is more expensive than its cheapest detour.
    """
    detours = np.empty_like(costs)
    for row in range(costs.shape[0]):
        via_client = np.min(costs[row] + costs, axis=1)
        detours[row] = np.min(via_client[:, None] + costs, axis=0)
    return detours


def _validate_metric(inst: Instance) -> list[ValidationError]:
    costs = cost_matrix(inst)
    rows = np.arange(inst.n)
    if inst.n * inst.m > settings.MFL_METRIC_CHECK_EXHAUSTIVE_LIMIT:
        rng = np.random.default_rng(0)
        size = min(inst.n, settings.MFL_METRIC_CHECK_SAMPLE_CLIENTS)
        rows = np.sort(rng.choice(inst.n, size=size, replace=False))
        logger.debug("Metric check sampled %d of %d clients", size, inst.n)
    sample = costs[rows]
    detours = cheapest_detours(sample)
    finite = np.isfinite(sample)
    violating = np.argwhere(finite & (sample > detours + METRIC_SLACK))

    errors = []
    for row, col in violating[:MAX_REPORTED_METRIC_VIOLATIONS]:
        client = inst.client_ids[rows[row]]
        facility = inst.facility_ids[col]
        errors.append(ValidationError(
            f"Triangle inequality violated: c({client}, {facility})={sample[row, col]} "
            f"exceeds a detour of cost {detours[row, col]}.",
            code="metric_violation",
        ))
    if len(violating) > MAX_REPORTED_METRIC_VIOLATIONS:
        errors.append(ValidationError(
            f"... and {len(violating) - MAX_REPORTED_METRIC_VIOLATIONS} more triangle inequality violations.",
            code="metric_violation",
        ))
    return errors


def validate_instance(inst: Instance) -> list[ValidationError]:
    """
    Collect every violated instance invariant. An empty list means the
    instance is well formed; violations are returned, never raised.
    """
    errors = (
        _validate_ids(inst)
        + _validate_requirement(inst)
        + _validate_costs(inst)
        + _validate_coverage(inst)
        + _validate_arrivals(inst)
    )
    if inst.metric and not any(e.code in ("unknown_facility", "non_finite_cost") for e in errors):
        errors += _validate_metric(inst)
    return errors


def check_instance(inst: Instance) -> None:
    """Raise a ValidationError carrying all violations, if there are any."""
    errors = validate_instance(inst)
    if errors:
        raise ValidationError(errors)
