class MflError(Exception):
    """
    Base class for algorithm and harness failures.

    Every subclass carries a stable ``code`` which the management commands
    put into their JSON error document.
    """
    code = "mfl_error"
    default_message = "Multi-facility location error."

    def __init__(self, message=None, **params):
        self.params = params
        super().__init__(message or self.default_message.format(**params))


class ForbiddenConnection(MflError):
    code = "forbidden_connection"
    default_message = "Forbidden connection: client {client} cannot connect to facility {facility}."


class InfeasibleRequirement(MflError):
    code = "infeasible_requirement"
    default_message = "Infeasible requirement: k_max={k_max} exceeds the {m} declared facilities."


class InfeasibleClient(MflError):
    code = "infeasible_client"
    default_message = "Infeasible client {client}: {allowed} allowed facilities, {required} required."


class DuplicateClient(MflError):
    code = "duplicate_client"
    default_message = "Client {client} has already arrived."


class UnknownClient(MflError):
    code = "unknown_client"
    default_message = "Client {client} is not present."


class NoResidualPath(MflError):
    code = "no_residual_path"
    default_message = "No residual path from the root to client {client}."


class SaturatedCut(MflError):
    code = "increase_on_saturated_cut"
    default_message = "Increase on saturated cut: weight {weight} is already at least 1."


class EdgeNotPurchased(MflError):
    code = "edge_not_purchased"
    default_message = "Edge {edge} is not purchased."


class InstanceTooLarge(MflError):
    code = "instance_too_large"
    default_message = "Instance too large for exact oracle: {m} facilities, cap is {cap}."


class TraceMismatch(MflError):
    code = "trace_mismatch"
    default_message = "Trace does not match: {reason}."


class InvariantViolation(MflError):
    """A runtime-checked inequality of the analysis did not hold."""
    code = "invariant_violation"
    default_message = "Invariant violated: {invariant}."
