from collections.abc import Mapping

from .base import OflAlgorithm, OflDecision


class GreedyOfl(OflAlgorithm):
    """
    Connect to the nearest open facility unless opening the best closed one
    (opening plus connection cost) is strictly cheaper.
    """
    name = "greedy"

    def decide(self, client_id: str, costs: Mapping[str, float], allowed: list[str]) -> OflDecision:
        d, nearest = self.nearest_open(costs, allowed)
        total, candidate = self.best_closed(costs, allowed)
        if candidate is None or d <= total:
            return OflDecision(opened=(), connected_to=nearest)
        return OflDecision(opened=(candidate,), connected_to=candidate)
