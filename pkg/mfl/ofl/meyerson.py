import math
from collections.abc import Mapping

from .base import OflAlgorithm, OflDecision


class MeyersonOfl(OflAlgorithm):
    """
    Meyerson-style randomized opening over a fixed facility set.

    With d the distance to the nearest open facility and j* the closed
    facility of cheapest opening plus connection cost, j* opens with
    probability min(1, d / f(j*)). Exactly one coin is drawn per arrival,
    including when the probability is 0 or 1, so runs replay draw for draw.
    No competitive guarantee is claimed for heterogeneous facility costs.
    """
    name = "meyerson"
    competitive_ratio = "O(log n) for uniform costs at client locations"

    def open_probability(self, d: float, candidate: str) -> float:
        if math.isinf(d):
            return 1.0
        f = self.opening_costs[candidate]
        if f == 0:
            return 1.0 if d > 0 else 0.0
        return min(1.0, d / f)

    def decide(self, client_id: str, costs: Mapping[str, float], allowed: list[str]) -> OflDecision:
        coin = float(self.rng.random())
        d, nearest = self.nearest_open(costs, allowed)
        _total, candidate = self.best_closed(costs, allowed)

        opened = ()
        if candidate is not None and coin < self.open_probability(d, candidate):
            opened = (candidate,)
        _d, connected_to = self.nearest_open(costs, allowed, also_open=opened)
        return OflDecision(opened=opened, connected_to=connected_to, coin=coin)
