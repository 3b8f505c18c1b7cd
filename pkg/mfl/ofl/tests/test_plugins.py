import numpy as np
from django.test import SimpleTestCase

from mfl.bench.generators import gen_euclidean
from mfl.core.evaluation import is_feasible
from mfl.core.exceptions import InfeasibleClient
from mfl.core.instance import Facility
from mfl.ofl.greedy import GreedyOfl
from mfl.ofl.meyerson import MeyersonOfl
from mfl.ofl.registry import OFL_ALGORITHMS, get_ofl_algorithm


def facilities(**opening_costs):
    return [Facility(j, cost) for j, cost in opening_costs.items()]


class GreedyOflTests(SimpleTestCase):

    def test_first_client_opens_cheapest_total(self):
        ofl = GreedyOfl(facilities(A=5.0, B=1.0))
        decision = ofl.on_arrival("c1", {"A": 1.0, "B": 2.0})
        self.assertEqual(decision.opened, ("B",))
        self.assertEqual(decision.connected_to, "B")
        self.assertIsNone(decision.coin)

    def test_connect_when_cheaper_than_opening(self):
        ofl = GreedyOfl(facilities(A=1.0, B=2.0))
        ofl.on_arrival("c1", {"A": 1.0, "B": 5.0})
        decision = ofl.on_arrival("c2", {"A": 1.0, "B": 1.0})
        self.assertEqual(decision.opened, ())
        self.assertEqual(decision.connected_to, "A")

    def test_open_when_strictly_cheaper(self):
        ofl = GreedyOfl(facilities(A=1.0, B=1.0))
        ofl.on_arrival("c1", {"A": 0.0, "B": 9.0})
        decision = ofl.on_arrival("c2", {"A": 9.0, "B": 0.5})
        self.assertEqual(decision.opened, ("B",))
        self.assertEqual(ofl.open_facilities, {"A", "B"})

    def test_tie_goes_to_first_declared(self):
        ofl = GreedyOfl(facilities(A=2.0, B=1.0))
        self.assertEqual(ofl.on_arrival("c1", {"A": 1.0, "B": 2.0}).opened, ("A",))

    def test_equal_connection_and_opening_cost_connects(self):
        ofl = GreedyOfl(facilities(A=1.0, B=1.0))
        ofl.on_arrival("c1", {"A": 0.0, "B": 5.0})
        self.assertEqual(ofl.on_arrival("c2", {"A": 2.0, "B": 1.0}).opened, ())

    def test_no_allowed_facility(self):
        ofl = GreedyOfl(facilities(A=1.0))
        with self.assertRaises(InfeasibleClient):
            ofl.on_arrival("c1", {})


class MeyersonOflTests(SimpleTestCase):

    def test_first_arrival_opens(self):
        for seed in range(10):
            ofl = MeyersonOfl(facilities(A=5.0, B=1.0), rng=np.random.default_rng(seed))
            decision = ofl.on_arrival("c1", {"A": 1.0, "B": 2.0})
            self.assertEqual(decision.opened, ("B",))
            self.assertEqual(decision.connected_to, "B")

    def test_colocated_client_never_opens(self):
        for seed in range(10):
            ofl = MeyersonOfl(facilities(A=5.0, B=1.0), rng=np.random.default_rng(seed))
            ofl.on_arrival("c1", {"A": 1.0, "B": 2.0})
            decision = ofl.on_arrival("c2", {"A": 1.0, "B": 0.0})
            self.assertEqual(decision.opened, ())
            self.assertEqual(decision.connected_to, "B")

    def test_distance_beyond_opening_cost_always_opens(self):
        ofl = MeyersonOfl(facilities(A=1.0, B=1.0), rng=np.random.default_rng(0))
        ofl.on_arrival("c1", {"A": 0.0, "B": 10.0})
        self.assertEqual(ofl.open_probability(d=10.0, candidate="B"), 1.0)
        decision = ofl.on_arrival("c2", {"A": 10.0, "B": 0.0})
        self.assertEqual(decision.opened, ("B",))
        self.assertEqual(decision.connected_to, "B")

    def test_probability_is_distance_over_opening_cost(self):
        ofl = MeyersonOfl(facilities(A=4.0))
        self.assertEqual(ofl.open_probability(1.0, "A"), 0.25)
        self.assertEqual(ofl.open_probability(float("inf"), "A"), 1.0)
        zero = MeyersonOfl(facilities(Z=0.0))
        self.assertEqual(zero.open_probability(0.0, "Z"), 0.0)
        self.assertEqual(zero.open_probability(0.5, "Z"), 1.0)

    def test_one_coin_per_arrival(self):
        ofl = MeyersonOfl(facilities(A=1.0, B=3.0), rng=np.random.default_rng(42))
        coins = [
            ofl.on_arrival(f"c{idx}", {"A": 0.0, "B": float(idx)}).coin
            for idx in range(5)
        ]
        self.assertEqual(coins, np.random.default_rng(42).random(5).tolist())


class PluginPropertiesTests(SimpleTestCase):

    def run_plugin(self, name, inst, seed):
        ofl = get_ofl_algorithm(name, inst.facilities, seed=seed)
        history = []
        for idx, i in enumerate(inst.arrival_order):
            ofl.on_arrival(i, inst.client(i).costs)
            self.assertTrue(is_feasible(inst, inst.arrival_order[:idx + 1], ofl.solution()))
            history.append(set(ofl.open_facilities))
        return ofl, history

    def test_feasible_monotone_and_deterministic(self):
        inst = gen_euclidean(n=8, m=6, k=1, seed=7)
        for name in OFL_ALGORITHMS:
            ofl, history = self.run_plugin(name, inst, seed=3)
            again, _history = self.run_plugin(name, inst, seed=3)
            with self.subTest(plugin=name):
                self.assertTrue(all(before <= after for before, after in zip(history, history[1:])))
                self.assertEqual(ofl.assignments, again.assignments)
                self.assertEqual(ofl.open_facilities, again.open_facilities)

    def test_unknown_plugin(self):
        with self.assertRaises(ValueError):
            get_ofl_algorithm("fotakis", [])
