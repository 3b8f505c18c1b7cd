"""
Property suites over generated instances. All tests here are tagged
``acceptance``; run them with ``./manage.py test --tag acceptance``.
"""
import math
from collections import defaultdict

from django.test import SimpleTestCase, tag

from mfl.bench.generators import gen_euclidean, gen_nonmetric
from mfl.bench.reports import onmfl_envelope
from mfl.bench.runner import Algorithm, AlgorithmConfig, run_batch, run_trial, sample_orders
from mfl.bench.trace import replay
from mfl.core.evaluation import evaluate
from mfl.oracle.exhaustive import optimal_offline

SUITE_SIZE = 1000
ENVELOPE_CONSTANT = 8


def suite_instance(idx):
    """n <= 8, m <= 10, k in 1..3; metric and non-metric, every fourth with per-client k."""
    k = 1 + idx % 3
    n = 1 + idx % 8
    m = max(k, 2 + (idx * 7) % 9)
    k_vector = idx % 4 == 3
    if idx % 2:
        return gen_nonmetric(n, m, k, seed=idx, density=0.7, k_vector=k_vector)
    return gen_euclidean(n, m, k, seed=idx, k_vector=k_vector)


@tag("acceptance")
class FeasibilitySuiteTests(SimpleTestCase):
    """
    One pass over the generated suite; run_trial already checks feasibility
    after every arrival and the ratio against Opt, the checks below look at
    the traces.
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.outcomes = defaultdict(list)
        for idx in range(SUITE_SIZE):
            inst = suite_instance(idx)
            opt = optimal_offline(inst)
            cls.outcomes["opt"].append((inst, opt))
            for config in (AlgorithmConfig(Algorithm.ONMFL), AlgorithmConfig(Algorithm.OMMFL, ofl="greedy")):
                outcome = run_trial(inst, config=config, seed=idx, opt=opt.cost)
                cls.outcomes[config.algorithm].append((inst, outcome))

    def test_every_trial_finished(self):
        self.assertEqual(len(self.outcomes[Algorithm.ONMFL]), SUITE_SIZE)
        self.assertEqual(len(self.outcomes[Algorithm.OMMFL]), SUITE_SIZE)

    def test_increase_cost_below_two(self):
        for _inst, outcome in self.outcomes[Algorithm.ONMFL]:
            per_cut = defaultdict(list)
            for event in outcome.trace.events_of("increase"):
                self.assertTrue(math.isclose(
                    event["cost"] * event["delta"], event["old"] + 1 / event["size"], rel_tol=1e-9, abs_tol=1e-12,
                ))
                per_cut[event["cut_id"]].append(event["cost"] * event["delta"])
            self.assertTrue(all(math.fsum(charged) < 2 for charged in per_cut.values()))

    def test_flow_reaches_one(self):
        for _inst, outcome in self.outcomes[Algorithm.ONMFL]:
            self.assertTrue(all(e["value"] >= 1 - 1e-9 for e in outcome.trace.events_of("flow")))

    def test_online_never_beats_offline(self):
        for algorithm in (Algorithm.ONMFL, Algorithm.OMMFL):
            for _inst, outcome in self.outcomes[algorithm]:
                self.assertGreaterEqual(outcome.row["ratio"], 1 - 1e-9)

    def test_oracle_matches_evaluation(self):
        for inst, opt in self.outcomes["opt"]:
            self.assertEqual(evaluate(inst, opt.solution()).total, opt.cost)


@tag("acceptance")
class RatioEnvelopeTests(SimpleTestCase):

    def assert_within_envelope(self, inst, seeds=200, orders=50):
        report = run_batch(
            inst, AlgorithmConfig(), range(seeds), orders=sample_orders(inst, orders, seed=0), workers=-1
        )
        bound = ENVELOPE_CONSTANT * onmfl_envelope(inst.k_max, inst.n, inst.m)
        self.assertLessEqual(report.max_ratio, bound)
        self.assertGreaterEqual(report.trials["ratio"].min(), 1 - 1e-9)

        stats = report.fallback_statistics()
        self.assertLessEqual(stats["mean_fallback_cost"], stats["mean_rounding_cost"])

    def test_eight_facilities(self):
        self.assert_within_envelope(gen_nonmetric(n=6, m=8, k=2, seed=0))

    def test_ten_facilities(self):
        self.assert_within_envelope(gen_nonmetric(n=8, m=10, k=3, seed=0))


@tag("acceptance")
class DeterminismTests(SimpleTestCase):

    def test_rerun_and_replay(self):
        configs = [
            AlgorithmConfig(Algorithm.ONMFL),
            AlgorithmConfig(Algorithm.OMMFL, ofl="greedy"),
            AlgorithmConfig(Algorithm.OMMFL, ofl="meyerson"),
        ]
        for idx in range(50):
            inst = suite_instance(idx)
            for config in configs:
                first = run_trial(inst, config=config, seed=idx)
                second = run_trial(inst, config=config, seed=idx)
                with self.subTest(idx=idx, algorithm=config.label):
                    self.assertEqual(first.row, second.row)
                    self.assertEqual(first.trace.events, second.trace.events)
                    replayed = replay(first.trace, inst)
                    self.assertEqual(replayed.cost_breakdown.as_dict(), first.trace.final["cost"])
