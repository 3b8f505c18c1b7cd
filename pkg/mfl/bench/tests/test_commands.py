import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.test import SimpleTestCase, TestCase, override_settings

from mfl.bench.models import BenchmarkRun
from mfl.core.serialization import load_instance


class CommandTestMixin:

    def setUp(self):
        super().setUp()
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.out = Path(tmp.name)

    def call(self, name, *args):
        stdout = StringIO()
        call_command(name, *args, "--out", str(self.out), stdout=stdout, stderr=StringIO())
        return [Path(line) for line in stdout.getvalue().splitlines()]

    def call_failing(self, name, *args):
        stderr = StringIO()
        with self.assertRaises(SystemExit) as cm:
            call_command(name, *args, "--out", str(self.out), stdout=StringIO(), stderr=stderr)
        self.assertEqual(cm.exception.code, 2)
        return json.loads(stderr.getvalue())

    def gen(self, *args):
        (path,) = self.call("gen", *args)
        return path


class GenCommandTests(CommandTestMixin, SimpleTestCase):

    def test_euclidean(self):
        path = self.gen("--n", "4", "--m", "3", "--k", "2", "--seed", "5")
        self.assertEqual(path.name, "euclidean-n4-m3-k2-s5.json")
        inst = load_instance(path)
        self.assertEqual((inst.n, inst.m, inst.k_max), (4, 3, 2))

    def test_osmc(self):
        path = self.gen("--kind", "osmc", "--n", "5", "--m", "4", "--k", "2", "--name", "cover.json")
        self.assertEqual(path.name, "cover.json")
        self.assertEqual(load_instance(path).m, 4)

    def test_m_below_k(self):
        error = self.call_failing("gen", "--n", "4", "--m", "1", "--k", "2")
        self.assertEqual(error["error"], "infeasible_requirement")
        self.assertEqual(error["command"], "gen")

    def test_default_output_directory(self):
        with override_settings(MFL_OUTPUT_DIR=self.out / "default"):
            stdout = StringIO()
            call_command("gen", "--n", "2", "--m", "2", stdout=stdout)
        self.assertTrue(Path(stdout.getvalue().strip()).is_relative_to(self.out / "default"))


class TrialCommandTests(CommandTestMixin, SimpleTestCase):

    def setUp(self):
        super().setUp()
        self.instance = self.gen("--kind", "nonmetric", "--n", "4", "--m", "4", "--k", "2", "--seed", "1")

    def test_run_and_replay(self):
        trace, csv, summary = self.call("run", "--instance", str(self.instance), "--seed", "3")
        self.assertTrue(trace.name.endswith(".trace.jsonl"))
        self.assertTrue(csv.exists())
        document = json.loads(summary.read_text(encoding="utf-8"))
        self.assertGreaterEqual(document["trial"]["ratio"], 1 - 1e-9)

        (replayed,) = self.call("replay", "--instance", str(self.instance), "--trace", str(trace))
        self.assertEqual(json.loads(replayed.read_text(encoding="utf-8")), document["solution"])

    def test_run_wrapper(self):
        *_paths, summary = self.call("run", "--instance", str(self.instance), "--algo", "ommfl", "--ofl", "meyerson")
        self.assertIn("-ommfl-meyerson-", summary.name)
        self.assertIn("decomposition", json.loads(summary.read_text(encoding="utf-8")))

    def test_bare_plugin_rejects_k_two(self):
        error = self.call_failing("run", "--instance", str(self.instance), "--algo", "ofl")
        self.assertEqual(error["error"], "valueerror")

    def test_replay_of_other_instance(self):
        trace, _csv, _summary = self.call("run", "--instance", str(self.instance))
        other = self.gen("--kind", "nonmetric", "--n", "4", "--m", "4", "--k", "2", "--seed", "2")
        error = self.call_failing("replay", "--instance", str(other), "--trace", str(trace))
        self.assertEqual(error["error"], "trace_mismatch")

    def test_worst(self):
        small = self.gen("--n", "3", "--m", "3", "--k", "1")
        (path,) = self.call("worst", "--instance", str(small), "--seeds", "2")
        document = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual(document["orders_evaluated"], 6)
        self.assertTrue(document["exhaustive"])

    def test_oracle(self):
        (path,) = self.call("oracle", "--instance", str(self.instance), "--prefixes")
        document = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual(len(document["prefix_opts"]), 5)
        self.assertEqual(document["prefix_opts"][-1], document["cost"])

    def test_oracle_cap(self):
        error = self.call_failing("oracle", "--instance", str(self.instance), "--oracle-cap", "2")
        self.assertEqual(error["error"], "instance_too_large")

    def test_missing_instance(self):
        error = self.call_failing("run", "--instance", str(self.out / "missing.json"))
        self.assertEqual(error["command"], "run")

    def test_invalid_instance(self):
        path = self.out / "negative.json"
        data = json.loads(self.instance.read_text(encoding="utf-8"))
        data["facilities"][0]["opening_cost"] = -1.0
        path.write_text(json.dumps(data), encoding="utf-8")
        error = self.call_failing("run", "--instance", str(path))
        self.assertEqual(error["error"], "negative_cost")


class BenchCommandTests(CommandTestMixin, TestCase):

    def test_bench(self):
        instance = self.gen("--kind", "nonmetric", "--n", "4", "--m", "4", "--k", "2")
        csv, summary = self.call("bench", "--instance", str(instance), "--seeds", "4", "--orders", "2")
        document = json.loads(summary.read_text(encoding="utf-8"))
        self.assertEqual(document["trials"], 8)
        self.assertTrue(csv.name.endswith("-onmfl-bench.csv"))
        self.assertFalse(BenchmarkRun.objects.exists())

    def test_store(self):
        instance = self.gen("--n", "3", "--m", "3", "--k", "2")
        self.call("bench", "--instance", str(instance), "--algo", "ommfl", "--seeds", "3", "--store")
        run = BenchmarkRun.objects.get()
        self.assertEqual(run.algorithm, "ommfl")
        self.assertEqual(run.ofl, "greedy")
        self.assertEqual(run.seed_count, 3)
        self.assertEqual(run.output_dir, str(self.out))
        self.assertGreaterEqual(run.max_ratio, run.mean_ratio)
