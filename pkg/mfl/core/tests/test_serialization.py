import json
import tempfile
from pathlib import Path

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from mfl.core.instance import Instance
from mfl.core.serialization import (
    canonical_json,
    dump_instance,
    instance_from_dict,
    instance_hash,
    instance_to_dict,
    load_instance,
)


class InstanceDocumentTests(SimpleTestCase):

    def setUp(self):
        self.inst = Instance.build(
            facilities={"A": 3.0, "B": 5.0},
            clients={"c1": {"A": 1.0}, "c2": {"A": 2.0, "B": 0.5}},
            k=[1, 2],
            metric=False,
            arrival_order=["c2", "c1"],
        )

    def test_document_keys(self):
        data = instance_to_dict(self.inst)
        self.assertEqual(set(data), {"facilities", "clients", "k", "metric", "arrival_order"})
        self.assertEqual(data["facilities"][0], {"id": "A", "opening_cost": 3.0})
        self.assertEqual(data["clients"][0], {"id": "c1", "costs": {"A": 1.0}})
        self.assertEqual(data["k"], [1, 2])

    def test_uniform_k_is_written_as_integer(self):
        inst = Instance.build(facilities={"A": 1.0}, clients={"c1": {"A": 1.0}}, k=1)
        self.assertEqual(instance_to_dict(inst)["k"], 1)

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = dump_instance(self.inst, Path(tmp) / "instances" / "small.json")
            loaded = load_instance(path)
        self.assertEqual(loaded.arrival_order, ("c2", "c1"))
        self.assertEqual(loaded.client("c2").cost("B"), 0.5)
        self.assertEqual(instance_hash(loaded), instance_hash(self.inst))

    def test_missing_arrival_order_defaults_to_client_order(self):
        data = instance_to_dict(self.inst)
        del data["arrival_order"]
        self.assertEqual(instance_from_dict(data).arrival_order, ("c1", "c2"))

    def test_malformed_document(self):
        with self.assertRaises(ValidationError) as cm:
            instance_from_dict({"facilities": [{"id": "A"}], "clients": [], "k": 1})
        self.assertEqual(cm.exception.code, "malformed_instance")

    def test_invalid_json_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "broken.json"
            path.write_text("{not json")
            with self.assertRaises(ValidationError) as cm:
                load_instance(path)
        self.assertEqual(cm.exception.code, "malformed_instance")

    def test_hash_ignores_key_order(self):
        self.assertEqual(canonical_json({"b": 1, "a": [1, 2]}), '{"a":[1,2],"b":1}')
        data = instance_to_dict(self.inst)
        shuffled = json.loads(json.dumps(data, sort_keys=False))
        self.assertEqual(instance_hash(instance_from_dict(shuffled)), instance_hash(self.inst))
