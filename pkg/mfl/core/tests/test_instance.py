from django.test import SimpleTestCase

from mfl.core.instance import Instance, OsmcInstance, Solution, Subset


def two_facility_instance(**kwargs):
    return Instance.build(
        facilities={"A": 3.0, "B": 5.0},
        clients={"c1": {"A": 1.0, "B": 4.0}, "c2": {"B": 2.0}},
        k=kwargs.pop("k", 1),
        **kwargs,
    )


class InstanceTests(SimpleTestCase):

    def test_scalar_k_is_stored_as_vector(self):
        inst = two_facility_instance(k=2)
        self.assertEqual(inst.requirement, (2, 2))
        self.assertEqual(inst.scalar_k, 2)
        self.assertEqual(inst.k_of("c2"), 2)

    def test_per_client_requirement(self):
        inst = two_facility_instance(k=[2, 1])
        self.assertIsNone(inst.scalar_k)
        self.assertEqual(inst.k_max, 2)
        self.assertEqual(inst.k_of("c2"), 1)

    def test_sizes_and_declaration_order(self):
        inst = two_facility_instance()
        self.assertEqual((inst.m, inst.n), (2, 2))
        self.assertEqual(inst.facility_ids, ("A", "B"))
        self.assertEqual(inst.facility_index, {"A": 0, "B": 1})
        self.assertEqual(inst.arrival_order, ("c1", "c2"))

    def test_absent_cost_means_forbidden(self):
        client = two_facility_instance().client("c2")
        self.assertIsNone(client.cost("A"))
        self.assertFalse(client.allows("A"))
        self.assertTrue(client.allows("B"))

    def test_cost_extremes(self):
        inst = two_facility_instance()
        self.assertEqual((inst.f_max, inst.f_min), (5.0, 3.0))
        self.assertEqual((inst.c_max, inst.c_min), (4.0, 1.0))
        self.assertEqual(inst.connection_cost_extremes(["c2"]), (2.0, 2.0))

    def test_with_arrival_order_keeps_content(self):
        inst = two_facility_instance()
        reordered = inst.with_arrival_order(["c2", "c1"])
        self.assertEqual(reordered.arrival_order, ("c2", "c1"))
        self.assertEqual(reordered.clients, inst.clients)
        self.assertNotEqual(reordered.content_hash, inst.content_hash)


class SolutionTests(SimpleTestCase):

    def test_open_and_assign_report_changes(self):
        sol = Solution()
        self.assertTrue(sol.open("A"))
        self.assertFalse(sol.open("A"))
        self.assertTrue(sol.assign("c1", "A"))
        self.assertFalse(sol.assign("c1", "A"))
        self.assertEqual(sol.facilities_of("c1"), {"A"})
        self.assertEqual(sol.facilities_of("c2"), set())

    def test_copy_is_independent(self):
        sol = Solution()
        sol.open("A")
        sol.assign("c1", "A")
        copy = sol.copy()
        copy.assign("c1", "B")
        self.assertEqual(sol.facilities_of("c1"), {"A"})


class OsmcInstanceTests(SimpleTestCase):

    def test_rejects_bad_requirement(self):
        with self.assertRaises(ValueError):
            OsmcInstance(universe_size=1, subsets=(), k=0, arrivals=())

    def test_rejects_member_outside_universe(self):
        with self.assertRaises(ValueError):
            OsmcInstance(universe_size=2, subsets=(Subset("S1", 1.0, frozenset({2})),), k=1, arrivals=(0,))

    def test_rejects_repeated_arrival(self):
        with self.assertRaises(ValueError):
            OsmcInstance(universe_size=2, subsets=(Subset("S1", 1.0, frozenset({0, 1})),), k=1, arrivals=(0, 0))
