import math

from django.test import SimpleTestCase

from mfl.flowgraph.network import build_network, minimum_cut

TEXTBOOK_NETWORK = [
    ("s", "v1", 16), ("s", "v2", 13), ("v1", "v3", 12), ("v2", "v1", 4), ("v2", "v4", 14),
    ("v3", "v2", 9), ("v3", "t", 20), ("v4", "v3", 7), ("v4", "t", 4),
]


class MinimumCutTests(SimpleTestCase):

    def test_textbook_network(self):
        flow, cut = minimum_cut(TEXTBOOK_NETWORK, "s", "t")
        self.assertEqual(flow, 23)
        self.assertEqual(sum(c for _v, _w, c in cut), 23)

    def test_disconnected_sink_has_empty_cut(self):
        flow, cut = minimum_cut([("s", "a", 1.0), ("b", "t", 1.0)], "s", "t")
        self.assertEqual(flow, 0)
        self.assertEqual(cut, [])

    def test_missing_sink(self):
        self.assertEqual(minimum_cut([("s", "a", 1.0)], "s", "t"), (0.0, []))

    def test_infinite_path(self):
        flow, cut = minimum_cut([("s", "a", math.inf), ("a", "t", math.inf)], "s", "t")
        self.assertTrue(math.isinf(flow))
        self.assertEqual(cut, [])

    def test_infinite_edge_is_never_cut(self):
        flow, cut = minimum_cut([("s", "a", math.inf), ("a", "t", 0.25)], "s", "t")
        self.assertEqual(flow, 0.25)
        self.assertEqual(cut, [("a", "t", 0.25)])

    def test_infinite_edges_have_no_capacity(self):
        network = build_network([("s", "a", math.inf), ("a", "t", 0.5)])
        self.assertNotIn("capacity", network.edges["s", "a"])
        self.assertEqual(network.edges["a", "t"]["capacity"], 0.5)
